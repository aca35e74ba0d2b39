#pragma once

#include <cstdint>

#include "ufl/instance.hpp"
#include "ufl/params.hpp"

namespace testoracle {

// Exhaustive optimum computed the flat way: every facility subset mask in
// ascending order, per-client minima summed fresh each time. Kept independent
// of the library's pruned depth-first scan on purpose.
double flat_subset_opt(const ufl::Instance& inst, std::uint32_t* best_mask = nullptr);

// The two quadratic left-hand sides evaluated from the proof-stage
// arrangement of the remote-arm inequalities (products of the raw bracketed
// factors), rather than from the collected coefficient tables.
void remote_arm_lhs_reference(double gamma, double k, double l, double r,
                              const ufl::ParamSet& params, double& lhs1, double& lhs2);

}  // namespace testoracle
