#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ufl/geometry.hpp"

namespace ufl {

struct Facility {
  int id = 0;
  double open_cost = 0.0;
  Point location;
};

struct Client {
  int id = 0;
  Point location;
};

// Problem input: facilities with opening costs and clients, all in R^dim.
// Immutable after construction; distances are computed on demand.
struct Instance {
  int dim = 0;
  std::vector<Facility> facilities;
  std::vector<Client> clients;

  std::size_t num_facilities() const { return facilities.size(); }
  std::size_t num_clients() const { return clients.size(); }

  // Distance between facility i and client j (positional indices).
  double dist(std::size_t i, std::size_t j) const {
    return distance(facilities[i].location, clients[j].location);
  }

  // Throws input_error if any invariant fails: at least one facility and
  // one client, nonnegative finite costs, finite coordinates of shared
  // dimension, unique ids within each side.
  void validate() const;
};

// Line-oriented text format; '#' starts a comment line. Reals are written
// as shortest round-trip decimals, so save/load is bit-exact.
std::string save_instance(const Instance& inst);
Instance load_instance(std::istream& in);
Instance load_instance_string(const std::string& text);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

}  // namespace ufl
