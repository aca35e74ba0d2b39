#include "ufl/jms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ufl/common.hpp"

namespace ufl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Event {
  double t = kInf;
  long long facility = -1;
  long long client = -1;  // -1 for opening events

  bool before(const Event& o) const {
    if (t != o.t) return t < o.t;
    if (facility != o.facility) return facility < o.facility;
    return client < o.client;
  }
};

// Smallest t >= now at which facility i's contributions cover its cost. A
// zero-cost facility with no contribution yet waits for the first client to
// reach it rather than opening unprompted.
double open_time(const Instance& inst, const JmsState& st, std::size_t i, double now) {
  double base = 0.0;
  std::vector<double> xs;
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    double d = inst.dist(i, j);
    if (st.connected[j] >= 0)
      base += std::max(inst.dist((std::size_t)st.connected[j], j) - d, 0.0);
    else
      xs.push_back(d);
  }
  std::sort(xs.begin(), xs.end());
  const double f = inst.facilities[i].open_cost;

  double now_val = base;
  std::size_t idx = 0;
  double cnt = 0.0, sum = 0.0;
  while (idx < xs.size() && xs[idx] <= now) {
    now_val += now - xs[idx];
    cnt += 1.0;
    sum += xs[idx];
    ++idx;
  }
  if (f == 0.0 && now_val == 0.0) {
    return idx < xs.size() ? std::max(xs[idx], now) : kInf;
  }
  if (now_val >= f - 1e-12) return now;

  double seg = now;
  while (true) {
    double next = idx < xs.size() ? xs[idx] : kInf;
    if (cnt > 0.0) {
      double t = (f - base + sum) / cnt;
      if (t <= next) return std::max(t, seg);
    }
    if (idx >= xs.size()) return kInf;
    cnt += 1.0;
    sum += xs[idx];
    seg = xs[idx];
    ++idx;
  }
}

}  // namespace

double JmsState::offer(const Instance& inst, std::size_t i, std::size_t j) const {
  double d = inst.dist(i, j);
  if (connected[j] >= 0)
    return std::max(inst.dist((std::size_t)connected[j], j) - d, 0.0);
  return std::max(alpha[j] - d, 0.0);
}

JmsState jms_run(const Instance& inst) {
  const std::size_t nf = inst.num_facilities();
  const std::size_t nc = inst.num_clients();
  JmsState st;
  st.alpha.assign(nc, 0.0);
  st.open.assign(nf, 0);
  st.connected.assign(nc, -1);

  std::size_t unconnected = nc;
  while (unconnected > 0) {
    Event best;
    for (std::size_t i = 0; i < nf; ++i) {
      if (st.open[i]) continue;
      Event e{open_time(inst, st, i, st.time), (long long)i, -1};
      if (e.before(best)) best = e;
    }
    for (std::size_t j = 0; j < nc; ++j) {
      if (st.connected[j] >= 0) continue;
      Event e;
      for (std::size_t i = 0; i < nf; ++i) {
        if (!st.open[i]) continue;
        double t = std::max(inst.dist(i, j), st.time);
        if (t < e.t || (t == e.t && (long long)i < e.facility)) {
          e.t = t;
          e.facility = (long long)i;
        }
      }
      e.client = (long long)j;
      if (e.facility >= 0 && e.before(best)) best = e;
    }
    if (!(best.t < kInf)) throw solver_error("dual ascent made no progress");

    st.time = best.t;
    const std::size_t fi = (std::size_t)best.facility;
    if (best.client < 0) {
      st.open[fi] = 1;
      for (std::size_t j = 0; j < nc; ++j) {
        double d = inst.dist(fi, j);
        if (st.connected[j] < 0) {
          if (d <= st.time + 1e-12) {
            st.connected[j] = best.facility;
            st.alpha[j] = st.time;
            --unconnected;
          }
        } else if (inst.dist((std::size_t)st.connected[j], j) > d) {
          st.connected[j] = best.facility;
        }
      }
    } else {
      st.connected[best.client] = best.facility;
      st.alpha[best.client] = st.time;
      --unconnected;
    }
  }
  return st;
}

namespace {

RoundedSolution solution_from_open(const Instance& inst, const std::vector<char>& open) {
  RoundedSolution sol;
  for (std::size_t i = 0; i < inst.num_facilities(); ++i)
    if (open[i]) {
      sol.open_parents.push_back(i);
      sol.facility_cost += inst.facilities[i].open_cost;
    }
  sol.assignment.resize(inst.num_clients());
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    std::size_t best = sol.open_parents.front();
    double best_d = inst.dist(best, j);
    for (std::size_t i : sol.open_parents) {
      double d = inst.dist(i, j);
      if (d < best_d) {
        best = i;
        best_d = d;
      }
    }
    sol.assignment[j] = best;
    sol.connection_cost += best_d;
  }
  sol.total_cost = sol.facility_cost + sol.connection_cost;
  return sol;
}

}  // namespace

RoundedSolution jms_solve(const Instance& inst) {
  JmsState st = jms_run(inst);
  return solution_from_open(inst, st.open);
}

RoundedSolution greedy_add_solve(const Instance& inst) {
  const std::size_t nf = inst.num_facilities();
  const std::size_t nc = inst.num_clients();
  std::vector<char> open(nf, 0);
  std::vector<double> cur(nc, kInf);

  std::size_t first = 0;
  double first_cost = kInf;
  for (std::size_t i = 0; i < nf; ++i) {
    double c = inst.facilities[i].open_cost;
    for (std::size_t j = 0; j < nc; ++j) c += inst.dist(i, j);
    if (c < first_cost) {
      first_cost = c;
      first = i;
    }
  }
  open[first] = 1;
  for (std::size_t j = 0; j < nc; ++j) cur[j] = inst.dist(first, j);

  while (true) {
    std::size_t best = nf;
    double best_gain = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      if (open[i]) continue;
      double gain = -inst.facilities[i].open_cost;
      for (std::size_t j = 0; j < nc; ++j) gain += std::max(cur[j] - inst.dist(i, j), 0.0);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == nf) break;
    open[best] = 1;
    for (std::size_t j = 0; j < nc; ++j) cur[j] = std::min(cur[j], inst.dist(best, j));
  }
  return solution_from_open(inst, open);
}

}  // namespace ufl
