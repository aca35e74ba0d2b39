#include "ufl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ufl/common.hpp"

namespace ufl {

namespace {

constexpr double kDedupeTol = 1e-11;  // min gap between split boundaries
constexpr double kUsageTol = 1e-12;   // prefix-sum matching tolerance
constexpr double kSnapTol = 1e-9;     // close-mass snap at exactly 1

struct WorkCopy {
  std::size_t parent;
  double ybar;
  double ystar_share;
  std::vector<char> used;  // per client
};

// Sorts copy indices of one client's used set by (distance, copy id).
std::vector<std::size_t> sorted_walk(const std::vector<WorkCopy>& copies,
                                     const std::vector<std::vector<double>>& dist,
                                     std::size_t j) {
  std::vector<std::size_t> walk;
  for (std::size_t c = 0; c < copies.size(); ++c)
    if (copies[c].used[j]) walk.push_back(c);
  std::stable_sort(walk.begin(), walk.end(), [&](std::size_t a, std::size_t b) {
    double da = dist[copies[a].parent][j], db = dist[copies[b].parent][j];
    if (da != db) return da < db;
    return a < b;
  });
  return walk;
}

}  // namespace

AugmentedSolution augment(const FractionalSolution& fs, const ClientDecomposition& dec,
                          double gamma, const Instance& inst) {
  if (!(gamma >= 1.0)) throw input_error("gamma must be at least 1");
  if (!(gamma <= 2.1)) throw input_error("gamma too large");
  std::size_t nf = fs.n_facilities, nc = fs.n_clients;
  if (nf != inst.num_facilities() || nc != inst.num_clients())
    throw input_error("fractional solution does not match the instance");
  if (dec.Cstar.size() != nc || dec.Fstar.size() != nc)
    throw input_error("decomposition does not match the instance");

  // Per facility: ascending distinct positive assignment values become the
  // segment boundaries; every client's usage is then a prefix of segments.
  std::vector<WorkCopy> copies;
  for (std::size_t i = 0; i < nf; ++i) {
    std::vector<double> values;
    for (std::size_t j = 0; j < nc; ++j) {
      double v = fs.x_at(i, j);
      if (v > 0.0) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    std::vector<double> bounds;
    for (double v : values)
      if (bounds.empty() || v - bounds.back() > kDedupeTol) bounds.push_back(v);
    double prev = 0.0;
    for (double b : bounds) {
      WorkCopy c{i, 0.0, b - prev, std::vector<char>(nc, 0)};
      copies.push_back(std::move(c));
      prev = b;
    }
    if (fs.y[i] - prev > 1e-15) {
      // Facility mass above the largest assignment: carried as an unused copy.
      copies.push_back(WorkCopy{i, 0.0, fs.y[i] - prev, std::vector<char>(nc, 0)});
    }
    // Usage: client j uses the prefix of segments whose share sums to x_ij.
    std::size_t first = copies.size();
    while (first > 0 && copies[first - 1].parent == i) --first;
    for (std::size_t j = 0; j < nc; ++j) {
      double xij = fs.x_at(i, j);
      if (xij <= 0.0) continue;
      double acc = 0.0;
      for (std::size_t c = first; c < copies.size(); ++c) {
        if (acc + copies[c].ystar_share <= xij + kUsageTol) {
          copies[c].used[j] = 1;
          acc += copies[c].ystar_share;
        } else {
          break;
        }
      }
    }
  }

  // Scale, then split copies whose scaled mass exceeds 1.
  {
    std::vector<WorkCopy> next;
    next.reserve(copies.size() + 4);
    for (auto& c : copies) {
      c.ybar = gamma * c.ystar_share;
      if (c.ybar > 1.0) {
        WorkCopy head{c.parent, 1.0, 1.0 / gamma, c.used};
        WorkCopy tail{c.parent, c.ybar - 1.0, c.ystar_share - 1.0 / gamma, c.used};
        next.push_back(std::move(head));
        if (tail.ybar > 1e-15) next.push_back(std::move(tail));
      } else if (c.ybar > 1e-15) {
        next.push_back(std::move(c));
      }
    }
    copies = std::move(next);
  }

  // Distance matrix parent x client, shared by all downstream stages.
  std::vector<std::vector<double>> dist(nf, std::vector<double>(nc, 0.0));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nc; ++j) dist[i][j] = inst.dist(i, j);

  // Collect, per copy, the mass offsets at which some client's close prefix
  // would end strictly inside the copy; split at the union of those offsets
  // so every close set becomes a whole-copy prefix.
  std::vector<std::vector<double>> cuts(copies.size());
  for (std::size_t j = 0; j < nc; ++j) {
    double acc = 0.0;
    for (std::size_t c : sorted_walk(copies, dist, j)) {
      double nb = acc + copies[c].ybar;
      if (acc < 1.0 - kUsageTol && nb > 1.0 + kUsageTol) {
        double offset = 1.0 - acc;
        if (offset > kDedupeTol && copies[c].ybar - offset > kDedupeTol)
          cuts[c].push_back(offset);
      }
      acc = nb;
      if (acc >= 1.0 + kUsageTol) break;
    }
  }
  {
    std::vector<WorkCopy> next;
    next.reserve(copies.size() + 8);
    for (std::size_t c = 0; c < copies.size(); ++c) {
      auto& offs = cuts[c];
      if (offs.empty()) {
        next.push_back(std::move(copies[c]));
        continue;
      }
      std::sort(offs.begin(), offs.end());
      offs.erase(std::unique(offs.begin(), offs.end(),
                             [](double a, double b) { return b - a <= kDedupeTol; }),
                 offs.end());
      double prev = 0.0;
      for (double w : offs) {
        WorkCopy piece{copies[c].parent, w - prev, (w - prev) / gamma, copies[c].used};
        next.push_back(std::move(piece));
        prev = w;
      }
      WorkCopy last{copies[c].parent, copies[c].ybar - prev,
                    (copies[c].ybar - prev) / gamma, copies[c].used};
      next.push_back(std::move(last));
    }
    copies = std::move(next);
  }

  AugmentedSolution aug;
  aug.gamma = gamma;
  aug.n_parents = nf;
  aug.n_clients = nc;
  aug.dist = std::move(dist);
  aug.parent_cost.resize(nf);
  for (std::size_t i = 0; i < nf; ++i) aug.parent_cost[i] = inst.facilities[i].open_cost;
  aug.client_locations.reserve(nc);
  for (std::size_t j = 0; j < nc; ++j) aug.client_locations.push_back(inst.clients[j].location);
  aug.copies.reserve(copies.size());
  for (const auto& c : copies)
    aug.copies.push_back(FacilityCopy{c.parent, c.ybar, c.ystar_share});

  aug.close_set.assign(nc, {});
  aug.distant_set.assign(nc, {});
  aug.close_parents.assign(nc, {});
  aug.Cval.assign(nc, 0.0);
  aug.Mval.assign(nc, 0.0);
  aug.Dval.assign(nc, 0.0);
  aug.r.assign(nc, 0.0);
  aug.rprime.assign(nc, 0.0);
  aug.Cstar = dec.Cstar;
  aug.Fstar = dec.Fstar;

  for (std::size_t j = 0; j < nc; ++j) {
    auto walk = sorted_walk(copies, aug.dist, j);
    double close_mass = 0.0, close_cost = 0.0;
    double distant_mass = 0.0, distant_cost = 0.0;
    double mval = 0.0;
    for (std::size_t c : walk) {
      double d = aug.copy_dist(c, j);
      if (close_mass < 1.0 - kSnapTol) {
        aug.close_set[j].push_back(c);
        close_mass += copies[c].ybar;
        close_cost += copies[c].ybar * d;
        mval = d;  // walk is sorted, so the last close copy is the farthest
      } else {
        aug.distant_set[j].push_back(c);
        distant_mass += copies[c].ybar;
        distant_cost += copies[c].ybar * d;
      }
    }
    if (std::fabs(close_mass - 1.0) > kSnapTol)
      throw solver_error("close mass of client " + std::to_string(j) +
                         " is not 1 after splitting");
    aug.Cval[j] = close_cost / close_mass;
    aug.Mval[j] = mval;
    aug.Dval[j] = distant_mass > 0.0 ? distant_cost / distant_mass : 0.0;
    if (!aug.distant_set[j].empty() && aug.Fstar[j] > 1e-12) {
      double rj = (aug.Dval[j] - aug.Cstar[j]) / aug.Fstar[j];
      aug.r[j] = std::clamp(rj, 0.0, 1.0);
    }
    aug.rprime[j] = (gamma - 1.0) * aug.r[j];

    for (std::size_t c : aug.close_set[j]) aug.close_parents[j].push_back(copies[c].parent);
    std::sort(aug.close_parents[j].begin(), aug.close_parents[j].end());
    aug.close_parents[j].erase(
        std::unique(aug.close_parents[j].begin(), aug.close_parents[j].end()),
        aug.close_parents[j].end());
  }
  return aug;
}

double avg_distance(std::size_t j, const std::vector<std::size_t>& copy_ids,
                    const AugmentedSolution& aug) {
  double mass = 0.0, cost = 0.0;
  for (std::size_t c : copy_ids) {
    mass += aug.copies[c].ystar_share;
    cost += aug.copies[c].ystar_share * aug.copy_dist(c, j);
  }
  return mass > 0.0 ? cost / mass : 0.0;
}

std::string augment_dump_tsv(const AugmentedSolution& aug) {
  std::ostringstream out;
  out << "client\tCval\tMval\tDval\tr\n";
  for (std::size_t j = 0; j < aug.n_clients; ++j)
    out << j << "\t" << format_double(aug.Cval[j]) << "\t" << format_double(aug.Mval[j])
        << "\t" << format_double(aug.Dval[j]) << "\t" << format_double(aug.r[j]) << "\n";
  return out.str();
}

}  // namespace ufl
