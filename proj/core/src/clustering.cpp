#include "ufl/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "ufl/common.hpp"

namespace ufl {

namespace {

bool shares_close_parent(std::size_t a, std::size_t b, const AugmentedSolution& aug,
                         std::vector<char>& parent_mark) {
  for (std::size_t p : aug.close_parents[a]) parent_mark[p] = 1;
  bool hit = false;
  for (std::size_t p : aug.close_parents[b])
    if (parent_mark[p]) {
      hit = true;
      break;
    }
  for (std::size_t p : aug.close_parents[a]) parent_mark[p] = 0;
  return hit;
}

double pick_value(const AugmentedSolution& aug, std::size_t j) { return aug.cm(j); }

std::size_t argmin_value(const std::vector<std::size_t>& set, const AugmentedSolution& aug) {
  std::size_t best = set.front();
  double best_v = pick_value(aug, best);
  for (std::size_t j : set) {
    double v = pick_value(aug, j);
    if (v < best_v || (v == best_v && j < best)) {
      best = j;
      best_v = v;
    }
  }
  return best;
}

void remove_sorted(std::vector<std::size_t>& set, const std::vector<std::size_t>& gone) {
  std::vector<char> drop(set.empty() ? 0 : set.back() + 1, 0);
  for (std::size_t j : gone)
    if (j < drop.size()) drop[j] = 1;
  set.erase(std::remove_if(set.begin(), set.end(),
                           [&](std::size_t j) { return drop[j] != 0; }),
            set.end());
}

}  // namespace

std::string block_index_str(BlockIndex n) {
  if (n == 0) return "0";
  bool neg = n < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-(n + 1)) + 1 : (unsigned __int128)n;
  std::string out;
  while (u > 0) {
    out.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

RerouteResult reroute_cost(std::size_t jprime, std::size_t j, const AugmentedSolution& aug) {
  std::vector<char> used(aug.copies.size(), 0);
  for (std::size_t c : aug.close_set[j]) used[c] = 1;
  for (std::size_t c : aug.distant_set[j]) used[c] = 1;
  double mass = 0.0, cost_num = 0.0, z_num = 0.0;
  for (std::size_t c : aug.close_set[jprime]) {
    if (used[c]) continue;
    double w = aug.copies[c].ystar_share;
    mass += w;
    cost_num += w * aug.copy_dist(c, j);
    z_num += w * aug.copy_dist(c, jprime);
  }
  RerouteResult res;
  if (mass > 0.0) {
    res.cost = cost_num / mass;
    res.z = z_num / mass;
    res.empty = false;
  }
  return res;
}

bool classify_normal(std::size_t j, const AugmentedSolution& aug, const ParamSet& params) {
  double theta = ParamSet::theta_for(aug.gamma, params.K6);
  return aug.Cval[j] >= theta * aug.cm(j) - params.cmp_tol;
}

bool classify_arm(std::size_t jprime, std::size_t j, const AugmentedSolution& aug,
                  const ParamSet& params) {
  double d = aug.client_dist(jprime, j);
  double z = 0.998 * reroute_cost(jprime, j, aug).z;
  double lhs = aug.Cstar[j] + aug.Fstar[j];
  double rhs = d * d + z * z - 2.0 * d * z * std::sin(params.alpha);
  return lhs * lhs < rhs + params.cmp_tol;
}

double member_threshold(std::size_t j, const AugmentedSolution& aug, double eps) {
  double g = aug.gamma;
  return (1.0 - eps) * aug.Cval[j] + (3.0 - g) * aug.Mval[j] + (g - 1.0) * aug.Dval[j];
}

SavingResult saving_spending(std::size_t jprime, const std::vector<std::size_t>& eligible,
                             const AugmentedSolution& aug, const ParamSet& params,
                             double eps) {
  SavingResult res;
  std::vector<char> parent_mark(aug.n_parents, 0);
  for (std::size_t j : eligible) {
    double cost = reroute_cost(jprime, j, aug).cost;
    double thr = member_threshold(j, aug, eps);
    if (cost <= thr + params.cmp_tol) {
      res.nplus.push_back(j);
      res.saving += thr - cost;
    } else if (j != jprime && shares_close_parent(jprime, j, aug, parent_mark)) {
      res.nminus.push_back(j);
      res.spending += cost - thr;
    }
  }
  return res;
}

std::string to_string(SelectionRule r) {
  switch (r) {
    case SelectionRule::greedy: return "greedy";
    case SelectionRule::homo_normal: return "homo_normal";
    case SelectionRule::homo_weird: return "homo_weird";
  }
  return "unknown";
}

ClusteringResult cluster_greedy(const std::vector<std::size_t>& network,
                                const AugmentedSolution& aug, const ParamSet& params) {
  return cluster_greedy(network, network, aug, params);
}

ClusteringResult cluster_greedy(const std::vector<std::size_t>& network,
                                const std::vector<std::size_t>& membership,
                                const AugmentedSolution& aug, const ParamSet& params) {
  (void)params;
  ClusteringResult res;
  if (network.empty()) return res;
  std::vector<std::size_t> net = network, mem = membership;
  std::sort(net.begin(), net.end());
  std::sort(mem.begin(), mem.end());

  InvocationRecord inv;
  inv.kind = InvocationKind::greedy;
  inv.network = net;
  inv.s = pick_value(aug, argmin_value(net, aug));

  std::vector<char> parent_mark(aug.n_parents, 0);
  while (!net.empty()) {
    std::size_t center = argmin_value(net, aug);
    Cluster cl;
    cl.center = center;
    cl.members.push_back(center);
    for (std::size_t j : mem)
      if (j != center && shares_close_parent(center, j, aug, parent_mark))
        cl.members.push_back(j);
    std::sort(cl.members.begin(), cl.members.end());

    ClusterTrace tr;
    tr.cluster_index = res.clusters.size();
    tr.center = center;
    tr.rule = SelectionRule::greedy;
    tr.selection_scope = net;
    tr.membership_scope = mem;
    res.trace.push_back(std::move(tr));
    remove_sorted(net, cl.members);
    remove_sorted(mem, cl.members);
    res.clusters.push_back(std::move(cl));
  }
  res.invocations.push_back(std::move(inv));
  return res;
}

ClusteringResult cluster_homogeneous(const std::vector<std::size_t>& network,
                                     const AugmentedSolution& aug, const ParamSet& params) {
  return cluster_homogeneous(network, network, aug, params);
}

ClusteringResult cluster_homogeneous(const std::vector<std::size_t>& network,
                                     const std::vector<std::size_t>& membership,
                                     const AugmentedSolution& aug, const ParamSet& params) {
  ClusteringResult res;
  if (network.empty()) return res;
  std::vector<std::size_t> net = network, mem = membership;
  std::sort(net.begin(), net.end());
  std::sort(mem.begin(), mem.end());

  double s = pick_value(aug, argmin_value(net, aug));
  for (std::size_t j : net)
    if (pick_value(aug, j) > s * (1.0 + params.delta) + params.cmp_tol)
      throw input_error("cluster_homogeneous: client " + std::to_string(j) +
                        " outside the value band of its network");

  InvocationRecord inv;
  inv.kind = InvocationKind::homogeneous;
  inv.network = net;
  inv.s = s;

  while (!net.empty()) {
    std::vector<std::size_t> normals;
    for (std::size_t j : net)
      if (classify_normal(j, aug, params)) normals.push_back(j);

    std::size_t center;
    SelectionRule rule;
    SavingResult sel;
    if (!normals.empty()) {
      rule = SelectionRule::homo_normal;
      center = normals.front();
      sel = saving_spending(center, net, aug, params, params.eps1);
      for (std::size_t idx = 1; idx < normals.size(); ++idx) {
        SavingResult cand = saving_spending(normals[idx], net, aug, params, params.eps1);
        if (cand.saving > sel.saving) {
          center = normals[idx];
          sel = std::move(cand);
        }
      }
    } else {
      rule = SelectionRule::homo_weird;
      center = argmin_value(net, aug);
      sel = saving_spending(center, net, aug, params, params.eps1);
    }

    SavingResult memres = saving_spending(center, mem, aug, params, params.eps1);
    Cluster cl;
    cl.center = center;
    cl.members = memres.nplus;
    cl.members.insert(cl.members.end(), memres.nminus.begin(), memres.nminus.end());
    std::sort(cl.members.begin(), cl.members.end());
    cl.members.erase(std::unique(cl.members.begin(), cl.members.end()), cl.members.end());

    ClusterTrace tr;
    tr.cluster_index = res.clusters.size();
    tr.center = center;
    tr.rule = rule;
    tr.saving = sel.saving;
    tr.spending = sel.spending;
    tr.nminus = memres.nminus;
    tr.selection_scope = net;
    tr.membership_scope = mem;
    res.trace.push_back(std::move(tr));
    remove_sorted(net, cl.members);
    remove_sorted(mem, cl.members);
    res.clusters.push_back(std::move(cl));
  }
  res.invocations.push_back(std::move(inv));
  return res;
}

BlockSet build_blocks(const AugmentedSolution& aug, const ParamSet& params) {
  BlockSet bs;
  double s = 0.0;
  for (std::size_t j = 0; j < aug.n_clients; ++j) {
    double v = pick_value(aug, j);
    if (v > 0.0 && (s == 0.0 || v < s)) s = v;
  }
  bs.s = s;
  std::map<BlockIndex, Block> bands;
  long double log_step = std::log1p((long double)params.delta_prime);
  for (std::size_t j = 0; j < aug.n_clients; ++j) {
    double v = pick_value(aug, j);
    BlockIndex n = 0;
    if (v > 0.0)
      n = 1 + (BlockIndex)std::floor(std::log((long double)v / (long double)s) / log_step);
    Block& b = bands[n];
    b.index = n;
    b.clients.push_back(j);
    b.Cstar_sum += aug.Cstar[j];
    b.Fstar_sum += aug.Fstar[j];
  }
  bs.blocks.reserve(bands.size());
  for (auto& kv : bands) bs.blocks.push_back(std::move(kv.second));
  return bs;
}

IntervalSet cut_intervals(const BlockSet& blocks, const ParamSet& params) {
  IntervalSet out;
  const auto& bp = blocks.blocks;
  if (bp.empty()) return out;

  const double K2 = params.K2, K3 = params.K3;
  const double rat = (K2 - K3) / K2;
  const BlockIndex two_l = (BlockIndex)params.L_interval * 2;
  const BlockIndex Lc = (BlockIndex)params.L_interval;

  std::vector<char> covered(bp.size(), 0);
  long long first_scan = 0;
  if (bp[0].index == 0) {
    Interval iv;
    iv.lo = 0;
    iv.hi = 0;
    iv.block_positions.push_back(0);
    out.intervals.push_back(std::move(iv));
    covered[0] = 1;
    first_scan = 1;
  }

  long long p = (long long)bp.size() - 1;
  while (p >= first_scan) {
    BlockIndex r = bp[p].index;
    BlockIndex l = r;
    double c = 0.0, f = 0.0;
    std::deque<long long> held;  // positions in hand, front = highest band
    long long k = p;
    while (true) {
      bool exists = (k >= first_scan && bp[k].index == l);
      double Cb = exists ? bp[k].Cstar_sum : 0.0;
      double Fb = exists ? bp[k].Fstar_sum : 0.0;
      if (c >= K3 * (f + Fb) && Cb <= rat * c) {
        Interval iv;
        iv.lo = l;
        iv.hi = r;
        iv.reward = c;
        if (exists) {
          held.push_back(k);
          --k;
        }
        for (auto it = held.rbegin(); it != held.rend(); ++it) {
          iv.block_positions.push_back((std::size_t)*it);
          covered[*it] = 1;
        }
        out.intervals.push_back(std::move(iv));
        break;
      }
      if (exists) {
        c += Cb;
        f += Fb;
        held.push_back(k);
        --k;
      }
      if (c < K2 * f) break;  // facility-dominant range: discard to the sweep
      if (r - l + 1 == two_l) {
        while (!held.empty() && bp[held.front()].index >= l + Lc) {
          c -= bp[held.front()].Cstar_sum;
          f -= bp[held.front()].Fstar_sum;
          held.pop_front();
        }
        r -= Lc;
      }
      if (l == 0) break;  // nothing below; discard to the sweep
      --l;
    }
    p = k;
  }

  for (std::size_t pos = 0; pos < bp.size(); ++pos) {
    if (covered[pos]) continue;
    Interval iv;
    iv.lo = bp[pos].index;
    iv.hi = bp[pos].index;
    iv.block_positions.push_back(pos);
    out.intervals.push_back(std::move(iv));
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
            });
  return out;
}

ClusteringResult cluster_conn(const AugmentedSolution& aug, const ParamSet& params) {
  if (std::abs(aug.gamma - params.gamma) > 1e-12)
    throw input_error("cluster_conn: solution gamma differs from parameter gamma");
  double Ctot = 0.0, Ftot = 0.0;
  for (std::size_t j = 0; j < aug.n_clients; ++j) {
    Ctot += aug.Cstar[j];
    Ftot += aug.Fstar[j];
  }
  if (!(Ctot > params.K1 * Ftot))
    throw input_error("cluster_conn: instance is not connection-dominant");

  BlockSet blocks = build_blocks(aug, params);
  IntervalSet ivs = cut_intervals(blocks, params);

  ClusteringResult res;
  std::vector<std::size_t> unclustered(aug.n_clients);
  for (std::size_t j = 0; j < aug.n_clients; ++j) unclustered[j] = j;

  int inv_id = 0;
  for (const Interval& iv : ivs.intervals) {
    std::vector<char> in_net(aug.n_clients, 0);
    for (std::size_t pos : iv.block_positions)
      for (std::size_t j : blocks.blocks[pos].clients) in_net[j] = 1;
    std::vector<std::size_t> net;
    for (std::size_t j : unclustered)
      if (in_net[j]) net.push_back(j);
    if (net.empty()) continue;

    double Cnet = 0.0, Fnet = 0.0;
    for (std::size_t j : net) {
      Cnet += aug.Cstar[j];
      Fnet += aug.Fstar[j];
    }
    bool homog = iv.size() >= 2 && Cnet > params.K4 * Fnet;
    ClusteringResult sub = homog ? cluster_homogeneous(net, unclustered, aug, params)
                                 : cluster_greedy(net, unclustered, aug, params);

    std::vector<std::size_t> taken;
    for (std::size_t ci = 0; ci < sub.clusters.size(); ++ci) {
      sub.trace[ci].cluster_index = res.clusters.size();
      sub.trace[ci].invocation = inv_id;
      taken.insert(taken.end(), sub.clusters[ci].members.begin(),
                   sub.clusters[ci].members.end());
      res.clusters.push_back(std::move(sub.clusters[ci]));
      res.trace.push_back(std::move(sub.trace[ci]));
    }
    for (auto& rec : sub.invocations) {
      rec.id = inv_id;
      rec.interval_lo = iv.lo;
      rec.interval_hi = iv.hi;
      rec.interval_reward = iv.reward;
      res.invocations.push_back(std::move(rec));
    }
    std::sort(taken.begin(), taken.end());
    remove_sorted(unclustered, taken);
    ++inv_id;
  }
  if (!unclustered.empty())
    throw solver_error("cluster_conn: " + std::to_string(unclustered.size()) +
                       " clients left unclustered");
  return res;
}

std::string clustering_dump_tsv(const ClusteringResult& res) {
  std::ostringstream os;
  os << "cluster\tcenter\trule\tsaving\tspending\tmembers\n";
  for (std::size_t i = 0; i < res.clusters.size(); ++i) {
    const Cluster& cl = res.clusters[i];
    const ClusterTrace& tr = res.trace[i];
    os << i << '\t' << cl.center << '\t' << to_string(tr.rule) << '\t'
       << format_double(tr.saving) << '\t' << format_double(tr.spending) << '\t';
    for (std::size_t m = 0; m < cl.members.size(); ++m) {
      if (m) os << ',';
      os << cl.members[m];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ufl
