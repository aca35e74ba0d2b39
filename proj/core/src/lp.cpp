#include "ufl/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ufl/common.hpp"

namespace ufl {

namespace {

// Dense simplex tableau over the column layout
//   [x_ij (nf*nc)] [y_i (nf)] [s_ij (nf*nc)] [a_j (nc)]
// with rows: nc assignment equalities (artificial basis), then nf*nc rows
// x_ij - y_i + s_ij = 0 (slack basis). Two reduced-cost rows are carried
// through every pivot so phase 2 starts immediately after phase 1 and the
// duals can be read from the columns that started as the identity.
struct Simplex {
  std::size_t nf, nc;
  std::size_t nx, ny, ns, na;
  std::size_t n_cols;   // structural + slack + artificial
  std::size_t m_rows;   // nc + nf*nc
  std::size_t rhs;      // column index of the right-hand side
  std::vector<double> tab;
  std::vector<std::size_t> basis;
  double enter_tol;
  long long iterations = 0;
  long long cap;

  std::size_t x_col(std::size_t i, std::size_t j) const { return i * nc + j; }
  std::size_t y_col(std::size_t i) const { return nx + i; }
  std::size_t s_col(std::size_t i, std::size_t j) const { return nx + ny + i * nc + j; }
  std::size_t a_col(std::size_t j) const { return nx + ny + ns + j; }
  std::size_t eq_row(std::size_t j) const { return j; }
  std::size_t ineq_row(std::size_t i, std::size_t j) const { return nc + i * nc + j; }

  double& at(std::size_t r, std::size_t c) { return tab[r * (n_cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return tab[r * (n_cols + 1) + c]; }

  // row m_rows: phase-2 reduced costs; row m_rows+1: phase-1 reduced costs.
  std::size_t obj2() const { return m_rows; }
  std::size_t obj1() const { return m_rows + 1; }

  explicit Simplex(const Instance& inst, double tol) {
    nf = inst.num_facilities();
    nc = inst.num_clients();
    nx = nf * nc;
    ny = nf;
    ns = nf * nc;
    na = nc;
    n_cols = nx + ny + ns + na;
    m_rows = nc + nf * nc;
    rhs = n_cols;
    enter_tol = tol;
    cap = 200000 + 200 * static_cast<long long>(m_rows + n_cols);
    tab.assign((m_rows + 2) * (n_cols + 1), 0.0);
    basis.resize(m_rows);

    for (std::size_t j = 0; j < nc; ++j) {
      std::size_t r = eq_row(j);
      for (std::size_t i = 0; i < nf; ++i) at(r, x_col(i, j)) = 1.0;
      at(r, a_col(j)) = 1.0;
      at(r, rhs) = 1.0;
      basis[r] = a_col(j);
    }
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = 0; j < nc; ++j) {
        std::size_t r = ineq_row(i, j);
        at(r, x_col(i, j)) = 1.0;
        at(r, y_col(i)) = -1.0;
        at(r, s_col(i, j)) = 1.0;
        basis[r] = s_col(i, j);
      }

    // Phase-2 reduced costs: true objective; the initial basis has zero
    // phase-2 cost, so no elimination is needed.
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t j = 0; j < nc; ++j) at(obj2(), x_col(i, j)) = inst.dist(i, j);
      at(obj2(), y_col(i)) = inst.facilities[i].open_cost;
    }
    // Phase-1 reduced costs: sum of artificials, with the artificial basis
    // eliminated (subtract every equality row).
    for (std::size_t j = 0; j < nc; ++j) at(obj1(), a_col(j)) = 1.0;
    for (std::size_t j = 0; j < nc; ++j) {
      std::size_t r = eq_row(j);
      for (std::size_t c = 0; c <= n_cols; ++c) at(obj1(), c) -= at(r, c);
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    double piv = at(pr, pc);
    double inv = 1.0 / piv;
    for (std::size_t c = 0; c <= n_cols; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < m_rows + 2; ++r) {
      if (r == pr) continue;
      double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c <= n_cols; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
    ++iterations;
  }

  // Bland: entering = smallest column (artificials excluded) with negative
  // reduced cost; leaving = min ratio, ties by smallest basic variable.
  bool step(std::size_t obj_row) {
    std::size_t enter = n_cols;
    for (std::size_t c = 0; c < nx + ny + ns; ++c) {
      if (at(obj_row, c) < -enter_tol) {
        enter = c;
        break;
      }
    }
    if (enter == n_cols) return false;

    std::size_t leave = m_rows;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < m_rows; ++r) {
      double coef = at(r, enter);
      if (coef <= enter_tol * 0.1) continue;
      double ratio = at(r, rhs) / coef;
      if (leave == m_rows || ratio < best_ratio - 1e-15 ||
          (std::fabs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == m_rows) throw solver_error("relaxation is unbounded");
    pivot(leave, enter);
    if (iterations > cap)
      throw solver_error("simplex iteration cap exceeded after " +
                         std::to_string(iterations) + " pivots");
    return true;
  }

  void run() {
    while (step(obj1())) {
    }
    if (at(obj1(), rhs) < -1e-7)
      throw solver_error("relaxation phase 1 ended infeasible");
    // Degenerate artificials still in the basis sit at value zero; swap each
    // for any structural/slack column so duals come out of a clean basis.
    for (std::size_t r = 0; r < m_rows; ++r) {
      if (basis[r] < nx + ny + ns) continue;
      for (std::size_t c = 0; c < nx + ny + ns; ++c) {
        if (std::fabs(at(r, c)) > 1e-7) {
          pivot(r, c);
          break;
        }
      }
    }
    while (step(obj2())) {
    }
  }
};

}  // namespace

LpResult solve_relaxation(const Instance& inst, double lp_tol) {
  inst.validate();
  if (!(lp_tol > 0.0)) throw input_error("lp_tol must be positive");
  Simplex sx(inst, lp_tol);
  sx.run();

  std::size_t nf = sx.nf, nc = sx.nc;
  LpResult res;
  res.iterations = sx.iterations;
  auto& fs = res.primal;
  fs.n_facilities = nf;
  fs.n_clients = nc;
  fs.y.assign(nf, 0.0);

  for (std::size_t r = 0; r < sx.m_rows; ++r) {
    std::size_t b = sx.basis[r];
    double val = sx.at(r, sx.rhs);
    if (val <= 0.0) continue;
    if (b < sx.nx) {
      fs.x[{b / nc, b % nc}] = val;
    } else if (b < sx.nx + sx.ny) {
      fs.y[b - sx.nx] = val;
    }
  }
  // A zero-cost facility may carry y above its largest assignment (any such
  // value is optimal); pull it down to the vertex the analysis expects.
  for (std::size_t i = 0; i < nf; ++i) {
    if (inst.facilities[i].open_cost == 0.0 && fs.y[i] > 1.0) {
      double mx = 0.0;
      for (std::size_t j = 0; j < nc; ++j) mx = std::max(mx, fs.x_at(i, j));
      fs.y[i] = mx;
    }
    if (fs.y[i] > 1.0 + lp_tol)
      throw solver_error("optimal vertex has facility value above one");
  }

  double primal_obj = 0.0;
  for (const auto& [key, val] : fs.x) primal_obj += inst.dist(key.first, key.second) * val;
  for (std::size_t i = 0; i < nf; ++i) primal_obj += inst.facilities[i].open_cost * fs.y[i];
  fs.objective = primal_obj;

  auto& dual = res.dual;
  dual.v.assign(nc, 0.0);
  for (std::size_t j = 0; j < nc; ++j) dual.v[j] = -sx.at(sx.obj2(), sx.a_col(j));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      double wij = sx.at(sx.obj2(), sx.s_col(i, j));
      if (wij > 0.0) dual.w[{i, j}] = wij;
    }
  double dual_obj = 0.0;
  for (double vj : dual.v) dual_obj += vj;
  dual.objective = dual_obj;

  auto& dec = res.dec;
  dec.Cstar.assign(nc, 0.0);
  dec.Fstar.assign(nc, 0.0);
  dec.vstar.assign(nc, 0.0);
  for (const auto& [key, val] : fs.x)
    dec.Cstar[key.second] += inst.dist(key.first, key.second) * val;
  for (std::size_t j = 0; j < nc; ++j) {
    double fj = dual.v[j] - dec.Cstar[j];
    dec.Fstar[j] = fj > 0.0 ? fj : 0.0;
    dec.vstar[j] = dec.Cstar[j] + dec.Fstar[j];
  }
  return res;
}

SupportGraph support_graph(const FractionalSolution& fs, double threshold) {
  if (!(threshold >= 0.0)) throw input_error("support threshold must be nonnegative");
  SupportGraph g;
  g.facility_clients.assign(fs.n_facilities, {});
  g.client_facilities.assign(fs.n_clients, {});
  for (const auto& [key, val] : fs.x) {
    if (val > threshold) {
      g.facility_clients[key.first].push_back(key.second);
      g.client_facilities[key.second].push_back(key.first);
    }
  }
  g.client_neighbors.assign(fs.n_clients, {});
  std::vector<char> mark(fs.n_clients, 0);
  for (std::size_t j = 0; j < fs.n_clients; ++j) {
    std::fill(mark.begin(), mark.end(), 0);
    for (std::size_t i : g.client_facilities[j])
      for (std::size_t j2 : g.facility_clients[i])
        if (j2 != j) mark[j2] = 1;
    for (std::size_t j2 = 0; j2 < fs.n_clients; ++j2)
      if (mark[j2]) g.client_neighbors[j].push_back(j2);
  }
  return g;
}

std::string lp_dump_tsv(const FractionalSolution& fs, const DualSolution& dual) {
  std::ostringstream out;
  for (const auto& [key, val] : fs.x)
    out << "x\t" << key.first << "\t" << key.second << "\t" << format_double(val) << "\n";
  for (std::size_t i = 0; i < fs.y.size(); ++i)
    out << "y\t" << i << "\t" << format_double(fs.y[i]) << "\n";
  for (std::size_t j = 0; j < dual.v.size(); ++j)
    out << "v\t" << j << "\t" << format_double(dual.v[j]) << "\n";
  for (const auto& [key, val] : dual.w)
    out << "w\t" << key.first << "\t" << key.second << "\t" << format_double(val) << "\n";
  return out.str();
}

}  // namespace ufl
