#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ufl/augment.hpp"
#include "ufl/clustering.hpp"
#include "ufl/common.hpp"
#include "ufl/game.hpp"
#include "ufl/generators.hpp"
#include "ufl/instance.hpp"
#include "ufl/jms.hpp"
#include "ufl/lp.hpp"
#include "ufl/params.hpp"
#include "ufl/rounding.hpp"
#include "ufl/verification.hpp"

namespace {

enum class Algo { bifactor, unifactor, jms, greedy_baseline };
enum class Format { tsv, text };

const std::map<std::string, Algo> kAlgoNames{{"bifactor", Algo::bifactor},
                                             {"unifactor", Algo::unifactor},
                                             {"jms", Algo::jms},
                                             {"greedy-baseline", Algo::greedy_baseline}};
const std::map<std::string, Format> kFormatNames{{"tsv", Format::tsv}, {"text", Format::text}};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ufl::input_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw ufl::input_error("write failed: " + path);
}

// Machine-first output: the TSV goes to `path` when given (with the human
// summary on stdout), otherwise whichever of the two the format selects.
void emit_report(const std::string& tsv, const std::string& human, const std::string& path,
                 Format format) {
  if (!path.empty()) {
    write_file(path, tsv);
    if (!human.empty()) std::cout << human;
    return;
  }
  std::cout << (format == Format::tsv ? tsv : human);
}

std::string stem_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  std::size_t start = slash == std::string::npos ? 0 : slash + 1;
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || dot <= start) return path;
  return path.substr(0, dot);
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ufl::input_error("grid must be lo:hi:step, got '" + spec + "'");
  double lo = ufl::parse_double(parts[0]);
  double hi = ufl::parse_double(parts[1]);
  double step = ufl::parse_double(parts[2]);
  if (!(step > 0.0) || hi < lo) throw ufl::input_error("grid must satisfy lo <= hi, step > 0");
  std::vector<double> grid;
  long long n = (long long)std::llround((hi - lo) / step);
  for (long long i = 0; i <= n; ++i) {
    double g = lo + (double)i * step;
    if (g <= hi + step * 1e-9) grid.push_back(g);
  }
  return grid;
}

ufl::ParamSet params_for(double gamma, bool inflated) {
  double g = (gamma > 1.0 && gamma < 2.0) ? gamma : 1.6774;
  return inflated ? ufl::ParamSet::inflated(g) : ufl::ParamSet::defaults(g);
}

struct CheckRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string checks_tsv(const std::vector<CheckRow>& rows) {
  std::string out = "check\tresult\tdetail\n";
  for (const auto& r : rows)
    out += r.name + "\t" + (r.pass ? "pass" : "fail") + "\t" + r.detail + "\n";
  return out;
}

std::string checks_human(const std::vector<CheckRow>& rows) {
  std::string out;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    out += std::string(r.pass ? "  ok   " : "  FAIL ") + r.name +
           (r.detail.empty() ? "" : "  (" + r.detail + ")") + "\n";
    if (!r.pass) ++failed;
  }
  out += failed == 0 ? "all checks passed\n"
                     : std::to_string(failed) + " of " + std::to_string(rows.size()) +
                           " checks failed\n";
  return out;
}

int cmd_generate(const std::string& graph_path, double q, std::optional<double> lambda,
                 const ufl::GenSpec& spec, const std::string& out_path) {
  ufl::Instance inst;
  if (!graph_path.empty()) {
    inst = ufl::generate_hardness(ufl::load_graph_file(graph_path), q, lambda);
  } else {
    inst = ufl::generate_random(spec);
  }
  if (out_path.empty()) {
    std::cout << ufl::save_instance(inst);
  } else {
    ufl::save_instance_file(inst, out_path);
    std::cout << "generated " << inst.num_facilities() << " facilities, " << inst.num_clients()
              << " clients, dim " << inst.dim << " -> " << out_path << "\n";
  }
  return 0;
}

ufl::RoundedSolution solve_with(Algo algo, const ufl::Instance& inst, const ufl::ParamSet& params,
                                double gamma, std::size_t trials, std::uint64_t seed,
                                std::string* diag_tsv, std::string* branch) {
  switch (algo) {
    case Algo::bifactor: {
      auto [sol, diag] = ufl::run_bifactor(inst, params, gamma, trials, seed);
      if (branch) *branch = diag.branch;
      if (diag_tsv) {
        std::string t = "client\tp_close\tp_distant\tp_far\n";
        for (std::size_t j = 0; j < diag.p_close.size(); ++j)
          t += std::to_string(j) + "\t" + ufl::format_double(diag.p_close[j]) + "\t" +
               ufl::format_double(diag.p_distant[j]) + "\t" + ufl::format_double(diag.p_far[j]) +
               "\n";
        t += "# trials\t" + std::to_string(diag.trials) + "\n";
        t += "# mean_cost\t" + ufl::format_double(diag.mean_cost) + "\n";
        t += "# stderr_cost\t" + ufl::format_double(diag.stderr_cost) + "\n";
        *diag_tsv = t;
      }
      return sol;
    }
    case Algo::unifactor: {
      auto [sol, rep] = ufl::run_unifactor(inst, params, trials, seed);
      if (branch)
        *branch = "jms:" + std::to_string(rep.jms_count) + " conn:" +
                  std::to_string(rep.conn_count) + " greedy:" + std::to_string(rep.greedy_count);
      if (diag_tsv) {
        std::string t = "trial\tbranch\tgamma\tcost\n";
        for (std::size_t k = 0; k < rep.records.size(); ++k)
          t += std::to_string(k) + "\t" + rep.records[k].branch + "\t" +
               ufl::format_double(rep.records[k].gamma) + "\t" +
               ufl::format_double(rep.records[k].cost) + "\n";
        *diag_tsv = t;
      }
      return sol;
    }
    case Algo::jms:
      if (branch) *branch = "jms";
      return ufl::jms_solve(inst);
    case Algo::greedy_baseline:
      if (branch) *branch = "greedy-baseline";
      return ufl::greedy_add_solve(inst);
  }
  throw ufl::input_error("unknown algorithm");
}

int cmd_solve(const std::string& inst_path, Algo algo, double gamma, std::size_t trials,
              std::uint64_t seed, std::string out_path, std::string diag_path, Format format) {
  ufl::Instance inst = ufl::load_instance_file(inst_path);
  inst.validate();
  ufl::ParamSet params = params_for(gamma, false);
  if (out_path.empty()) out_path = stem_of(inst_path) + ".sol.tsv";
  bool wants_diag = algo == Algo::bifactor || algo == Algo::unifactor;
  if (diag_path.empty() && wants_diag) diag_path = stem_of(inst_path) + ".diag.tsv";

  std::string diag_tsv, branch;
  ufl::RoundedSolution sol = solve_with(algo, inst, params, gamma, trials, seed,
                                        wants_diag ? &diag_tsv : nullptr, &branch);

  write_file(out_path, ufl::solution_dump_tsv(sol));
  if (!diag_tsv.empty()) write_file(diag_path, diag_tsv);

  std::ostringstream human;
  human << "cost " << ufl::format_double(sol.total_cost) << " (facilities "
        << ufl::format_double(sol.facility_cost) << ", connection "
        << ufl::format_double(sol.connection_cost) << "), " << sol.open_parents.size()
        << " open, branch " << branch << "\n"
        << "solution -> " << out_path << "\n";
  if (!diag_tsv.empty()) human << "diagnostics -> " << diag_path << "\n";
  (void)format;
  std::cout << human.str();
  return 0;
}

int cmd_verify(const std::string& inst_path, bool full, double gamma, std::uint64_t seed,
               double appendix_step, const std::string& out_path, Format format) {
  (void)seed;
  ufl::Instance inst = ufl::load_instance_file(inst_path);
  inst.validate();
  ufl::ParamSet params = params_for(gamma, false);
  std::vector<CheckRow> rows;

  ufl::LpResult lp = ufl::solve_relaxation(inst, params.lp_tol);
  {
    double gap = std::fabs(lp.primal.objective - lp.dual.objective);
    bool ok = gap <= 1e-6 * (1.0 + std::fabs(lp.primal.objective));
    rows.push_back({"lp_dual_gap", ok,
                    "primal " + ufl::format_double(lp.primal.objective) + " dual " +
                        ufl::format_double(lp.dual.objective)});
  }
  {
    double sum = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < inst.num_clients(); ++j) {
      sum += lp.dec.vstar[j];
      if (lp.dec.Fstar[j] < 0.0) ok = false;
      if (std::fabs(lp.dec.Cstar[j] + lp.dec.Fstar[j] - lp.dec.vstar[j]) > 1e-9) ok = false;
    }
    ok = ok && std::fabs(sum - lp.primal.objective) <= 1e-6 * (1.0 + std::fabs(lp.primal.objective));
    rows.push_back({"lp_decomposition", ok, "sum vstar " + ufl::format_double(sum)});
  }

  std::optional<ufl::OracleResult> oracle;
  if (inst.num_facilities() <= 20) {
    oracle = ufl::brute_force_opt(inst);
    double tol = 1e-9 * (1.0 + std::fabs(oracle->opt_cost));
    rows.push_back({"lp_below_opt", lp.primal.objective <= oracle->opt_cost + tol,
                    "lp " + ufl::format_double(lp.primal.objective) + " opt " +
                        ufl::format_double(oracle->opt_cost)});
    ufl::RoundedSolution js = ufl::jms_solve(inst);
    ufl::RoundedSolution gs = ufl::greedy_add_solve(inst);
    bool above = js.total_cost >= oracle->opt_cost - 1e-9 && gs.total_cost >= oracle->opt_cost - 1e-9;
    rows.push_back({"algorithms_above_opt", above,
                    "jms " + ufl::format_double(js.total_cost) + " greedy " +
                        ufl::format_double(gs.total_cost)});
  }

  if (full) {
    double cstar_tot = 0.0, fstar_tot = 0.0;
    for (std::size_t j = 0; j < inst.num_clients(); ++j) {
      cstar_tot += lp.dec.Cstar[j];
      fstar_tot += lp.dec.Fstar[j];
    }
    ufl::AugmentedSolution aug = ufl::augment(lp.primal, lp.dec, params.gamma, inst);
    ufl::ClusteringResult clustering;
    if (cstar_tot > params.K1 * fstar_tot) {
      clustering = ufl::cluster_conn(aug, params);
    } else {
      std::vector<std::size_t> all(inst.num_clients());
      for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
      clustering = ufl::cluster_greedy(all, aug, params);
    }
    ufl::LemmaCheckReport rep = ufl::check_lemmas(inst, aug, clustering, params);
    for (const auto& c : rep.checks)
      rows.push_back({"lemma_" + c.name, c.violations == 0,
                      c.applicable == 0 ? "not applicable"
                                        : std::to_string(c.applicable) + " checked, worst margin " +
                                              ufl::format_double(c.worst_margin)});
    if (oracle && inst.num_facilities() <= 16) {
      ufl::BifactorCertificate cert =
          ufl::certify_bifactor(ufl::jms_solve(inst), inst, 1.11, 1.7764);
      rows.push_back({"jms_bifactor_certificate", cert.holds,
                      "worst margin " + ufl::format_double(cert.worst_margin)});
    }
  }

  if (appendix_step > 0.0) {
    ufl::GridSearchReport grid = ufl::appendix_grid_search(params, appendix_step);
    rows.push_back({"grid_margin_positive", grid.min_robust_margin > 0.0,
                    "min_robust_margin " + ufl::format_double(grid.min_robust_margin) + " over " +
                        std::to_string((unsigned long long)grid.point_count) + " points"});
  }

  emit_report(checks_tsv(rows), checks_human(rows), out_path, format);
  for (const auto& r : rows)
    if (!r.pass) return 3;
  return 0;
}

int cmd_game(const std::string& mixture, const std::string& variant, double eps7, double q_step,
             const std::string& profile_out, const std::string& out_path, Format format) {
  ufl::GammaDistribution dist = mixture == "mu2" ? ufl::mu2(eps7) : ufl::mu1();
  ufl::GameVariant var = variant == "nu_prime" ? ufl::GameVariant::nu_prime : ufl::GameVariant::nu;
  auto [ratio, qstar] = ufl::worst_case_ratio(dist, var, eps7, q_step);
  if (!profile_out.empty()) write_file(profile_out, ufl::game_profile_tsv(dist, var, eps7, q_step));
  std::string tsv = "mixture\tvariant\teps7\tratio\tq\n" + mixture + "\t" + variant + "\t" +
                    ufl::format_double(eps7) + "\t" + ufl::format_double(ratio) + "\t" +
                    ufl::format_double(qstar) + "\n";
  std::string human = "worst-case ratio " + ufl::format_double(ratio) + " at q " +
                      ufl::format_double(qstar) + "\n";
  emit_report(tsv, human, out_path, format);
  return 0;
}

int cmd_params(const std::string& grid_spec, double gamma, bool inflated,
               const std::string& out_path, Format format) {
  std::vector<double> grid = parse_grid_spec(grid_spec);
  ufl::ParamSet params = params_for(gamma, inflated);
  ufl::ConditionReport rep = ufl::validate_parameters(params, grid);
  std::string tsv = "index\tname\tresult\tmargin\tworst_gamma\tworst_theta\n";
  std::vector<CheckRow> rows;
  for (const auto& c : rep.conditions) {
    tsv += std::to_string(c.index) + "\t" + c.name + "\t" + (c.pass ? "pass" : "fail") + "\t" +
           ufl::format_double(c.margin) + "\t" + ufl::format_double(c.worst_gamma) + "\t" +
           ufl::format_double(c.worst_theta) + "\n";
    rows.push_back({c.name, c.pass, "margin " + ufl::format_double(c.margin)});
  }
  emit_report(tsv, checks_human(rows), out_path, format);
  return rep.all_pass() ? 0 : 3;
}

int cmd_bench(const std::string& inst_path, Algo algo, double gamma, std::size_t trials,
              std::uint64_t seed, int repeat, const std::string& out_path, Format format) {
  ufl::Instance inst = ufl::load_instance_file(inst_path);
  inst.validate();
  ufl::ParamSet params = params_for(gamma, false);
  std::string tsv = "repeat\tseconds\tcost\n";
  double total = 0.0, best = 0.0;
  for (int k = 0; k < repeat; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    ufl::RoundedSolution sol =
        solve_with(algo, inst, params, gamma, trials, seed + (std::uint64_t)k, nullptr, nullptr);
    auto t1 = std::chrono::steady_clock::now();
    double sec = std::chrono::duration<double>(t1 - t0).count();
    total += sec;
    best = k == 0 ? sol.total_cost : std::min(best, sol.total_cost);
    tsv += std::to_string(k) + "\t" + ufl::format_double(sec) + "\t" +
           ufl::format_double(sol.total_cost) + "\n";
  }
  std::string human = "mean " + ufl::format_double(total / std::max(repeat, 1)) +
                      " s/solve, best cost " + ufl::format_double(best) + "\n";
  emit_report(tsv, human, out_path, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euclidean uncapacitated facility location toolkit"};
  app.require_subcommand(1);

  std::string inst_path, out_path, diag_path, graph_path, profile_out;
  std::string grid_spec = "1.601:1.999:0.001";
  std::string mixture = "mu1", variant = "nu";
  Algo algo = Algo::bifactor;
  Format format = Format::tsv;
  ufl::GenSpec gen_spec;
  gen_spec.n_facilities = 8;
  gen_spec.n_clients = 12;
  double gamma = 1.6774, q = 1.0 / 3.0, eps7 = 0.0, q_step = 1e-3, appendix_step = 0.0;
  double lambda = -1.0;
  std::size_t trials = 2000;
  std::uint64_t seed = 0;
  int repeat = 5;
  bool full = false, inflated = false;

  auto* gen = app.add_subcommand("generate", "write a random or graph-reduction instance");
  gen->add_option("--profile", gen_spec.profile, "point layout")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ufl::GenProfile>{
              {"uniform_box", ufl::GenProfile::uniform_box},
              {"clustered_blobs", ufl::GenProfile::clustered_blobs},
              {"colinear_adversarial", ufl::GenProfile::colinear_adversarial}},
          CLI::ignore_case));
  gen->add_option("--dim", gen_spec.dim, "dimension");
  gen->add_option("--facilities", gen_spec.n_facilities, "facility count");
  gen->add_option("--clients", gen_spec.n_clients, "client count");
  gen->add_option("--cost-lo", gen_spec.cost_lo, "opening cost lower bound");
  gen->add_option("--cost-hi", gen_spec.cost_hi, "opening cost upper bound");
  gen->add_option("--scale", gen_spec.coordinate_scale, "coordinate scale");
  gen->add_option("--seed", gen_spec.seed, "generator seed");
  gen->add_option("--graph", graph_path, "vertex-cover reduction input graph");
  gen->add_option("--q", q, "reduction coverage parameter");
  gen->add_option("--lambda", lambda, "override the reduction facility cost");
  gen->add_option("--out", out_path, "instance output path (stdout if omitted)");

  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  solve->add_option("instance", inst_path, "instance file")->required();
  solve->add_option("--algo", algo, "algorithm")
      ->transform(CLI::CheckedTransformer(kAlgoNames, CLI::ignore_case));
  solve->add_option("--gamma", gamma, "scaling factor");
  solve->add_option("--trials", trials, "rounding trials");
  solve->add_option("--seed", seed, "random seed");
  solve->add_option("--out", out_path, "solution path (default <instance>.sol.tsv)");
  solve->add_option("--diag", diag_path, "diagnostics path (default <instance>.diag.tsv)");
  solve->add_option("--format", format, "report format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  auto* verify = app.add_subcommand("verify", "run checkers against an instance");
  verify->add_option("--instance", inst_path, "instance file")->required();
  verify->add_flag("--full", full, "also run augmentation, clustering and inequality checkers");
  verify->add_option("--gamma", gamma, "scaling factor");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--appendix-step", appendix_step,
                     "also certify the coefficient grid at this step");
  verify->add_option("--out", out_path, "report path (stdout if omitted)");
  verify->add_option("--format", format, "report format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  auto* game = app.add_subcommand("game", "worst-case ratio of a gamma mixture");
  game->add_option("--mixture", mixture, "mu1 or mu2")
      ->check(CLI::IsMember({"mu1", "mu2"}));
  game->add_option("--variant", variant, "payoff variant")
      ->check(CLI::IsMember({"nu", "nu_prime"}));
  game->add_option("--eps7", eps7, "tail reweighting for mu2/nu_prime");
  game->add_option("--q-step", q_step, "adversary grid step");
  game->add_option("--profile-out", profile_out, "write the (q, value) profile TSV here");
  game->add_option("--out", out_path, "report path (stdout if omitted)");
  game->add_option("--format", format, "report format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  auto* paramsc = app.add_subcommand("params", "evaluate the 13 consistency conditions");
  paramsc->add_option("--grid", grid_spec, "gamma grid lo:hi:step");
  paramsc->add_option("--gamma", gamma, "parameter set gamma");
  paramsc->add_flag("--inflated", inflated, "use the inflated epsilon ladder");
  paramsc->add_option("--out", out_path, "report path (stdout if omitted)");
  paramsc->add_option("--format", format, "report format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  auto* bench = app.add_subcommand("bench", "time repeated solves");
  bench->add_option("instance", inst_path, "instance file")->required();
  bench->add_option("--algo", algo, "algorithm")
      ->transform(CLI::CheckedTransformer(kAlgoNames, CLI::ignore_case));
  bench->add_option("--gamma", gamma, "scaling factor");
  bench->add_option("--trials", trials, "rounding trials");
  bench->add_option("--seed", seed, "random seed");
  bench->add_option("--repeat", repeat, "number of timed repeats");
  bench->add_option("--out", out_path, "report path (stdout if omitted)");
  bench->add_option("--format", format, "report format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (gen->parsed()) {
      std::optional<double> lam;
      if (lambda >= 0.0) lam = lambda;
      return cmd_generate(graph_path, q, lam, gen_spec, out_path);
    }
    if (solve->parsed())
      return cmd_solve(inst_path, algo, gamma, trials, seed, out_path, diag_path, format);
    if (verify->parsed())
      return cmd_verify(inst_path, full, gamma, seed, appendix_step, out_path, format);
    if (game->parsed())
      return cmd_game(mixture, variant, eps7, q_step, profile_out, out_path, format);
    if (paramsc->parsed()) return cmd_params(grid_spec, gamma, inflated, out_path, format);
    if (bench->parsed())
      return cmd_bench(inst_path, algo, gamma, trials, seed, repeat, out_path, format);
  } catch (const ufl::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ufl::solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
