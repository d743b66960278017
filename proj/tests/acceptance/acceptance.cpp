// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: fracstep_acceptance [--cli <path to fracstep>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracstep/coefficients.hpp"
#include "fracstep/exact_solution.hpp"
#include "fracstep/experiment.hpp"
#include "fracstep/io.hpp"
#include "fracstep/mittag_leffler.hpp"
#include "fracstep/solver.hpp"
#include "fracstep/stability.hpp"
#include "oracles.hpp"

namespace {

using namespace fracstep;
namespace fs = std::filesystem;
using io::format_significant;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string sig(double v) { return format_significant(v, 4); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double parabola(double x) { return x * (1.0 - x); }

ProblemSpec canonical_problem(double gamma) {
  ProblemSpec p;
  p.gamma = gamma;
  p.initial_condition = parabola;
  return p;
}

SchemeConfig scheme(double gamma, double lambda, double s, double dx, int steps) {
  SchemeConfig c;
  c.lambda = lambda;
  c.dx = dx;
  c.dt = time_step_for_ratio(s, dx, 1.0, gamma);
  c.steps = steps;
  return c;
}

Outcome criterion1() {
  Outcome o;
  const double a = inverse_critical_ratio(FormulaFamily::bdf1, 0.5, 1.0);
  const double b = inverse_critical_ratio(FormulaFamily::bdf1, 0.5, 0.8);
  o.require(std::abs(a - std::pow(2.0, 1.5)) <= 1e-12, "1/S_x(BDF1, g=0.5, l=1) = 2^1.5");
  o.require(std::abs(a - 2.8284) < 1e-4, "2^1.5 ~ 2.8284");
  o.require(std::abs(b - 1.2 * std::sqrt(2.0)) <= 1e-12, "1/S_x(BDF1, g=0.5, l=0.8) = 1.2 sqrt(2)");
  o.require(std::abs(b - 1.6971) < 1e-4, "1.2 sqrt(2) ~ 1.6971");
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double g = 0.05 * i;
    worst = std::max(worst, std::abs(inverse_critical_ratio(FormulaFamily::bdf1, g, 1.0) - std::pow(2.0, 2.0 - g)));
  }
  o.require(worst <= 1e-12, "1/S_x = 2^(2-g) over g grid");
  o.note("1/S_x(l=1)=" + format_significant(a, 12) + ", 1/S_x(l=0.8)=" + format_significant(b, 12) +
         ", max dev over g grid " + sig(worst));
  return o;
}

Outcome criterion2() {
  Outcome o;
  struct Case {
    const char* label;
    double gamma;
    double lambda;
    double s;
    double dx;
    std::optional<double> t_end;
    std::optional<int> steps;
  };
  const Case cases[] = {
      {"g=0.5 l=1 S=0.33 dx=1/10 t=0.05", 0.5, 1.0, 0.33, 0.1, 0.05, {}},
      {"g=0.75 l=1 S=0.4 dx=1/20 t=0.5", 0.75, 1.0, 0.4, 0.05, 0.5, {}},
      {"g=1 l=1 S=0.5 dx=1/50 t=0.5", 1.0, 1.0, 0.5, 0.02, 0.5, {}},
      {"g=0.5 l=0.8 S=0.55 dx=1/20 500 steps", 0.5, 0.8, 0.55, 0.05, {}, 500},
  };
  for (const auto& c : cases) {
    ExperimentSpec spec;
    spec.gamma = c.gamma;
    spec.lambda = c.lambda;
    spec.s = c.s;
    spec.dx = c.dx;
    spec.t_end = c.t_end;
    spec.steps = c.steps;
    const auto run = resolve(spec);
    const auto start = std::chrono::steady_clock::now();
    double err = INFINITY;
    bool overflow = false;
    try {
      const auto h = fracstep::run(run.problem, run.scheme);
      err = profile_error(h, *run.ic.sine_series, c.gamma, 1.0, h.top_level()).max_error;
    } catch (const SolverOverflow&) {
      overflow = true;
    }
    const double secs = seconds_since(start);
    o.require(!overflow, std::string(c.label) + " overflowed");
    o.require(err < 5e-2, std::string(c.label) + " max error < 5e-2");
    o.require(secs < 60.0, std::string(c.label) + " runtime < 60 s");
    o.note(std::string(c.label) + ": steps=" + std::to_string(run.scheme.steps) + " max_error=" + sig(err) + " (" +
           sig(secs) + " s)");
  }
  return o;
}

int sign(double v) { return (v > 0) - (v < 0); }

Outcome criterion3() {
  Outcome o;
  ProbeOptions probe;
  probe.nodes = 20;
  probe.steps = 200;
  const auto r4 = probe_stability(FormulaFamily::bdf1, 0.5, 1.0, 0.37, probe);
  o.require(r4.growth_factor > 10.0, "growth_factor > 10 within 200 steps at S=0.37");
  probe.steps = 100;
  const auto r7 = probe_stability(FormulaFamily::bdf1, 0.5, 0.8, 0.7, probe);
  o.require(r7.growth_factor > 10.0, "growth_factor > 10 within 100 steps at l=0.8, S=0.7");

  // Spatial pattern of the unstable run from the parabolic data at level 200.
  const auto h = run(canonical_problem(0.5), scheme(0.5, 1.0, 0.37, 0.05, 200));
  const auto u = h.row(200);
  int increment_flips = 0;
  for (int j = 0; j + 2 <= 20; ++j) {
    const double d0 = u[static_cast<std::size_t>(j + 1)] - u[static_cast<std::size_t>(j)];
    const double d1 = u[static_cast<std::size_t>(j + 2)] - u[static_cast<std::size_t>(j + 1)];
    if (sign(d0) * sign(d1) < 0) ++increment_flips;
  }
  int value_flips = 0;
  for (int j = 1; j + 1 < 20; ++j) {
    if (sign(u[static_cast<std::size_t>(j)]) * sign(u[static_cast<std::size_t>(j + 1)]) < 0) ++value_flips;
  }
  o.require(increment_flips >= 15, "alternating increments in >= 15 of 19 neighbour pairs");
  o.note("growth(S=0.37, 200 steps)=" + sig(r4.growth_factor) + ", growth(l=0.8, S=0.7, 100 steps)=" +
         sig(r7.growth_factor) + ", increment sign flips " + std::to_string(increment_flips) +
         "/19, value sign flips " + std::to_string(value_flips) + "/18");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double g : {0.25, 0.5, 0.75}) {
    for (double l : {0.7, 0.85, 1.0}) {
      const double bound = *stability_bound(FormulaFamily::bdf1, g, l);
      const double emp = find_empirical_threshold(FormulaFamily::bdf1, g, l, {0.5 * bound, 2.0 * bound});
      const double rel = std::abs(emp - bound) / bound;
      worst = std::max(worst, rel);
      o.require(rel < 0.05, "g=" + sig(g) + " l=" + sig(l) + " within 5%");
    }
  }
  const double secs = seconds_since(start);
  o.require(secs < 300.0, "runtime < 5 min");
  o.note("worst relative difference " + sig(worst) + " (" + sig(secs) + " s)");
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (auto f : {FormulaFamily::bdf1, FormulaFamily::bdf2}) {
    for (double l : {0.0, 0.25, 0.5}) {
      for (double g : {0.25, 0.5, 0.75}) {
        for (double s : {1.0, 10.0, 100.0}) {
          const auto r = probe_stability(f, g, l, s);
          worst = std::max(worst, r.growth_factor);
          o.require(r.growth_factor <= 1.0 + 1e-6, std::string(to_string(f)) + " l=" + sig(l) + " g=" + sig(g) +
                                                       " S=" + sig(s));
        }
      }
    }
  }
  o.note("largest growth_factor " + sig(worst) + " over 54 probes of 400 steps");
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst_rel = 0.0;
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto t = build_table(FormulaFamily::bdf1, a, 50);
    for (int k = 0; k <= 50; ++k) {
      const double ref = testing::binomial_weight(a, k);
      worst_rel = std::max(worst_rel, std::abs(t[static_cast<std::size_t>(k)] - ref) / std::abs(ref));
    }
  }
  o.require(worst_rel <= 1e-12, "BDF1 recurrence vs binomial closed form");
  double worst_sum = 0.0;
  for (auto f : {FormulaFamily::bdf1, FormulaFamily::bdf2, FormulaFamily::bdf3, FormulaFamily::ng2}) {
    for (double a : {0.25, 0.5, 0.75}) {
      const auto t = build_table(f, a, 100);
      const std::vector<double> w(t.weights().begin(), t.weights().end());
      const double dev = std::abs(testing::euler_alternating_sum(w) - eval_generating_function(f, a, -1.0));
      worst_sum = std::max(worst_sum, dev);
      o.require(dev < 1e-6, std::string(to_string(f)) + " a=" + sig(a) + " partial sums at z=-1");
    }
  }
  o.note("max relative binomial deviation " + sig(worst_rel) + ", max Euler-sum deviation " + sig(worst_sum));
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst_exp = 0.0;
  for (int i = 0; i <= 30000; ++i) {
    const double z = -0.001 * i;
    worst_exp = std::max(worst_exp, std::abs(ml_eval(1.0, z) - std::exp(z)));
  }
  o.require(worst_exp < 1e-10, "E_1(z) = exp(z) on [-30, 0]");
  double worst_erfc = 0.0;
  for (double x : {0.5, 1.0, 2.0, 4.0}) {
    worst_erfc = std::max(worst_erfc, std::abs(ml_eval(0.5, -x) - testing::scaled_erfc_quadrature(x)));
  }
  o.require(worst_erfc < 1e-7, "E_1/2(-x) vs exp(x^2) erfc(x) quadrature");
  double worst_overlap = 0.0;
  int pairs = 0;
  for (double g : {0.25, 0.5, 0.75}) {
    const MittagLeffler ml(g);
    for (double x = 0.5; x <= 120.0; x *= 1.05) {
      const double integral = ml.laplace_integral(-x);
      const auto s = ml.power_series(-x);
      const auto a = ml.asymptotic(-x);
      if (s.accepted) {
        worst_overlap = std::max(worst_overlap, std::abs(s.value - integral));
        ++pairs;
      }
      if (a.accepted) {
        worst_overlap = std::max(worst_overlap, std::abs(a.value - integral));
        ++pairs;
      }
      if (s.accepted && a.accepted) {
        worst_overlap = std::max(worst_overlap, std::abs(s.value - a.value));
        ++pairs;
      }
    }
  }
  o.require(worst_overlap < 1e-6, "branch overlap agreement");
  o.note("exp dev " + sig(worst_exp) + ", erfc dev " + sig(worst_erfc) + ", branch overlap dev " +
         sig(worst_overlap) + " over " + std::to_string(pairs) + " route pairs");
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst = 0.0;
  for (double lambda : {0.0, 0.5, 1.0}) {
    const double s = lambda == 1.0 ? 0.4 : 1.5;
    const auto h = run(canonical_problem(1.0), scheme(1.0, lambda, s, 0.05, 50));
    const auto ref = testing::classical_theta(parabola, 1.0, 20, s, lambda, 50);
    for (int m = 0; m <= 50; ++m) {
      for (int j = 0; j <= 20; ++j) {
        worst = std::max(worst, std::abs(h(m, j) - ref[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]));
      }
    }
  }
  o.require(worst <= 1e-12, "gamma = 1 BDF1 matches the classical theta method");
  o.note("max deviation " + sig(worst) + " over 50 steps, l in {0, 0.5, 1}");
  return o;
}

Outcome criterion9() {
  Outcome o;
  ExperimentSpec spec;
  spec.gamma = 0.5;
  spec.dx = 0.01;
  spec.dt = 4e-3;
  spec.t_end = 0.5;
  spec.lambda = 0.0;
  const auto implicit = convergence_study(spec, 2, RefineMode::refine_dt);
  spec.lambda = 0.5;
  const auto cn = convergence_study(spec, 2, RefineMode::refine_dt);
  std::string fi_errs;
  std::string cn_errs;
  for (std::size_t i = 0; i < implicit.levels.size(); ++i) {
    if (i > 0) {
      o.require(implicit.levels[i].max_error < implicit.levels[i - 1].max_error, "strict decrease at level " +
                                                                                      std::to_string(i));
    }
    o.require(cn.levels[i].max_error <= implicit.levels[i].max_error, "CN <= implicit at level " + std::to_string(i));
    fi_errs += (i ? "," : "") + sig(implicit.levels[i].max_error);
    cn_errs += (i ? "," : "") + sig(cn.levels[i].max_error);
  }
  o.note("implicit errors " + fi_errs + " (order " + sig(implicit.estimated_order_dt) + "), CN errors " + cn_errs);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "no --cli path given");
    return o;
  }
  const fs::path root = fs::temp_directory_path() / "fracstep_acceptance_determinism";
  fs::remove_all(root);
  int compared = 0;
  for (int i = 1; i <= 7; ++i) {
    const std::string id = "fig" + std::to_string(i);
    std::vector<fs::path> dirs{root / (id + "_a"), root / (id + "_b")};
    for (const auto& d : dirs) {
      std::string cmd = "\"" + cli + "\" figure --id " + id + " --out-dir \"" + d.string() + "\"";
      if (i == 3) cmd += " --t-end 0.05";
      cmd += " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      o.require(code == 0 || code == 2, id + " exit code " + std::to_string(code));
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      const auto other = dirs[1] / entry.path().filename();
      o.require(fs::exists(other) && slurp(entry.path()) == slurp(other), entry.path().filename().string() +
                                                                                " identical");
      ++compared;
    }
  }
  fs::remove_all(root);
  o.require(compared > 0, "some CSVs produced");
  o.note(std::to_string(compared) + " CSV files compared byte for byte across two invocations per figure");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stability bound closed forms", criterion1},
      {"stable figure runs match the exact solution", criterion2},
      {"unstable figure runs grow and oscillate", criterion3},
      {"empirical vs theoretical threshold", criterion4},
      {"unconditional stability for lambda <= 1/2", criterion5},
      {"coefficient identities", criterion6},
      {"Mittag-Leffler accuracy", criterion7},
      {"classical-limit equivalence", criterion8},
      {"convergence ordering", criterion9},
      {"determinism of figure CSVs", [&] { return criterion10(cli); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail << " (" << sig(seconds_since(start)) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
