// Acceptance run: one PASS/FAIL line per criterion with the measured values,
// the pinned tolerances and the wall time. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ergolab/examples.hpp"
#include "ergolab/spectral.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace ergolab;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

cli::Report scenario(const std::string& name, const std::function<void(cli::ScenarioConfig&)>& setup = {}) {
  cli::ScenarioConfig c;
  c.scenario = name;
  if (setup) setup(c);
  return cli::run(c);
}

double result(const cli::Report& r, const std::string& key) { return r.results.at(key).get<double>(); }

void require_checks(Outcome& out, const cli::Report& r, const std::string& tag) {
  for (const auto& c : r.checks)
    out.require(c.pass, tag + " " + c.name + " " + std::to_string(c.value) + " " + c.comparison + " " +
                            std::to_string(c.threshold));
}

// ------------------------------------------------------------------ criteria

// Cesaro recurrences over random operators, all orders up to 4.
void cesaro_identities(Outcome& out) {
  Rng rng(kDefaultSeed);
  double worst = 0.0;
  for (int i = 0; i < 12; ++i) {
    const long long d = rng.integer(1, 6);
    const double rho = rng.uniform(0.2, 1.1);
    const int p = static_cast<int>(rng.integer(1, 4));
    std::ostringstream op;
    op << "builtin:random:" << d << ":" << rho << ":" << 100 + i;
    const auto r = scenario("identities", [&](auto& c) {
      c.op = op.str();
      c.scheme = "cesaro:p=" + std::to_string(p);
      c.nmax = 64;
    });
    for (const char* k : {"cesaro_identity_1", "cesaro_identity_2", "cesaro_identity_3"})
      worst = std::max(worst, result(r, k));
  }
  out.detail << "max residual " << worst << " over 12 operators (dim <= 6, rho <= 1.1, p <= 4, n <= 64), tol 1e-10";
  out.require(worst <= 1e-10, "cesaro residual");
}

void backward_suite(Outcome& out) {
  const auto t = random_operator(4, 0.95, 21);
  double backit = 0.0;
  for (const auto& s : {MeanScheme::cesaro(1), MeanScheme::cesaro(2), MeanScheme::cesaro(3), MeanScheme::abel(),
                        MeanScheme::zweier(), MeanScheme::binomial()}) {
    const long long n0 = backward_iterate(s).min_n();
    for (long long n = n0; n < n0 + 32; ++n) backit = std::max(backit, backit_identity_residual(s, t, n));
  }

  double cesaro_shift = 0.0;
  for (int p = 1; p <= 4; ++p) {
    const auto back = backward_iterate(MeanScheme::cesaro(p));
    for (long long n = back.min_n(); n < back.min_n() + 64; ++n) {
      const auto row = scheme_row(back, n);
      const auto ref = scheme_row(MeanScheme::cesaro(p + 1), n - 1);
      if (row.support.size() != ref.support.size()) {
        cesaro_shift = INFINITY;
        continue;
      }
      for (std::size_t i = 0; i < row.support.size(); ++i)
        cesaro_shift = std::max(cesaro_shift, std::abs(row.support[i].t - oracle::cesaro_weight(p + 1, n - 1, ref.support[i].j)));
    }
  }

  double abel = 0.0;
  const auto abel_back = backward_iterate(MeanScheme::abel());
  for (long long n = abel_back.min_n(); n < abel_back.min_n() + 32; ++n) {
    const double nd = static_cast<double>(n);
    for (const auto& e : scheme_row(abel_back, n).support)
      abel = std::max(abel, std::abs(e.t - std::pow(1.0 - 1.0 / nd, static_cast<double>(e.j)) / nd));
  }

  // 2/(2n-1) on j <= n-2 and 1/(2n-1) at j = n-1.
  double zweier = 0.0;
  for (long long n = 2; n <= 64; ++n) {
    const auto row = scheme_row(backward_iterate(MeanScheme::zweier()), n);
    if (static_cast<long long>(row.support.size()) != n) zweier = INFINITY;
    for (const auto& e : row.support) {
      const double expected = (e.j == n - 1 ? 1.0 : 2.0) / (2.0 * static_cast<double>(n) - 1.0);
      zweier = std::max(zweier, std::abs(e.t - expected));
    }
  }

  out.detail << "backit " << backit << " (tol 1e-10), cesaro(p)->cesaro(p+1) " << cesaro_shift
             << " (tol 1e-12), abel " << abel << " (tol 1e-12 + tail_eps), zweier " << zweier
             << " (exact up to 1 ulp)";
  out.require(backit <= 1e-10, "backit");
  out.require(cesaro_shift <= 1e-12, "cesaro shift");
  out.require(abel <= 1e-12 + kDefaultTailEps, "abel");
  out.require(zweier <= 2.3e-16, "zweier");
}

void series_machinery(Outcome& out) {
  Rng rng(kDefaultSeed + 3);
  double sw = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto t = random_operator(rng.integer(1, 5), rng.uniform(0.1, 1.0), 300 + i);
    const int p = static_cast<int>(rng.integer(1, 3));
    const double rho = rng.uniform(0.1, 0.9);
    const Complex lambda = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    sw = std::max(sw, sw_identity_residual(t, p, lambda, rho, sw_default_terms(rho)));
  }

  double abel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto t = random_operator(rng.integer(1, 6), rng.uniform(0.1, 1.1), 500 + i);
    const Complex lambda = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    const double rho = rng.uniform(0.1, 1.0) / 1.1;
    abel = std::max(abel, abel_summation_residual(t, lambda, rho, rng.integer(1, 64)));
  }

  const std::vector<std::string> ops = {"builtin:identity:3", "builtin:diag:1,@90,-1,0.5", "builtin:random:4:0.9",
                                        "builtin:random:5:1", "builtin:jordan:2:0.5",
                                        "builtin:dirichlet:1:32:backward", "builtin:dirichlet:1:32:forward"};
  double ratio = 0.0;
  std::string worst_op;
  for (const auto& op : ops) {
    for (int r = 0; r <= 1; ++r) {
      const auto rep = scenario("uniform_kreiss", [&](auto& c) {
        c.op = op;
        c.r = r;
        c.nmax = 64;
        c.kmax = 5;
        c.angles = 32;
      });
      if (result(rep, "max_ratio") > ratio) {
        ratio = result(rep, "max_ratio");
        worst_op = op + " r=" + std::to_string(r);
      }
    }
  }
  out.detail << "sw residual " << sw << " (tol 1e-8, N = ceil(40/(1-rho))), abel summation " << abel
             << " over 100 instances (tol 1e-10), mean-bound ratio " << ratio << " at " << worst_op
             << " over " << ops.size() << " builtins x r in {0,1} (tol 1 + 1e-6)";
  out.require(sw <= 1e-8, "sw");
  out.require(abel <= 1e-10, "abel");
  out.require(ratio <= 1.0 + 1e-6, "mean bound");
}

void kreiss_dichotomy(Outcome& out) {
  const auto j2 = jordan_block(2, 1.0);
  const auto f0 = kreiss_functional(j2, 0, AnnulusGrid::dyadic(10, 128));
  double lo = INFINITY, hi = 0.0;
  for (std::size_t k = 2; k < f0.profile.size(); ++k) {
    const double step = f0.profile[k] / f0.profile[k - 1];
    lo = std::min(lo, step);
    hi = std::max(hi, step);
  }
  const double first_step = f0.profile[1] / f0.profile[0];
  const double k8 = kreiss_functional(j2, 1, AnnulusGrid::dyadic(8, 128)).value;
  const double k10 = kreiss_functional(j2, 1, AnnulusGrid::dyadic(10, 128)).value;
  const double change = std::abs(k10 - k8) / k8;

  const auto m0 = mean_growth_functional(j2, 1, 0, 512, 32);
  const double half_n = m0.profile.back() / (512.0 / 2.0);
  const auto m1 = mean_growth_functional(j2, 1, 1, 512, 32);

  out.detail << "r=0 refinement steps k>=2 in [" << lo << ", " << hi << "] (band [1.8, 2.2]; first step "
             << first_step << " not assessed), r=1 change K8->K10 " << change << " (tol 0.05); means r=0 "
             << "value(512)/(512/2) " << half_n << " (band [0.95, 1.05]), r=1 value(512) " << m1.profile.back()
             << ", tail " << m1.tail_value << " (bound 1.2), sup " << m1.value << " at n=" << m1.argmax.n;
  out.require(lo >= 1.8 && hi <= 2.2, "r=0 steps");
  out.require(change < 0.05, "r=1 stability");
  out.require(half_n >= 0.95 && half_n <= 1.05, "r=0 mean growth");
  out.require(m1.profile.back() <= 1.2 && m1.tail_value <= 1.2, "r=1 plateau");
}

void jordan_exponents(Outcome& out) {
  out.detail << "fitted exponents over n <= 512:";
  for (int d = 2; d <= 4; ++d) {
    const auto rep = scenario("nevanlinna", [&](auto& c) {
      c.op = "builtin:jordan:" + std::to_string(d) + ":1";
      c.r = d - 1;
      c.nmax = 512;
      c.kmax = 6;
      c.angles = 32;
      c.thresholds["exponent_margin"] = 0.0;
      c.thresholds["kreiss_refinement_max"] = 1e300;
    });
    const double e = result(rep, "fit_exponent");
    out.detail << " d=" << d << " " << e;
    out.require(std::abs(e - (d - 1)) <= 0.1, "d=" + std::to_string(d) + " exponent in d-1 +- 0.1");
    out.require(e < d, "d=" + std::to_string(d) + " below r+1");
  }
}

void volterra_exponent(Outcome& out) {
  auto fit = [](int n) {
    return scenario("growth", [&](auto& c) {
      c.op = "builtin:volterra:" + std::to_string(n);
      c.norm = "colsum";
      c.nmax = 2048;
    });
  };
  const double e400 = result(fit(400), "fit_exponent");
  const double e800 = result(fit(800), "fit_exponent");
  out.detail << "colsum fit N=400 " << e400 << ", N=800 " << e800 << " (band [0.15, 0.35], target 0.25), shift "
             << std::abs(e800 - e400) << " (tol 0.05)";
  out.require(e400 >= 0.15 && e400 <= 0.35, "N=400 exponent");
  out.require(std::abs(e800 - e400) < 0.05, "N doubling");
}

void shift_gap(Outcome& out) {
  const auto r = scenario("h1", [](auto& c) { c.check = "gap"; });
  const auto& g = r.results.at("gap");
  out.detail << "violations " << g.at("violations") << " of 1000 (deg <= 32, n <= 64, slack 1e-12), min margin "
             << g.at("min_margin").get<double>() << ", monomial |norm^2 - (1+(k+2)^2)| " << g.at("monomial_norm_gap").get<double>()
             << " for k <= 20 (tol 1e-12)";
  require_checks(out, r, "gap");
}

void h1_weak_nullity(Outcome& out) {
  const auto iso = scenario("h1", [](auto& c) { c.check = "3iso"; });
  const auto pair = scenario("h1", [](auto& c) { c.check = "pairing"; });
  const auto mean = scenario("h1", [](auto& c) { c.check = "meannorm"; });
  const auto& p = pair.results.at("pairing");
  const auto& m = mean.results.at("mean_norm");
  out.detail << "3-isometry defect " << iso.results.at("three_isometry_defect").get<double>()
             << " (tol 1e-9); pairing error " << p.at("max_error").get<double>() << " (tol 1e-12), at 199 "
             << p.at("value_at_199").get<double>() << " (bound 0.01 + 1e-12); mean norm sup "
             << m.at("sup_512").get<double>() << ", 256->512 change " << m.at("plateau_change").get<double>()
             << " (tol 0.05); min ||z^n||_1/n on [8, 256] " << m.at("min_power_ratio").get<double>()
             << " (floor 0.5)";
  require_checks(out, iso, "3iso");
  require_checks(out, pair, "pairing");
  require_checks(out, mean, "meannorm");
}

void shields(Outcome& out) {
  for (int r = 0; r <= 1; ++r) {
    const auto rep = scenario("shields", [&](auto& c) {
      c.r = r;
      c.nmax = 4096;
    });
    const auto& fit = rep.results.at("log_fit");
    const auto& band = rep.results.at("band");
    out.detail << (r ? "; " : "") << "r=" << r << " slope " << fit.at("slope").get<double>() << ", residual "
               << fit.at("relative_residual").get<double>() << " (tol 0.10), band "
               << band.at("max").get<double>() / band.at("min").get<double>() << " (tol 1.5), power exact gap "
               << result(rep, "power_norm_exact_gap") << " (tol 1e-12)";
    require_checks(out, rep, "r=" + std::to_string(r));
  }
}

void gamma_quotient_check(Outcome& out) {
  const auto rep = scenario("quotient", [](auto& c) { c.thresholds["kernel_dim"] = 1; });
  const auto& eig = rep.results.at("induced_eigenvalues");
  const std::vector<Complex> expected = {1.0, std::polar(1.0, std::numbers::pi / 3.0)};
  double eig_err = eig.size() == expected.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(eig.size(), expected.size()); ++i)
    eig_err = std::max(eig_err, std::abs(Complex(eig[i][0].get<double>(), eig[i][1].get<double>()) - expected[i]));
  out.detail << "kernel dim " << rep.results.at("kernel_dim") << " (want 1), isometry defect "
             << result(rep, "isometry_defect") << " (tol 1e-6), induced eigenvalue error " << eig_err
             << " (tol 1e-8)";
  require_checks(out, rep, "quotient");
  out.require(eig_err <= 1e-8, "induced eigenvalues");
}

void mean_convergence(Outcome& out) {
  const auto exact = scenario("convergence");
  double rate_err = 0.0, over = -INFINITY;
  for (const auto& s : exact.sequences.front().data.points) {
    const double n = static_cast<double>(s.n);
    rate_err = std::max(rate_err, std::abs(s.value - (2.0 - std::pow(2.0, -n)) / (n + 1.0)));
    over = std::max(over, s.value - 2.0 / (n + 1.0));
  }
  const auto general = scenario("convergence", [](auto& c) { c.op = "builtin:diag:1,1,-1,@120,0.9,0.3@45"; });
  out.detail << "diag(1, 0.5): |dist - (2 - 2^-n)/(n+1)| " << rate_err << " (tol 1e-12), max(dist - 2/(n+1)) "
             << over << " (tol 1e-12); diag(1, 1, -1, e^{2pi i/3}, 0.9, 0.3 e^{i pi/4}): C = "
             << result(general, "rate_constant") << ", tail/head ratio "
             << result(general, "rate_constant_second_half") / result(general, "rate_constant_first_half")
             << " (tol 1.05)";
  out.require(rate_err <= 1e-12, "exact rate");
  out.require(over <= 1e-12, "2/(n+1) bound");
  require_checks(out, exact, "diag(1,0.5)");
  require_checks(out, general, "general");
}

}  // namespace

int main() {
  struct Criterion {
    std::string title;
    std::function<void(Outcome&)> body;
    double budget_s;  // wall-time limit; infinity when none is stated
  };
  const double none = INFINITY;
  const std::vector<Criterion> criteria = {
      {"Cesaro identities", cesaro_identities, 5},
      {"backward-iterate suite", backward_suite, 2},
      {"series identity, Abel summation, mean bound", series_machinery, 30},
      {"Jordan Kreiss dichotomy", kreiss_dichotomy, none},
      {"Jordan power growth exponents", jordan_exponents, none},
      {"Volterra growth exponent", volterra_exponent, 60},
      {"shift power gap on H1", shift_gap, none},
      {"H1 3-isometry and weak nullity", h1_weak_nullity, none},
      {"Shields logarithmic growth", shields, 120},
      {"gamma quotient", gamma_quotient_check, none},
      {"mean-ergodic convergence rate", mean_convergence, none},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].body(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [error: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < criteria[i].budget_s, "runtime over " + std::to_string(criteria[i].budget_s) + " s");
    if (!out.pass) ++failures;
    std::printf("%s criterion %zu: %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].title.c_str(), out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
