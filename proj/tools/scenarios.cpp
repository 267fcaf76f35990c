#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ergolab/examples.hpp"
#include "ergolab/spectral.hpp"

namespace ergolab::cli {

namespace {

using nlohmann::json;

// Declared thresholds per scenario; a missing default means the check only
// runs when the threshold is supplied.
const std::map<std::string, std::map<std::string, std::optional<double>>>& threshold_table() {
  static const std::map<std::string, std::map<std::string, std::optional<double>>> table = {
      {"identities", {{"identity_tol", 1e-10}}},
      {"kreiss", {{"refinement_max", std::nullopt}, {"value_max", std::nullopt}}},
      {"uniform_kreiss", {{"mean_bound_ratio", 1.0 + 1e-6}}},
      {"growth", {{"exponent_min", std::nullopt}, {"exponent_max", std::nullopt}}},
      {"nevanlinna", {{"exponent_margin", 0.5}, {"kreiss_refinement_max", 1.05}}},
      {"shields",
       {{"log_fit_residual", 0.10},
        {"band_ratio", 1.5},
        {"doubling_spread", 0.25},
        {"node_change", 1e-6},
        {"power_exact", 1e-12}}},
      {"h1",
       {{"iso_tol", 1e-9},
        {"gap_tol", 1e-12},
        {"pairing_tol", 1e-12},
        {"pairing_at_199", 0.01},
        {"plateau_change", 0.05},
        {"mean_norm_bound", 10.0},
        {"power_ratio_min", 0.5}}},
      {"quotient", {{"isometry_defect", 1e-6}, {"kernel_dim", std::nullopt}}},
      {"convergence", {{"rate_ratio", 1.05}}},
  };
  return table;
}

class Context {
 public:
  Context(const ScenarioConfig& cfg, Report& rep) : cfg_(cfg), rep_(rep) {
    const auto& declared = threshold_table().at(cfg.scenario);
    for (const auto& [name, value] : cfg.thresholds) {
      (void)value;
      if (!declared.contains(name))
        throw Error(Errc::ConfigError, "scenario '" + cfg.scenario + "' has no threshold '" + name + "'");
    }
  }

  std::optional<double> threshold(const std::string& name) const {
    if (auto it = cfg_.thresholds.find(name); it != cfg_.thresholds.end()) return it->second;
    return threshold_table().at(cfg_.scenario).at(name);
  }

  double required(const std::string& name) const { return *threshold(name); }

  void check(const std::string& name, double value, const std::string& cmp, double limit) {
    bool pass = false;
    if (cmp == "<=") pass = value <= limit;
    else if (cmp == "<") pass = value < limit;
    else if (cmp == ">=") pass = value >= limit;
    else if (cmp == ">") pass = value > limit;
    else if (cmp == "==") pass = value == limit;
    pass = pass && !std::isnan(value);
    rep_.checks.push_back({name, value, cmp, limit, pass});
  }

  void check_optional(const std::string& name, const std::string& threshold_name, double value,
                      const std::string& cmp) {
    if (auto t = threshold(threshold_name)) check(name, value, cmp, *t);
  }

 private:
  const ScenarioConfig& cfg_;
  Report& rep_;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json sequence_json(const GrowthReport& g) {
  json n = json::array();
  json v = json::array();
  for (const auto& pt : g.points) {
    n.push_back(pt.n);
    v.push_back(pt.value);
  }
  json out{{"label", g.label}, {"n", n}, {"value", v}, {"overflow", g.overflow}};
  if (g.fitted) {
    out["fit_exponent"] = g.fit_exponent;
    out["fit_residual"] = g.fit_residual;
    out["window"] = json::array({g.window_lo, g.window_hi});
  }
  return out;
}

json functional_json(const FunctionalReport& f) {
  return {{"value", f.value},
          {"argmax", {{"radius", f.argmax.radius}, {"angle", f.argmax.angle}, {"n", f.argmax.n}}},
          {"refinement_ratio", f.refinement_ratio},
          {"skipped", f.skipped},
          {"profile", f.profile}};
}

std::vector<double> step_ratios(const std::vector<double>& profile) {
  std::vector<double> out;
  for (std::size_t i = 1; i < profile.size(); ++i)
    out.push_back(profile[i - 1] > 0.0 ? profile[i] / profile[i - 1] : 0.0);
  return out;
}

template <typename T>
T pick(const std::optional<T>& v, T fallback) {
  return v ? *v : fallback;
}

// ---------------------------------------------------------------- scenarios

void run_identities(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:random:5:0.9");
  const std::string scheme_spec = pick<std::string>(cfg.scheme, "cesaro:p=2");
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  const MeanScheme s = parse_scheme(scheme_spec);
  const long long nmax = pick<long long>(cfg.nmax, 64);
  int p = pick(cfg.p, 0);
  if (p == 0) p = s.is<scheme::Cesaro>() ? std::get<scheme::Cesaro>(s.kind()).p : 2;
  rep.config = {{"op", op_spec}, {"scheme", scheme_spec}, {"nmax", nmax}, {"p", p},
                {"tail_eps", cfg.tail_eps}, {"seed", cfg.seed}};

  const Index d = t.dim();
  const ComplexMatrix id = identity(d);
  const ComplexMatrix shifted = t.matrix - id;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  for (int q = 1; q <= p; ++q) {
    const MeanScheme mq = MeanScheme::cesaro(q);
    for (long long n = 1; n <= nmax; ++n) {
      const double nd = static_cast<double>(n);
      const ComplexMatrix mn = apply_mean(mq, t, n);
      const ComplexMatrix mn1 = apply_mean(mq, t, n + 1);
      const ComplexMatrix lower = q == 1 ? power(t, n + 1) : apply_mean(MeanScheme::cesaro(q - 1), t, n + 1);
      r1 = std::max(r1, op_norm(t, mn * shifted - (q / (nd + 1.0)) * (lower - id)));
      r2 = std::max(r2, op_norm(t, t.matrix * mn - ((nd + q + 1.0) / (nd + 1.0)) * mn1 + (q / (nd + 1.0)) * id));
      r3 = std::max(r3, op_norm(t, ((nd + q + 1.0) / (nd + 1.0)) * mn1 - mn - (q / (nd + 1.0)) * lower));
    }
  }

  const MeanScheme back = backward_iterate(s);
  double rb = 0.0;
  for (long long n = back.min_n(); n <= back.min_n() + nmax; ++n)
    rb = std::max(rb, backit_identity_residual(s, t, n, cfg.tail_eps));

  double ra = 0.0;
  for (int m = 0; m < 4; ++m) {
    const Complex lambda = std::polar(1.0, std::numbers::pi * m / 2.0);
    ra = std::max(ra, abel_summation_residual(t, lambda, 0.7, nmax));
  }

  rep.results = {{"cesaro_identity_1", r1}, {"cesaro_identity_2", r2}, {"cesaro_identity_3", r3},
                 {"backward_identity", rb}, {"backward_scheme", back.name()},
                 {"abel_summation", ra}};
  const double tol = ctx.required("identity_tol");
  ctx.check("cesaro_identities", std::max({r1, r2, r3}), "<=", tol);
  ctx.check("backward_identity", rb, "<=", tol);
  ctx.check("abel_summation", ra, "<=", tol);
}

AnnulusGrid grid_from(const ScenarioConfig& cfg, int kmax_default, int angles_default) {
  return AnnulusGrid::dyadic(pick(cfg.kmax, kmax_default), pick(cfg.angles, angles_default));
}

void run_kreiss(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:jordan:2:1");
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  const int r = pick(cfg.r, 0);
  const AnnulusGrid grid = grid_from(cfg, 10, 512);
  rep.config = {{"op", op_spec}, {"r", r}, {"kmax", grid.radii.size()}, {"angles", grid.angles}};
  const FunctionalReport f = kreiss_functional(t, r, grid);
  rep.results = functional_json(f);
  rep.results["radii"] = grid.radii;
  rep.results["step_ratios"] = step_ratios(f.profile);
  ctx.check_optional("refinement_ratio", "refinement_max", f.refinement_ratio, "<=");
  ctx.check_optional("value", "value_max", f.value, "<=");
}

void run_uniform_kreiss(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:dirichlet:1:32:backward");
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  const int r = pick(cfg.r, 0);
  const long long nmax = pick<long long>(cfg.nmax, 64);
  const AnnulusGrid grid = grid_from(cfg, 6, 64);
  rep.config = {{"op", op_spec}, {"r", r}, {"nmax", nmax}, {"kmax", grid.radii.size()},
                {"angles", grid.angles}};
  const MeanBoundReport b = kreiss_to_mean_bound_check(t, r, nmax, grid.angles, grid);
  rep.results = {{"partial_sum_constant", b.constant},
                 {"bound_factor", std::pow(2.0, r) * (2.0 * std::numbers::e - 1.0)},
                 {"max_ratio", b.max_ratio},
                 {"argmax", {{"n", b.argmax_n}, {"angle", b.argmax_angle}}}};
  ctx.check("mean_bound_ratio", b.max_ratio, "<=", ctx.required("mean_bound_ratio"));
}

GrowthReport norm_sequence(const OperatorModel& t, const MeanScheme& s, long long nmax, NormKind kind) {
  if (s.is<scheme::IdentityPowers>()) return power_norm_sequence(t, nmax, kind);
  GrowthReport g;
  g.label = s.name() + " on " + t.label;
  MeanSweep sweep(s, t);
  while (sweep.n() < 1) sweep.advance();
  for (;;) {
    g.points.push_back({sweep.n(), op_norm(t, sweep.value(), kind)});
    if (sweep.n() >= nmax) break;
    sweep.advance();
  }
  return g;
}

void run_growth(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:jordan:2:1");
  const std::string scheme_spec = pick<std::string>(cfg.scheme, "powers");
  const std::string norm = pick<std::string>(cfg.norm, "spectral");
  const long long nmax = pick<long long>(cfg.nmax, 512);
  rep.config = {{"op", op_spec}, {"scheme", scheme_spec}, {"norm", norm}, {"nmax", nmax},
                {"window_fraction", cfg.window_fraction}};
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  GrowthReport g = norm_sequence(t, parse_scheme(scheme_spec), nmax, parse_norm(norm));
  fit_growth(g, cfg.window_fraction);
  rep.results = {{"fit_exponent", g.fit_exponent}, {"fit_residual", g.fit_residual},
                 {"window", json::array({g.window_lo, g.window_hi})}, {"overflow", g.overflow}};
  ctx.check_optional("fit_exponent_min", "exponent_min", g.fit_exponent, ">=");
  ctx.check_optional("fit_exponent_max", "exponent_max", g.fit_exponent, "<=");
  rep.sequences.push_back({"growth", std::move(g)});
}

void run_nevanlinna(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:jordan:2:1");
  const int r = pick(cfg.r, 1);
  const long long nmax = pick<long long>(cfg.nmax, 512);
  const AnnulusGrid grid = grid_from(cfg, 10, 64);
  rep.config = {{"op", op_spec}, {"r", r}, {"nmax", nmax}, {"kmax", grid.radii.size()},
                {"angles", grid.angles}, {"window_fraction", cfg.window_fraction}};
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  GrowthReport g = power_norm_sequence(t, nmax);
  fit_growth(g, cfg.window_fraction);
  const FunctionalReport k = kreiss_functional(t, r, grid);
  const double last = g.points.back().value / std::pow(static_cast<double>(g.points.back().n), r + 1);
  rep.results = {{"fit_exponent", g.fit_exponent},
                 {"fit_residual", g.fit_residual},
                 {"bound_exponent", r + 1},
                 {"normalised_last", last},
                 {"kreiss", functional_json(k)}};
  ctx.check("fit_exponent", g.fit_exponent, "<=", r + 1 - ctx.required("exponent_margin"));
  ctx.check("kreiss_refinement_ratio", k.refinement_ratio, "<=", ctx.required("kreiss_refinement_max"));
  rep.sequences.push_back({"power_norms", std::move(g)});
}

void run_shields(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const int r = pick(cfg.r, 0);
  const long long nmax = pick<long long>(cfg.nmax, 4096);
  const long long nodes = pick<long long>(cfg.quad_nodes, 0);
  rep.config = {{"r", r}, {"nmax", nmax}, {"quad_nodes", nodes}};
  ShieldsReport s = shields_report(r, nmax, nodes);

  double exact_gap = 0.0;
  for (const auto& pt : s.power_norm.points) {
    double expected = 1.0;
    for (int j = 1; j <= r; ++j) expected *= 1.0 - static_cast<double>(j) / static_cast<double>(pt.n);
    exact_gap = std::max(exact_gap, std::abs(pt.value - expected));
  }
  const LogFit lower = fit_log(s.lower_bound.points, s.fit_lo, s.fit_hi);
  json increments = json::array();
  for (const auto& pt : s.doubling_increments) increments.push_back({pt.n, pt.value});
  rep.results = {{"log_fit", {{"slope", s.log_fit.slope}, {"intercept", s.log_fit.intercept},
                              {"relative_residual", s.log_fit.relative_residual},
                              {"window", json::array({s.fit_lo, s.fit_hi})}}},
                 {"band", {{"min", s.band_min}, {"max", s.band_max}}},
                 {"doubling_increments", increments},
                 {"doubling_spread", s.doubling_spread},
                 {"node_check", s.node_check},
                 {"power_norm_exact_gap", exact_gap},
                 {"lower_bound_log_slope", lower.slope}};
  ctx.check("log_fit_slope", s.log_fit.slope, ">", 0.0);
  ctx.check("log_fit_residual", s.log_fit.relative_residual, "<=", ctx.required("log_fit_residual"));
  ctx.check("band_ratio", s.band_max / s.band_min, "<=", ctx.required("band_ratio"));
  if (!s.doubling_increments.empty())
    ctx.check("doubling_spread", s.doubling_spread, "<=", ctx.required("doubling_spread"));
  ctx.check("node_change", s.node_check, "<=", ctx.required("node_change"));
  ctx.check("power_norm_exact", exact_gap, "<=", ctx.required("power_exact"));
  rep.sequences.push_back({"mean_norm", std::move(s.mean_norm)});
  rep.sequences.push_back({"power_norm", std::move(s.power_norm)});
  rep.sequences.push_back({"lower_bound", std::move(s.lower_bound)});
}

Poly random_poly(Rng& rng, long long max_degree) {
  const long long deg = rng.integer(0, max_degree);
  std::vector<Complex> c(static_cast<std::size_t>(deg + 1));
  for (auto& v : c) v = rng.normal();
  return Poly(std::move(c));
}

void run_h1(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string which = pick<std::string>(cfg.check, "all");
  static const std::set<std::string> known = {"all", "3iso", "gap", "pairing", "meannorm"};
  if (!known.contains(which)) throw Error(Errc::ConfigError, "unknown h1 check '" + which + "'");
  const long long degree = pick<long long>(cfg.degree, which == "3iso" ? 8 : 32);
  rep.config = {{"check", which}, {"degree", degree}, {"seed", cfg.seed}};
  auto wants = [&](const char* name) { return which == "all" || which == name; };
  Rng rng(cfg.seed);

  if (wants("3iso")) {
    double worst = 0.0;
    const auto mz = [](const Poly& p) { return shift(p, 1); };
    for (int i = 0; i < 200; ++i)
      worst = std::max(worst, std::abs(m_isometry_defect(h1_norm, mz, 3, random_poly(rng, degree))));
    rep.results["three_isometry_defect"] = worst;
    ctx.check("three_isometry_defect", worst, "<=", ctx.required("iso_tol"));
  }
  if (wants("gap")) {
    long long violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      const Poly f = random_poly(rng, degree);
      const long long n = rng.integer(2, 64);
      const GapPair g = shift_power_gap(f, n);
      min_margin = std::min(min_margin, g.lhs - g.rhs);
      if (g.lhs < g.rhs - ctx.required("gap_tol")) ++violations;
    }
    double monomial_gap = 0.0;
    for (long long k = 0; k <= 20; ++k) {
      const double v = h1_norm(Poly::monomial(k));
      monomial_gap = std::max(monomial_gap, std::abs(v * v - (1.0 + (k + 2.0) * (k + 2.0))));
    }
    rep.results["gap"] = {{"violations", violations}, {"min_margin", min_margin},
                          {"monomial_norm_gap", monomial_gap}};
    ctx.check("gap_violations", static_cast<double>(violations), "==", 0.0);
    ctx.check("monomial_norm_gap", monomial_gap, "<=", ctx.required("gap_tol"));
  }
  if (wants("pairing")) {
    double worst = 0.0;
    for (long long n = 1; n <= 199; ++n) {
      const Complex v = h1_mean_pairing(n, Poly::monomial(0), Poly::monomial(0));
      worst = std::max(worst, std::abs(v - 2.0 / static_cast<double>(n + 1)));
    }
    const double at199 = std::abs(h1_mean_pairing(199, Poly::monomial(0), Poly::monomial(0)));
    rep.results["pairing"] = {{"max_error", worst}, {"value_at_199", at199}};
    ctx.check("pairing_error", worst, "<=", ctx.required("pairing_tol"));
    // 2/200 sits exactly on the bound, so the identity tolerance is allowed on top.
    ctx.check("pairing_at_199", at199, "<=", ctx.required("pairing_at_199") + ctx.required("pairing_tol"));
  }
  if (wants("meannorm")) {
    static const std::vector<long long> ns = {0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
    double sup256 = 0.0, sup512 = 0.0;
    json rows = json::array();
    for (long long n : ns) {
      const double a = h1_mean_norm(n, 256);
      const double b = h1_mean_norm(n, 512);
      sup256 = std::max(sup256, a);
      sup512 = std::max(sup512, b);
      rows.push_back({n, a, b});
    }
    double power_ratio = std::numeric_limits<double>::infinity();
    for (long long n = 8; n <= 256; ++n)
      power_ratio = std::min(power_ratio, h1_norm(Poly::monomial(n)) / static_cast<double>(n));
    const double change = std::abs(sup512 - sup256) / sup256;
    rep.results["mean_norm"] = {{"samples", rows}, {"sup_256", sup256}, {"sup_512", sup512},
                                {"plateau_change", change}, {"min_power_ratio", power_ratio}};
    ctx.check("mean_norm_bound", sup512, "<=", ctx.required("mean_norm_bound"));
    ctx.check("mean_norm_plateau", change, "<", ctx.required("plateau_change"));
    ctx.check("power_ratio_min", power_ratio, ">=", ctx.required("power_ratio_min"));
  }
}

void run_quotient(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:diag:1,@60,0.5");
  const std::string scheme_spec = pick<std::string>(cfg.scheme, "powers");
  const long long m = pick<long long>(cfg.m, 0);
  const long long lo = pick<long long>(cfg.window_lo, 256);
  const long long hi = pick<long long>(cfg.window_hi, 512);
  rep.config = {{"op", op_spec}, {"scheme", scheme_spec}, {"m", m}, {"window", json::array({lo, hi})}};
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  const QuotientModel q = gamma_quotient(t, parse_scheme(scheme_spec), m, lo, hi);
  json eig = json::array();
  if (q.quotient_dim() > 0) {
    const ComplexVector ev = eigenvalues(q.induced_op);
    std::vector<Complex> sorted(ev.data(), ev.data() + ev.size());
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
      return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b) : std::abs(a) < std::abs(b);
    });
    for (auto z : sorted) eig.push_back(complex_json(z));
  }
  rep.results = {{"kernel_dim", q.kernel_basis.cols()},
                 {"quotient_dim", q.quotient_dim()},
                 {"induced_eigenvalues", eig},
                 {"isometry_defect", q.isometry_defect},
                 {"window_sensitivity", q.window_sensitivity},
                 {"kernel_tol", q.kernel_tol},
                 {"gamma_values", q.gamma_values}};
  ctx.check("isometry_defect", q.isometry_defect, "<=", ctx.required("isometry_defect"));
  ctx.check_optional("kernel_dim", "kernel_dim", static_cast<double>(q.kernel_basis.cols()), "==");
}

void run_convergence(const ScenarioConfig& cfg, Report& rep, Context& ctx) {
  const std::string op_spec = pick<std::string>(cfg.op, "builtin:diag:1,0.5");
  const std::string scheme_spec = pick<std::string>(cfg.scheme, "cesaro:p=1");
  const long long nmax = pick<long long>(cfg.nmax, 256);
  rep.config = {{"op", op_spec}, {"scheme", scheme_spec}, {"nmax", nmax}};
  const OperatorModel t = resolve_operator(op_spec, cfg.seed);
  GrowthReport g = mean_convergence_report(parse_scheme(scheme_spec), t, nmax);
  double head = 0.0, tail = 0.0;
  for (const auto& pt : g.points) {
    const double scaled = static_cast<double>(pt.n + 1) * pt.value;
    (2 * pt.n <= nmax ? head : tail) = std::max(2 * pt.n <= nmax ? head : tail, scaled);
  }
  rep.results = {{"rate_constant", std::max(head, tail)}, {"rate_constant_first_half", head},
                 {"rate_constant_second_half", tail}};
  ctx.check("rate_ratio", head > 0.0 ? tail / head : 0.0, "<=", ctx.required("rate_ratio"));
  rep.sequences.push_back({"distance_to_projection", std::move(g)});
}

}  // namespace

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name}, {"value", c.value}, {"comparison", c.comparison},
                           {"threshold", c.threshold}, {"pass", c.pass}});
  json seqs = json::array();
  for (const auto& s : sequences) {
    json entry = sequence_json(s.data);
    entry["name"] = s.name;
    seqs.push_back(std::move(entry));
  }
  return {{"scenario", scenario}, {"config", config}, {"results", results},
          {"sequences", seqs},    {"checks", checks_json}, {"pass", pass()}};
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"identities", "kreiss", "uniform_kreiss",
                                                 "growth",     "nevanlinna", "shields",
                                                 "h1",         "quotient", "convergence"};
  return names;
}

ScenarioConfig apply_json_config(ScenarioConfig c, const json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigError, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "scenario") c.scenario = value.get<std::string>();
      else if (key == "op") c.op = value.get<std::string>();
      else if (key == "scheme") c.scheme = value.get<std::string>();
      else if (key == "nmax") c.nmax = value.get<long long>();
      else if (key == "r") c.r = value.get<int>();
      else if (key == "p") c.p = value.get<int>();
      else if (key == "kmax") c.kmax = value.get<int>();
      else if (key == "angles") c.angles = value.get<int>();
      else if (key == "m") c.m = value.get<long long>();
      else if (key == "window_lo") c.window_lo = value.get<long long>();
      else if (key == "window_hi") c.window_hi = value.get<long long>();
      else if (key == "degree") c.degree = value.get<long long>();
      else if (key == "quad_nodes") c.quad_nodes = value.get<long long>();
      else if (key == "norm") c.norm = value.get<std::string>();
      else if (key == "check") c.check = value.get<std::string>();
      else if (key == "tail_eps") c.tail_eps = value.get<double>();
      else if (key == "window_fraction") c.window_fraction = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "thresholds") {
        for (const auto& [name, t] : value.items()) c.thresholds[name] = t.get<double>();
      } else {
        throw Error(Errc::ConfigError, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigError, std::string("config value has the wrong type: ") + e.what());
  }
  return c;
}

ScenarioConfig load_json_config(ScenarioConfig config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(Errc::ConfigError, path.string() + ": " + e.what());
  }
  return apply_json_config(std::move(config), j);
}

Report run(const ScenarioConfig& config) {
  const auto& names = scenario_names();
  if (std::find(names.begin(), names.end(), config.scenario) == names.end())
    throw Error(Errc::ConfigError, "unknown scenario '" + config.scenario + "'");
  if (!(config.window_fraction > 0.0 && config.window_fraction <= 1.0))
    throw Error(Errc::ConfigError, "window_fraction must lie in (0, 1]");
  Report rep;
  rep.scenario = config.scenario;
  Context ctx(config, rep);
  try {
    if (config.scenario == "identities") run_identities(config, rep, ctx);
    else if (config.scenario == "kreiss") run_kreiss(config, rep, ctx);
    else if (config.scenario == "uniform_kreiss") run_uniform_kreiss(config, rep, ctx);
    else if (config.scenario == "growth") run_growth(config, rep, ctx);
    else if (config.scenario == "nevanlinna") run_nevanlinna(config, rep, ctx);
    else if (config.scenario == "shields") run_shields(config, rep, ctx);
    else if (config.scenario == "h1") run_h1(config, rep, ctx);
    else if (config.scenario == "quotient") run_quotient(config, rep, ctx);
    else run_convergence(config, rep, ctx);
  } catch (const Error& e) {
    std::string_view msg = e.what();
    const std::string code_prefix = std::string(errc_name(e.code())) + ": ";
    if (msg.starts_with(code_prefix)) msg.remove_prefix(code_prefix.size());
    throw Error(e.code(), "scenario " + config.scenario + ": " + std::string(msg));
  }
  return rep;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sequence_csv(const GrowthReport& seq) {
  std::ostringstream os;
  os << "n,value\n";
  for (const auto& pt : seq.points) os << pt.n << ',' << format_double(pt.value) << '\n';
  if (seq.fitted) {
    os << "fit_exponent," << format_double(seq.fit_exponent) << '\n';
    os << "fit_residual," << format_double(seq.fit_residual) << '\n';
  }
  return os.str();
}

void write_report(const Report& report, const std::filesystem::path& path) {
  const bool csv = path.extension() == ".csv";
  if (csv && report.sequences.empty())
    throw Error(Errc::ConfigError, "scenario " + report.scenario + " has no sequence for CSV output");
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  if (csv) {
    out << sequence_csv(report.sequences.front().data);
  } else {
    out << report.to_json().dump(2) << '\n';
  }
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string rows_csv(const MeanScheme& s, long long n_lo, long long n_hi, double tail_eps) {
  std::ostringstream os;
  os << "n,j,t\n";
  for (long long n = std::max(n_lo, s.min_n()); n <= n_hi; ++n)
    for (const auto& e : scheme_row(s, n, tail_eps).support)
      os << n << ',' << e.j << ',' << format_double(e.t) << '\n';
  return os.str();
}

}  // namespace ergolab::cli
