#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenarios.hpp"

namespace {

using ergolab::Errc;
using ergolab::Error;
using ergolab::cli::ScenarioConfig;

constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

template <typename T>
void set_if(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

std::pair<std::string, double> parse_threshold(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(Errc::ConfigError, "threshold must be name=value, got '" + text + "'");
  try {
    std::size_t used = 0;
    const double v = std::stod(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) throw std::invalid_argument("trailing");
    return {text.substr(0, eq), v};
  } catch (const std::logic_error&) {
    throw Error(Errc::ConfigError, "bad threshold value in '" + text + "'");
  }
}

int print_list() {
  std::cout << "scenarios:\n";
  for (const auto& s : ergolab::cli::scenario_names()) std::cout << "  " << s << '\n';
  std::cout << "builtin operators (prefix with builtin:):\n";
  for (const auto& b : ergolab::cli::list_builtins())
    std::cout << "  " << b.pattern << "\n      " << b.description << '\n';
  std::cout << "schemes: cesaro:p=N, abel, zweier, binomial, powers, "
               "powseries:coeffs=a,b,...[:tail=repeat], back:<scheme>\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: numerical experiments on operator means"};
  app.set_version_flag("--version", "ergolab 0.3.0");

  std::vector<std::string> command;
  app.add_option("command", command,
                 "scenario name, `example shields|h1`, `list`, or `rows`")
      ->required()
      ->expected(1, 2);

  ScenarioConfig flags;
  std::optional<std::string> op, scheme, norm, check, config_path, out;
  std::optional<long long> nmax, m, window_lo, window_hi, degree, quad_nodes, n_lo, n_hi;
  std::optional<int> r, p, kmax, angles;
  std::optional<double> tail_eps, window_fraction;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> thresholds;

  app.add_option("--op", op, "builtin:<spec> or operator JSON file");
  app.add_option("--scheme", scheme, "mean scheme, e.g. cesaro:p=2");
  app.add_option("--nmax", nmax, "largest index n");
  app.add_option("--r", r, "order r");
  app.add_option("--p", p, "Cesaro order p");
  app.add_option("--kmax", kmax, "finest annulus radius 1 + 2^-kmax");
  app.add_option("--angles", angles, "angles per circle");
  app.add_option("--m", m, "power of (T - I)");
  app.add_option("--window-lo", window_lo, "first index of the averaging window");
  app.add_option("--window-hi", window_hi, "last index of the averaging window");
  app.add_option("--degree", degree, "maximal random polynomial degree");
  app.add_option("--quad-nodes", quad_nodes, "quadrature nodes on the circle (0 = automatic)");
  app.add_option("--norm", norm, "spectral | colsum | rowsum");
  app.add_option("--check", check, "h1 check: all | 3iso | gap | pairing | meannorm");
  app.add_option("--tail-eps", tail_eps, "truncation mass for infinite rows");
  app.add_option("--window-fraction", window_fraction, "trailing fraction used in exponent fits");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threshold", thresholds, "override a check threshold, name=value")->take_all();
  app.add_option("--config", config_path, "JSON config; its keys override flags");
  app.add_option("--out", out, "write the report here (.csv writes the first sequence)");
  app.add_option("--n-lo", n_lo, "rows: first n");
  app.add_option("--n-hi", n_hi, "rows: last n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (command.front() == "list") return print_list();

    if (command.front() == "rows") {
      const auto s = ergolab::parse_scheme(scheme.value_or("cesaro:p=1"));
      const double eps = tail_eps.value_or(ergolab::kDefaultTailEps);
      std::cout << ergolab::cli::rows_csv(s, n_lo.value_or(s.min_n()), n_hi.value_or(s.min_n() + 8), eps);
      return 0;
    }

    ScenarioConfig cfg;
    if (command.front() == "example") {
      if (command.size() != 2 || (command[1] != "shields" && command[1] != "h1"))
        throw Error(Errc::ConfigError, "usage: ergolab example shields|h1 [flags]");
      cfg.scenario = command[1];
    } else {
      if (command.size() != 1) throw Error(Errc::ConfigError, "unexpected argument '" + command[1] + "'");
      cfg.scenario = command.front();
    }
    set_if(cfg.op, op);
    set_if(cfg.scheme, scheme);
    set_if(cfg.nmax, nmax);
    set_if(cfg.r, r);
    set_if(cfg.p, p);
    set_if(cfg.kmax, kmax);
    set_if(cfg.angles, angles);
    set_if(cfg.m, m);
    set_if(cfg.window_lo, window_lo);
    set_if(cfg.window_hi, window_hi);
    set_if(cfg.degree, degree);
    set_if(cfg.quad_nodes, quad_nodes);
    set_if(cfg.norm, norm);
    set_if(cfg.check, check);
    if (tail_eps) cfg.tail_eps = *tail_eps;
    if (window_fraction) cfg.window_fraction = *window_fraction;
    if (seed) cfg.seed = *seed;
    for (const auto& t : thresholds) cfg.thresholds.insert_or_assign(parse_threshold(t).first, parse_threshold(t).second);
    if (config_path) cfg = ergolab::cli::load_json_config(std::move(cfg), *config_path);

    const auto report = ergolab::cli::run(cfg);
    if (out) {
      ergolab::cli::write_report(report, *out);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ' ' << ergolab::cli::format_double(c.value) << ' '
                  << c.comparison << ' ' << ergolab::cli::format_double(c.threshold) << '\n';
      std::cout << report.scenario << ": " << (report.pass() ? "PASS" : "FAIL") << '\n';
    } else {
      std::cout << report.to_json().dump(2) << '\n';
    }
    return report.pass() ? 0 : kExitCheckFailed;
  } catch (const Error& e) {
    std::cerr << "ergolab: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ergolab: " << e.what() << '\n';
    return kExitConfig;
  }
}
