#include <charconv>
#include <cmath>
#include <numbers>
#include <string_view>

#include "ergolab/linop_io.hpp"
#include "scenarios.hpp"

namespace ergolab::cli {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Error config_error(const std::string& spec, const std::string& why) {
  return Error(Errc::ConfigError, "operator '" + spec + "': " + why);
}

double number(std::string_view text, const std::string& spec) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw config_error(spec, "bad number '" + std::string(text) + "'");
  return v;
}

long long count(std::string_view text, const std::string& spec) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw config_error(spec, "bad integer '" + std::string(text) + "'");
  return v;
}

// "x", "yi", "x+yi", "x-yi", "i", "-i", "r@deg", "@deg".
Complex complex_literal(std::string_view text, const std::string& spec) {
  if (const auto at = text.find('@'); at != std::string_view::npos) {
    const double radius = at == 0 ? 1.0 : number(text.substr(0, at), spec);
    const double degrees = number(text.substr(at + 1), spec);
    if (degrees == 0.0) return {radius, 0.0};
    return std::polar(radius, degrees * std::numbers::pi / 180.0);
  }
  if (text.empty()) throw config_error(spec, "empty complex literal");
  if (text.back() != 'i') return {number(text, spec), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not leading and not part of an exponent.
  std::size_t split_at = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return number(s.front() == '+' ? s.substr(1) : s, spec);
  };
  if (split_at == std::string_view::npos) return {0.0, imag_part(body)};
  return {number(body.substr(0, split_at), spec), imag_part(body.substr(split_at))};
}

OperatorModel builtin(const std::string& spec, std::uint64_t seed) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.front();
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi)
      throw config_error(spec, "expected " + std::to_string(lo - 1) + (lo == hi ? "" : "-" + std::to_string(hi - 1)) +
                                   " fields after '" + kind + "'");
  };
  try {
    if (kind == "diag") {
      need(2, 2);
      std::vector<Complex> values;
      for (const auto& v : split(parts[1], ',')) values.push_back(complex_literal(v, spec));
      return diagonal_operator(values);
    }
    if (kind == "dirichlet") {
      need(4, 4);
      ShiftDirection dir;
      if (parts[3] == "forward" || parts[3] == "f") dir = ShiftDirection::Forward;
      else if (parts[3] == "backward" || parts[3] == "b") dir = ShiftDirection::Backward;
      else throw config_error(spec, "direction must be forward or backward");
      return dirichlet_shift(number(parts[1], spec), count(parts[2], spec), dir);
    }
    if (kind == "jordan") {
      need(3, 4);
      const double im = parts.size() == 4 ? number(parts[3], spec) : 0.0;
      return jordan_block(count(parts[1], spec), Complex(number(parts[2], spec), im));
    }
    if (kind == "random") {
      need(3, 4);
      const auto s = parts.size() == 4 ? static_cast<std::uint64_t>(count(parts[3], spec)) : seed;
      return random_operator(count(parts[1], spec), number(parts[2], spec), s);
    }
    if (kind == "volterra") {
      need(2, 2);
      return identity_minus_volterra(count(parts[1], spec));
    }
    if (kind == "volterra_v") {
      need(2, 2);
      return volterra_operator(count(parts[1], spec));
    }
    if (kind == "identity") {
      need(2, 2);
      return make_operator(identity(count(parts[1], spec)), std::nullopt, spec);
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw;
    throw config_error(spec, e.what());
  }
  throw config_error(spec, "unknown builtin; run `ergolab list`");
}

}  // namespace

std::vector<BuiltinInfo> list_builtins() {
  return {
      {"diag:v1,v2,...", "diagonal operator; entries x, x+yi, yi, r@deg or @deg"},
      {"dirichlet:alpha:N:forward|backward", "weighted shift of D_alpha in orthonormal coordinates"},
      {"identity:d", "d x d identity"},
      {"jordan:d:re[:im]", "d x d Jordan block"},
      {"random:d:rho[:seed]", "entries uniform on the unit disk, rescaled to spectral radius rho"},
      {"volterra:N", "I - V, V the trapezoid Volterra operator on N+1 nodes"},
      {"volterra_v:N", "the trapezoid Volterra operator V on N+1 nodes"},
  };
}

OperatorModel resolve_operator(const std::string& spec, std::uint64_t seed) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.starts_with(prefix)) {
    OperatorModel op = builtin(spec.substr(prefix.size()), seed);
    op.label = spec;
    return op;
  }
  if (!std::filesystem::exists(spec)) throw Error(Errc::ConfigError, "operator file not found: " + spec);
  OperatorModel op = load_operator_file(spec);
  if (op.label == "file") op.label = spec;
  return op;
}

NormKind parse_norm(const std::string& name) {
  if (name == "spectral" || name == "2") return NormKind::Spectral;
  if (name == "colsum" || name == "1") return NormKind::MaxColumnSum;
  if (name == "rowsum" || name == "inf") return NormKind::MaxRowSum;
  throw Error(Errc::ConfigError, "unknown norm '" + name + "' (spectral, colsum, rowsum)");
}

}  // namespace ergolab::cli
