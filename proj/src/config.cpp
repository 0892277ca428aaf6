#include "instab/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "instab/csv.hpp"
#include "instab/error.hpp"
#include "instab/spectral.hpp"

namespace instab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v, int line) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": '" + std::string(v) + "' is not a number", line);
  return out;
}

long long to_int(std::string_view key, std::string_view v, int line) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError(std::string(key) + ": '" + std::string(v) + "' is not an integer", line);
  return out;
}

void require(bool ok, std::string_view key, const char* what, int line) {
  if (!ok) throw ConfigError(std::string(key) + " out of range: " + what, line);
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_double(xs[i]);
  }
  return s;
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, std::string_view, int)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field real_field(const char* key, T ExperimentConfig::*member, bool (*ok)(double), const char* range) {
  return Field{key,
               [=](ExperimentConfig& c, std::string_view v, int line) {
                 const double x = to_double(key, v, line);
                 require(ok(x), key, range, line);
                 c.*member = x;
               },
               [=](const ExperimentConfig& c) { return format_double(c.*member); }};
}

template <class T>
Field int_field(const char* key, T ExperimentConfig::*member, long long lo, long long hi, const char* range) {
  return Field{key,
               [=](ExperimentConfig& c, std::string_view v, int line) {
                 const long long x = to_int(key, v, line);
                 require(x >= lo && x <= hi, key, range, line);
                 c.*member = static_cast<T>(x);
               },
               [=](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field list_field(const char* key, std::vector<double> ExperimentConfig::*member, bool (*ok)(double),
                 const char* range) {
  return Field{key,
               [=](ExperimentConfig& c, std::string_view v, int line) {
                 std::vector<double> xs;
                 try {
                   xs = parse_double_list(v);
                 } catch (const DomainError& e) {
                   throw ConfigError(std::string(key) + ": " + e.what(), line);
                 }
                 require(!xs.empty(), key, "empty list", line);
                 for (double x : xs) require(ok(x), key, range, line);
                 c.*member = std::move(xs);
               },
               [=](const ExperimentConfig& c) { return join(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"problem",
            [](ExperimentConfig& c, std::string_view v, int line) {
              require(v == "dtn" || v == "ntd" || v == "electrodes" || v == "farfield", "problem",
                      "one of dtn, ntd, electrodes, farfield", line);
              c.problem = std::string(v);
            },
            [](const ExperimentConfig& c) { return c.problem; }},
      Field{"kind",
            [](ExperimentConfig& c, std::string_view v, int line) {
              try {
                c.kind = parse_shape_kind(v);
              } catch (const DomainError& e) {
                throw ConfigError(std::string("kind: ") + e.what(), line);
              }
            },
            [](const ExperimentConfig& c) { return std::string(to_string(c.kind)); }},
      real_field("base_radius", &ExperimentConfig::base_radius, [](double x) { return x >= 0.0; }, ">= 0"),
      int_field("m", &ExperimentConfig::m, 1, 8, "1..8"),
      real_field("beta", &ExperimentConfig::beta, [](double x) { return x > 0.0; }, "> 0"),
      real_field("eps_cap", &ExperimentConfig::eps_cap, [](double x) { return x >= 0.0; }, ">= 0"),
      real_field("eps", &ExperimentConfig::eps, [](double x) { return x > 0.0 && x < 1.0; }, "(0, 1)"),
      list_field("eps_list", &ExperimentConfig::eps_list, [](double x) { return x > 0.0 && x < 1.0; }, "(0, 1)"),
      int_field("grid_size", &ExperimentConfig::grid_size, 16, 1 << 20, "16..1048576"),
      real_field("a", &ExperimentConfig::a,
                 [](double x) { return x > 0.0 && (x == 1.0 || std::abs(x - 1.0) >= 1e-6); },
                 "> 0 and |a - 1| >= 1e-6"),
      list_field("a_list", &ExperimentConfig::a_list, [](double x) { return x > 0.0; }, "> 0"),
      real_field("rho", &ExperimentConfig::rho, [](double x) { return x > 0.0 && x <= 0.8; }, "(0, 0.8]"),
      int_field("electrodes", &ExperimentConfig::electrodes, 2, 256, "2..256"),
      real_field("electrode_coverage", &ExperimentConfig::electrode_coverage,
                 [](double x) { return x > 0.0 && x < 1.0; }, "(0, 1)"),
      real_field("impedance", &ExperimentConfig::impedance, [](double x) { return x > 0.0; }, "> 0"),
      int_field("n_max", &ExperimentConfig::n_max, 1, 80, "1..80"),
      int_field("quad_nodes", &ExperimentConfig::quad_nodes, 16, 8192, "16..8192"),
      int_field("scatter_nodes", &ExperimentConfig::scatter_nodes, 16, 8192, "16..8192"),
      int_field("directions", &ExperimentConfig::directions, 0, 8192, "0..8192"),
      int_field("budget", &ExperimentConfig::budget, 2, 100000, "2..100000"),
      int_field("samples", &ExperimentConfig::samples, 1, 100000, "1..100000"),
      Field{"seed",
            [](ExperimentConfig& c, std::string_view v, int line) {
              std::uint64_t x = 0;
              const auto* end = v.data() + v.size();
              const auto r = std::from_chars(v.data(), end, x);
              if (r.ec != std::errc() || r.ptr != end)
                throw ConfigError("seed: '" + std::string(v) + "' is not an unsigned integer", line);
              c.seed = x;
            },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      int_field("threads", &ExperimentConfig::threads, 0, 1024, "0..1024"),
      real_field("delta", &ExperimentConfig::delta, [](double x) { return x > 0.0 && x < std::exp(-1.0); },
                 "(0, 1/e)"),
      real_field("C2", &ExperimentConfig::C2, [](double x) { return x > 0.0; }, "> 0"),
      real_field("alpha2", &ExperimentConfig::alpha2, [](double x) { return x > 0.0; }, "> 0"),
      int_field("p", &ExperimentConfig::p, 0, 16, "0..16"),
      Field{"domain",
            [](ExperimentConfig& c, std::string_view v, int line) {
              try {
                parse_domain_kind(v);
              } catch (const DomainError& e) {
                throw ConfigError(std::string("domain: ") + e.what(), line);
              }
              c.domain = std::string(v);
            },
            [](const ExperimentConfig& c) { return c.domain; }},
      real_field("r0", &ExperimentConfig::r0, [](double x) { return x > 0.0 && x < 1.0; }, "(0, 1)"),
      Field{"shape_file", [](ExperimentConfig& c, std::string_view v, int) { c.shape_file = std::string(v); },
            [](const ExperimentConfig& c) { return c.shape_file; }},
      Field{"out", [](ExperimentConfig& c, std::string_view v, int) { c.out = std::string(v); },
            [](const ExperimentConfig& c) { return c.out; }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = trim(text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos));
    if (piece.empty()) {
      if (comma == std::string_view::npos && out.empty() && trim(text).empty()) break;
      throw DomainError("empty list element");
    }
    double x = 0.0;
    const auto r = std::from_chars(piece.data(), piece.data() + piece.size(), x);
    if (r.ec != std::errc() || r.ptr != piece.data() + piece.size() || !std::isfinite(x))
      throw DomainError("'" + std::string(piece) + "' is not a number");
    out.push_back(x);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value, int line) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value, line);
      return;
    }
  }
  throw ConfigError("unknown key '" + std::string(key) + "'", line);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.quad_nodes % 2 != 0) throw ConfigError("quad_nodes must be even", 0);
  if (cfg.scatter_nodes % 2 != 0) throw ConfigError("scatter_nodes must be even", 0);
  if (cfg.directions % 2 != 0) throw ConfigError("directions must be even", 0);
}

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& required) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + std::string(key) + "'", line_no);
    if (seen.count(key)) throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
    set_config_value(cfg, key, value, line_no);
    seen.emplace(key);
  }
  for (const auto& key : required)
    if (!seen.count(key)) throw ConfigError("missing required key '" + key + "'", line_no + 1);
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), line_no + 1);
  }
  return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  for (const Field& f : fields()) {
    const std::string v = f.get(cfg);
    if (v.empty()) continue;  // unset paths
    out << f.key << '=' << v << '\n';
  }
  return out.str();
}

}  // namespace instab
