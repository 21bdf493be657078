#include "radns/config.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>
#include <vector>

#include "radns/radiation.hpp"

namespace radns {

ConfigError::ConfigError(const std::string& message, std::string key, std::size_t line)
    : std::runtime_error(message), key_(std::move(key)), line_(line) {}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using Json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Location {
  std::string origin;
  std::size_t line = 0;
  std::string key;  // section.key

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + key + ": " + what, key, line);
  }
};

double parse_double(std::string_view text, const Location& at) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    at.fail("expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view text, const Location& at) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    at.fail("expected a nonnegative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, const Location& at) {
  if (text == "true") return true;
  if (text == "false") return false;
  at.fail("expected true or false, got '" + std::string(text) + "'");
}

struct KeySpec {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, std::string_view, const Location&)> set;
  std::function<Json(const RunConfig&)> get;
};

template <typename Member>
KeySpec number_key(std::string section, std::string key, Member member) {
  return KeySpec{std::move(section), std::move(key),
                 [member](RunConfig& c, std::string_view v, const Location& at) {
                   member(c) = parse_double(v, at);
                 },
                 [member](const RunConfig& c) { return Json(member(c)); }};
}

template <typename Member>
KeySpec count_key(std::string section, std::string key, Member member) {
  return KeySpec{std::move(section), std::move(key),
                 [member](RunConfig& c, std::string_view v, const Location& at) {
                   using T = std::remove_reference_t<decltype(member(c))>;
                   member(c) = static_cast<T>(parse_unsigned(v, at));
                 },
                 [member](const RunConfig& c) { return Json(member(c)); }};
}

template <typename Member>
KeySpec bool_key(std::string section, std::string key, Member member) {
  return KeySpec{std::move(section), std::move(key),
                 [member](RunConfig& c, std::string_view v, const Location& at) {
                   member(c) = parse_bool(v, at);
                 },
                 [member](const RunConfig& c) { return Json(member(c)); }};
}

template <typename Member>
KeySpec string_key(std::string section, std::string key, Member member) {
  return KeySpec{std::move(section), std::move(key),
                 [member](RunConfig& c, std::string_view v, const Location&) {
                   member(c) = std::string(v);
                 },
                 [member](const RunConfig& c) { return Json(member(c)); }};
}

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = {
      number_key("physics", "mu", [](auto& c) -> auto& { return c.params.mu; }),
      number_key("physics", "kappa1", [](auto& c) -> auto& { return c.params.kappa1; }),
      number_key("physics", "kappa2", [](auto& c) -> auto& { return c.params.kappa2; }),
      number_key("physics", "beta", [](auto& c) -> auto& { return c.params.beta; }),
      number_key("physics", "R", [](auto& c) -> auto& { return c.params.R; }),
      number_key("physics", "gamma", [](auto& c) -> auto& { return c.params.gamma; }),
      number_key("physics", "a", [](auto& c) -> auto& { return c.params.a; }),
      number_key("physics", "b", [](auto& c) -> auto& { return c.params.b; }),
      count_key("grid", "n_cells", [](auto& c) -> auto& { return c.n_cells; }),
      number_key("time", "t_end", [](auto& c) -> auto& { return c.t_end; }),
      number_key("time", "dt_init", [](auto& c) -> auto& { return c.control.dt_init; }),
      number_key("time", "dt_min", [](auto& c) -> auto& { return c.control.dt_min; }),
      number_key("time", "dt_max", [](auto& c) -> auto& { return c.control.dt_max; }),
      number_key("time", "cfl_advective",
                 [](auto& c) -> auto& { return c.control.cfl_advective; }),
      count_key("time", "picard_iters", [](auto& c) -> auto& { return c.control.picard_iters; }),
      number_key("time", "picard_tol", [](auto& c) -> auto& { return c.control.picard_tol; }),
      number_key("time", "positivity_shrink",
                 [](auto& c) -> auto& { return c.control.positivity_shrink; }),
      count_key("time", "max_steps", [](auto& c) -> auto& { return c.max_steps; }),
      string_key("initial", "preset", [](auto& c) -> auto& { return c.initial.preset; }),
      number_key("initial", "alpha_v", [](auto& c) -> auto& { return c.initial.alpha_v; }),
      number_key("initial", "alpha_u", [](auto& c) -> auto& { return c.initial.alpha_u; }),
      number_key("initial", "alpha_theta",
                 [](auto& c) -> auto& { return c.initial.alpha_theta; }),
      number_key("initial", "alpha2_v", [](auto& c) -> auto& { return c.initial.alpha2_v; }),
      number_key("initial", "alpha2_u", [](auto& c) -> auto& { return c.initial.alpha2_u; }),
      number_key("initial", "alpha2_theta",
                 [](auto& c) -> auto& { return c.initial.alpha2_theta; }),
      number_key("initial", "amplitude",
                 [](auto& c) -> auto& { return c.initial.amplitude; }),
      count_key("initial", "seed", [](auto& c) -> auto& { return c.initial.seed; }),
      string_key("initial", "table", [](auto& c) -> auto& { return c.initial.table; }),
      string_key("output", "directory", [](auto& c) -> auto& { return c.output_dir; }),
      count_key("output", "cadence", [](auto& c) -> auto& { return c.cadence; }),
      count_key("output", "checkpoint_interval",
                [](auto& c) -> auto& { return c.checkpoint_interval; }),
      bool_key("output", "snapshots", [](auto& c) -> auto& { return c.write_snapshots; }),
      bool_key("audits", "entropy", [](auto& c) -> auto& { return c.audits.entropy; }),
      bool_key("audits", "representation",
               [](auto& c) -> auto& { return c.audits.representation; }),
      bool_key("audits", "pointwise", [](auto& c) -> auto& { return c.audits.pointwise; }),
      bool_key("audits", "aux", [](auto& c) -> auto& { return c.audits.aux; }),
      bool_key("audits", "exponents", [](auto& c) -> auto& { return c.audits.exponents; }),
      number_key("audits", "entropy_tol",
                 [](auto& c) -> auto& { return c.audits.entropy_tol; }),
      number_key("audits", "representation_tol",
                 [](auto& c) -> auto& { return c.audits.representation_tol; }),
  };
  return keys;
}

// Common misspellings and synonyms, mapped to the real key name.
const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> table = {
      {"viscosity", "mu"},       {"viscocity", "mu"},         {"visc", "mu"},
      {"kappa", "kappa1"},       {"conductivity", "kappa1"},  {"gas_constant", "R"},
      {"r", "R"},                {"adiabatic_index", "gamma"}, {"absorption", "a"},
      {"stefan_boltzmann", "b"}, {"n", "n_cells"},            {"cells", "n_cells"},
      {"ncells", "n_cells"},     {"N", "n_cells"},            {"dt", "dt_init"},
      {"tend", "t_end"},         {"t_final", "t_end"},        {"cfl", "cfl_advective"},
      {"out", "directory"},      {"dir", "directory"},        {"every", "cadence"},
      {"snapshot_cadence", "cadence"}, {"alpha", "alpha_v"},  {"random_seed", "seed"},
  };
  return table;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string suggest(const std::string& key) {
  if (auto it = aliases().find(key); it != aliases().end()) return it->second;
  std::string best;
  std::size_t best_d = std::max<std::size_t>(2, key.size() / 3) + 1;
  for (const KeySpec& k : registry()) {
    const std::size_t d = edit_distance(key, k.key);
    if (d < best_d) {
      best_d = d;
      best = k.key;
    }
  }
  return best;
}

using LineMap = std::map<std::string, std::size_t>;

[[noreturn]] void invalid(const std::string& key, const std::string& what, const LineMap* lines,
                          const std::string& origin) {
  std::size_t line = 0;
  if (lines != nullptr) {
    if (auto it = lines->find(key); it != lines->end()) line = it->second;
  }
  std::string where = origin.empty() ? std::string() : origin + ":";
  if (line > 0) where += std::to_string(line) + ":";
  throw ConfigError((where.empty() ? "" : where + " ") + key + ": " + what, key, line);
}

const std::vector<std::string>& presets() {
  static const std::vector<std::string> names = {"equilibrium", "single_mode", "two_mode",
                                                 "random_smooth", "table"};
  return names;
}

void validate_config(const RunConfig& c, const LineMap* lines, const std::string& origin) {
  auto positive = [&](double x, const char* key) {
    if (!(x > 0.0)) invalid(key, "must be positive", lines, origin);
  };
  positive(c.params.mu, "physics.mu");
  positive(c.params.kappa1, "physics.kappa1");
  positive(c.params.kappa2, "physics.kappa2");
  positive(c.params.beta, "physics.beta");
  positive(c.params.R, "physics.R");
  positive(c.params.a, "physics.a");
  positive(c.params.b, "physics.b");
  if (!(c.params.gamma > 1.0)) invalid("physics.gamma", "must exceed 1", lines, origin);
  if (c.n_cells < Grid::kMinCells) invalid("grid.n_cells", "must be at least 8", lines, origin);
  positive(c.t_end, "time.t_end");
  positive(c.control.dt_min, "time.dt_min");
  positive(c.control.dt_init, "time.dt_init");
  positive(c.control.dt_max, "time.dt_max");
  if (!(c.control.dt_min <= c.control.dt_init && c.control.dt_init <= c.control.dt_max)) {
    invalid("time.dt_init", "requires dt_min <= dt_init <= dt_max", lines, origin);
  }
  if (!(c.control.cfl_advective > 0.0 && c.control.cfl_advective <= 1.0)) {
    invalid("time.cfl_advective", "must lie in (0, 1]", lines, origin);
  }
  positive(c.control.picard_tol, "time.picard_tol");
  if (!(c.control.positivity_shrink > 0.0 && c.control.positivity_shrink < 1.0)) {
    invalid("time.positivity_shrink", "must lie in (0, 1)", lines, origin);
  }
  if (c.max_steps == 0) invalid("time.max_steps", "must be positive", lines, origin);
  if (c.cadence < 1) invalid("output.cadence", "must be at least 1", lines, origin);
  if (c.output_dir.empty()) invalid("output.directory", "must not be empty", lines, origin);
  positive(c.audits.entropy_tol, "audits.entropy_tol");
  positive(c.audits.representation_tol, "audits.representation_tol");
  if (std::find(presets().begin(), presets().end(), c.initial.preset) == presets().end()) {
    invalid("initial.preset", "unknown preset '" + c.initial.preset + "'", lines, origin);
  }
  if (c.initial.preset == "table" && c.initial.table.empty()) {
    invalid("initial.table", "preset 'table' needs a table path", lines, origin);
  }
  try {
    (void)make_initial_data(c.initial, Grid(c.n_cells), c.params, c.base_dir);
  } catch (const ConfigError& e) {
    invalid(e.key(), e.what(), lines, origin);
  }
}

}  // namespace

void RunConfig::validate() const { validate_config(*this, nullptr, {}); }

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::filesystem::path& base_dir) {
  RunConfig config;
  config.base_dir = base_dir;
  LineMap lines;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  static const std::vector<std::string> sections = {"physics", "grid",   "time",
                                                    "initial", "output", "audits"};
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    Location at{origin, line_no, {}};
    if (line.front() == '[') {
      if (line.back() != ']') at.fail("malformed section header '" + line + "'");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
        at.key = section;
        at.fail("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected 'key = value', got '" + line + "'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
    at.key = section.empty() ? key : section + "." + key;
    if (section.empty()) at.fail("key outside of any section");
    if (key.empty()) at.fail("empty key");
    const auto spec = std::find_if(registry().begin(), registry().end(), [&](const KeySpec& k) {
      return k.section == section && k.key == key;
    });
    if (spec == registry().end()) {
      std::string message = "unknown key '" + key + "' in [" + section + "]";
      if (const std::string s = suggest(key); !s.empty()) message += "; did you mean '" + s + "'?";
      at.fail(message);
    }
    if (lines.count(at.key) != 0) at.fail("duplicate key (first set on line " + std::to_string(lines[at.key]) + ")");
    if (value.empty()) at.fail("missing value");
    spec->set(config, value, at);
    lines[at.key] = line_no;
  }
  validate_config(config, &lines, origin);
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string(), path.parent_path());
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  Json out = Json::object();
  for (const KeySpec& k : registry()) out[k.section][k.key] = k.get(config);
  return out;
}

namespace {

class HashStream {
 public:
  void add(double x) { add_u64(std::bit_cast<std::uint64_t>(x)); }
  void add_u64(std::uint64_t x) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(x >> (8 * i));
    h_ = fnv1a(bytes, 8, h_);
  }
  void add(const std::string& s) {
    add_u64(s.size());
    h_ = fnv1a(s.data(), s.size(), h_);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path resolve(const std::string& table, const std::filesystem::path& base) {
  const std::filesystem::path p(table);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

std::uint64_t config_hash(const RunConfig& c) {
  HashStream h;
  h.add(std::string("radns-config-v1"));
  for (double x : {c.params.mu, c.params.kappa1, c.params.kappa2, c.params.beta, c.params.R,
                   c.params.gamma, c.params.a, c.params.b}) {
    h.add(x);
  }
  h.add_u64(c.n_cells);
  for (double x : {c.control.dt_init, c.control.dt_min, c.control.dt_max, c.control.cfl_advective,
                   c.control.picard_tol, c.control.positivity_shrink}) {
    h.add(x);
  }
  h.add_u64(static_cast<std::uint64_t>(c.control.picard_iters));
  h.add(c.initial.preset);
  for (double x : {c.initial.alpha_v, c.initial.alpha_u, c.initial.alpha_theta, c.initial.alpha2_v,
                   c.initial.alpha2_u, c.initial.alpha2_theta, c.initial.amplitude}) {
    h.add(x);
  }
  h.add_u64(c.initial.seed);
  if (c.initial.preset == "table") h.add(read_file(resolve(c.initial.table, c.base_dir)));
  h.add_u64(c.cadence);
  return h.value();
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform in [-1, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
double symmetric_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

Field band_limited(const Grid& grid, std::mt19937_64& rng, double amplitude) {
  constexpr int kModes = 4;
  double cos_c[kModes], sin_c[kModes];
  for (int k = 0; k < kModes; ++k) {
    cos_c[k] = symmetric_uniform(rng);
    sin_c[k] = symmetric_uniform(rng);
  }
  return sample(grid, [&](double x) {
    double s = 0.0;
    for (int k = 0; k < kModes; ++k) {
      const double w = kTwoPi * (k + 1) * x;
      s += cos_c[k] * std::cos(w) + sin_c[k] * std::sin(w);
    }
    return amplitude * s / kModes;
  });
}

State read_table(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read initial-data table " + path.string(), "initial.table");
  std::string line;
  std::getline(in, line);
  std::string header = line;
  header.erase(std::remove_if(header.begin(), header.end(), [](char ch) { return ch == ' ' || ch == '\r'; }),
               header.end());
  if (header != "x,v,u,theta") {
    throw ConfigError("initial-data table must start with the header x,v,u,theta", "initial.table");
  }
  State s;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    double vals[4];
    std::istringstream fields(line);
    std::string cell;
    for (int k = 0; k < 4; ++k) {
      if (!std::getline(fields, cell, ',')) {
        throw ConfigError("initial-data table row " + std::to_string(row + 1) + " has fewer than 4 columns",
                          "initial.table");
      }
      Location at{path.string(), row + 2, "initial.table"};
      vals[k] = parse_double(trim(cell), at);
    }
    if (row >= grid.size()) break;
    if (std::abs(vals[0] - grid.center(row)) > 1e-9) {
      throw ConfigError("initial-data table row " + std::to_string(row + 1) +
                            " is not at the cell centre of the configured grid",
                        "initial.table");
    }
    s.v.push_back(vals[1]);
    s.u.push_back(vals[2]);
    s.theta.push_back(vals[3]);
    ++row;
  }
  if (s.v.size() != grid.size() || row != grid.size()) {
    throw ConfigError("initial-data table must have exactly n_cells rows", "initial.table");
  }
  return s;
}

}  // namespace

State make_initial_data(const InitialSpec& spec, const Grid& grid, const Params& params,
                        const std::filesystem::path& base_dir) {
  State s;
  std::string v_key, theta_key;
  if (spec.preset == "equilibrium") {
    s = constant_state(grid.size(), 1.0, 0.0, 1.0);
  } else if (spec.preset == "single_mode" || spec.preset == "two_mode") {
    const bool two = spec.preset == "two_mode";
    const double a2v = two ? spec.alpha2_v : 0.0;
    const double a2u = two ? spec.alpha2_u : 0.0;
    const double a2t = two ? spec.alpha2_theta : 0.0;
    s.v = sample(grid, [&](double x) {
      return 1.0 + spec.alpha_v * std::sin(kTwoPi * x) + a2v * std::sin(2.0 * kTwoPi * x);
    });
    s.u = sample(grid, [&](double x) {
      return spec.alpha_u * std::sin(kTwoPi * x) + a2u * std::sin(2.0 * kTwoPi * x);
    });
    s.theta = sample(grid, [&](double x) {
      return 1.0 + spec.alpha_theta * std::cos(kTwoPi * x) + a2t * std::cos(2.0 * kTwoPi * x);
    });
    v_key = two ? "initial.alpha_v, initial.alpha2_v" : "initial.alpha_v";
    theta_key = two ? "initial.alpha_theta, initial.alpha2_theta" : "initial.alpha_theta";
  } else if (spec.preset == "random_smooth") {
    std::mt19937_64 rng(spec.seed);
    s.v = band_limited(grid, rng, spec.amplitude);
    s.u = band_limited(grid, rng, spec.amplitude);
    s.theta = band_limited(grid, rng, spec.amplitude);
    for (double& x : s.v) x += 1.0;
    for (double& x : s.theta) x += 1.0;
    v_key = theta_key = "initial.amplitude";
  } else if (spec.preset == "table") {
    s = read_table(resolve(spec.table, base_dir), grid);
    v_key = theta_key = "initial.table";
  } else {
    throw ConfigError("unknown preset '" + spec.preset + "'", "initial.preset");
  }

  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(s.v[j] > 0.0)) {
      throw ConfigError("initial specific volume is not positive (cell " + std::to_string(j) + ")",
                        v_key);
    }
  }
  const double mass = quadrature(s.v, grid);
  for (double& x : s.v) x /= mass;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(s.v[j] > 0.0)) {
      throw ConfigError("renormalised specific volume is not positive (cell " + std::to_string(j) + ")",
                        v_key);
    }
    if (!(s.theta[j] > 0.0)) {
      throw ConfigError("initial temperature is not positive (cell " + std::to_string(j) + ")",
                        theta_key);
    }
  }
  s.t = 0.0;
  s.q = init_compatible_q(s.v, s.theta, grid, params);
  return s;
}

std::string config_to_ini(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const KeySpec& k : registry()) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    const Json value = k.get(config);
    if (value.is_string() && value.get<std::string>().empty()) continue;
    out << k.key << " = ";
    if (value.is_string()) {
      std::string text = value.get<std::string>();
      if (k.key == "table" && !text.empty()) {
        text = std::filesystem::absolute(resolve(text, config.base_dir)).lexically_normal().string();
      }
      out << text;
    } else if (value.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
      out << buf;
    } else {
      out << value.dump();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace radns
