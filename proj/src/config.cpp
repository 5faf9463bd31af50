#include "kinturb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "kinturb/errors.hpp"

namespace kinturb {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& msg) {
  std::string where = "config";
  if (line > 0) where += " line " + std::to_string(line);
  if (!key.empty()) where += ": key '" + key + "'";
  throw ConfigError(where + ": " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    fail(line, key, "malformed number '" + v + "'");
  return x;
}

int parse_int(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || x < INT_MIN || x > INT_MAX)
    fail(line, key, "malformed integer '" + v + "'");
  return static_cast<int>(x);
}

std::vector<int> parse_int_list(const std::string& v, int line,
                                const std::string& key) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_int(item, line, key));
  }
  return out;
}

// "l1:l2,l1:l2,..." velocity node pairs.
std::vector<std::pair<int, int>> parse_band(const std::string& v, int line,
                                            const std::string& key) {
  std::vector<std::pair<int, int>> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      fail(line, key, "expected 'l1:l2' velocity node pair, got '" + item + "'");
    out.emplace_back(parse_int(trim(item.substr(0, colon)), line, key),
                     parse_int(trim(item.substr(colon + 1)), line, key));
  }
  return out;
}

std::array<bool, 4> parse_sides(const std::string& v, int line,
                                const std::string& key) {
  std::array<bool, 4> sides{false, false, false, false};
  for (char c : v) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'L': sides[0] = true; break;
      case 'R': sides[1] = true; break;
      case 'B': sides[2] = true; break;
      case 'T': sides[3] = true; break;
      case ' ': break;
      default: fail(line, key, std::string("unknown side '") + c + "' (use L, R, B, T)");
    }
  }
  return sides;
}

using Setter = std::function<void(Config&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"L1", [](Config& c, const std::string& v, int ln, const std::string& k) { c.L1 = parse_double(v, ln, k); }},
      {"L2", [](Config& c, const std::string& v, int ln, const std::string& k) { c.L2 = parse_double(v, ln, k); }},
      {"M1", [](Config& c, const std::string& v, int ln, const std::string& k) { c.M1 = parse_int(v, ln, k); }},
      {"M2", [](Config& c, const std::string& v, int ln, const std::string& k) { c.M2 = parse_int(v, ln, k); }},
      {"ah1", [](Config& c, const std::string& v, int ln, const std::string& k) { c.ah1 = parse_double(v, ln, k); }},
      {"ah2", [](Config& c, const std::string& v, int ln, const std::string& k) { c.ah2 = parse_double(v, ln, k); }},
      {"MR1", [](Config& c, const std::string& v, int ln, const std::string& k) { c.MR1 = parse_int(v, ln, k); }},
      {"PR1", [](Config& c, const std::string& v, int ln, const std::string& k) { c.PR1 = parse_int(v, ln, k); }},
      {"MR2", [](Config& c, const std::string& v, int ln, const std::string& k) { c.MR2 = parse_int(v, ln, k); }},
      {"PR2", [](Config& c, const std::string& v, int ln, const std::string& k) { c.PR2 = parse_int(v, ln, k); }},
      {"T", [](Config& c, const std::string& v, int ln, const std::string& k) { c.T = parse_double(v, ln, k); }},
      {"N", [](Config& c, const std::string& v, int ln, const std::string& k) { c.N = parse_int(v, ln, k); }},
      {"nu", [](Config& c, const std::string& v, int ln, const std::string& k) { c.nu = parse_double(v, ln, k); }},
      {"kappa", [](Config& c, const std::string& v, int ln, const std::string& k) { c.kappa = parse_double(v, ln, k); }},
      {"eps_div", [](Config& c, const std::string& v, int ln, const std::string& k) { c.eps_div = parse_double(v, ln, k); }},
      {"s",
       [](Config& c, const std::string& v, int ln, const std::string& k) {
         if (v == "auto") {
           c.s = 0.0;
         } else {
           c.s = parse_double(v, ln, k);
           if (!(c.s > 0.0)) fail(ln, k, "must be positive or 'auto'");
         }
       }},
      {"tol_linear", [](Config& c, const std::string& v, int ln, const std::string& k) { c.tol_linear = parse_double(v, ln, k); }},
      {"max_linear_iters", [](Config& c, const std::string& v, int ln, const std::string& k) { c.max_linear_iters = parse_int(v, ln, k); }},
      {"tol_picard", [](Config& c, const std::string& v, int ln, const std::string& k) { c.tol_picard = parse_double(v, ln, k); }},
      {"max_picard_iters", [](Config& c, const std::string& v, int ln, const std::string& k) { c.max_picard_iters = parse_int(v, ln, k); }},
      {"scenario", [](Config& c, const std::string& v, int, const std::string&) { c.scenario = v; }},
      {"uniform_value", [](Config& c, const std::string& v, int ln, const std::string& k) { c.uniform_value = parse_double(v, ln, k); }},
      {"collision_base_height", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.base_height = parse_double(v, ln, k); }},
      {"collision_ramp_rate", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.ramp_rate = parse_double(v, ln, k); }},
      {"collision_sides", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.sides_enabled = parse_sides(v, ln, k); }},
      {"collision_band_left", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.bands[0] = parse_band(v, ln, k); }},
      {"collision_band_right", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.bands[1] = parse_band(v, ln, k); }},
      {"collision_band_bottom", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.bands[2] = parse_band(v, ln, k); }},
      {"collision_band_top", [](Config& c, const std::string& v, int ln, const std::string& k) { c.collision.bands[3] = parse_band(v, ln, k); }},
      {"snapshots", [](Config& c, const std::string& v, int ln, const std::string& k) { c.snapshots = parse_int_list(v, ln, k); }},
      {"snapshot_every", [](Config& c, const std::string& v, int ln, const std::string& k) { c.snapshot_every = parse_int(v, ln, k); }},
      {"output_dir", [](Config& c, const std::string& v, int, const std::string&) { c.output_dir = v; }},
      {"threads", [](Config& c, const std::string& v, int ln, const std::string& k) { c.threads = parse_int(v, ln, k); }},
  };
  return table;
}

void apply_line(Config& cfg, const std::string& key, const std::string& value,
                int line) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) fail(line, key, "unknown key");
  it->second(cfg, value, line, key);
}

void check(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError("config: key '" + key + "': " + msg);
}

}  // namespace

void validate(const Config& cfg) {
  check(cfg.L1 > 0.0, "L1", "must be > 0");
  check(cfg.L2 > 0.0, "L2", "must be > 0");
  check(cfg.M1 >= 1, "M1", "must be >= 1");
  check(cfg.M2 >= 1, "M2", "must be >= 1");
  check(cfg.ah1 > 0.0, "ah1", "must be > 0");
  check(cfg.ah2 > 0.0, "ah2", "must be > 0");
  check(cfg.MR1 >= 0, "MR1", "must be >= 0");
  check(cfg.PR1 >= 0, "PR1", "must be >= 0");
  check(cfg.MR2 >= 0, "MR2", "must be >= 0");
  check(cfg.PR2 >= 0, "PR2", "must be >= 0");
  check(cfg.T > 0.0, "T", "must be > 0");
  check(cfg.N >= 1, "N", "must be >= 1");
  check(cfg.nu >= 0.0, "nu", "must be >= 0");
  check(cfg.kappa >= 0.0, "kappa", "must be >= 0");
  check(cfg.eps_div > 0.0, "eps_div", "must be > 0");
  check(cfg.s >= 0.0, "s", "must be positive or 'auto'");
  check(cfg.tol_linear > 0.0, "tol_linear", "must be > 0");
  check(cfg.max_linear_iters >= 1, "max_linear_iters", "must be >= 1");
  check(cfg.tol_picard > 0.0, "tol_picard", "must be > 0");
  check(cfg.max_picard_iters >= 1, "max_picard_iters", "must be >= 1");
  check(cfg.scenario == "collision" || cfg.scenario == "zero" ||
            cfg.scenario == "uniform",
        "scenario", "must be one of: collision, zero, uniform");
  check(cfg.snapshot_every >= 0, "snapshot_every", "must be >= 0");
  for (int s : cfg.snapshots)
    check(s >= 0 && s <= cfg.N, "snapshots",
          "step " + std::to_string(s) + " outside [0, N]");
  check(cfg.threads >= 0, "threads", "must be >= 0 (0 = all available)");
  check(cfg.collision.base_height >= 0.0, "collision_base_height", "must be >= 0");
  check(cfg.collision.ramp_rate >= 0.0, "collision_ramp_rate", "must be >= 0");

  // Grid/scenario consistency: constructing the pieces surfaces the rest.
  const SpaceGrid sg = space_grid(cfg);
  const VelocityGrid vg = velocity_grid(cfg);
  if (cfg.scenario == "collision") collision_boundary(cfg.collision, sg, vg);
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(line, "", "expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "", "missing key before '='");
    apply_line(cfg, key, value, line);
  }
  validate(cfg);
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void config_set(Config& cfg, const std::string& key, const std::string& value) {
  apply_line(cfg, trim(key), trim(value), 0);
  validate(cfg);
}

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string describe(const Config& cfg) {
  const SpaceGrid sg = space_grid(cfg);
  const VelocityGrid vg = velocity_grid(cfg);
  const TimeGrid tg = time_grid(cfg);
  const CoefficientSet cs = CoefficientSet::build(sg, vg, tg.tau, cfg.nu);
  const double nor = nor_bound(cs);

  std::ostringstream out;
  out << "# resolved configuration\n";
  out << "L1 = " << g17(cfg.L1) << "\n";
  out << "L2 = " << g17(cfg.L2) << "\n";
  out << "M1 = " << cfg.M1 << "\n";
  out << "M2 = " << cfg.M2 << "\n";
  out << "ah1 = " << g17(cfg.ah1) << "\n";
  out << "ah2 = " << g17(cfg.ah2) << "\n";
  out << "MR1 = " << cfg.MR1 << "\n";
  out << "PR1 = " << cfg.PR1 << "\n";
  out << "MR2 = " << cfg.MR2 << "\n";
  out << "PR2 = " << cfg.PR2 << "\n";
  out << "T = " << g17(cfg.T) << "\n";
  out << "N = " << cfg.N << "\n";
  out << "nu = " << g17(cfg.nu) << "\n";
  out << "kappa = " << g17(cfg.kappa) << "\n";
  out << "eps_div = " << g17(cfg.eps_div) << "\n";
  out << "s = " << (cfg.s > 0.0 ? g17(cfg.s) : std::string("auto")) << "\n";
  out << "tol_linear = " << g17(cfg.tol_linear) << "\n";
  out << "max_linear_iters = " << cfg.max_linear_iters << "\n";
  out << "tol_picard = " << g17(cfg.tol_picard) << "\n";
  out << "max_picard_iters = " << cfg.max_picard_iters << "\n";
  out << "scenario = " << cfg.scenario << "\n";
  if (cfg.scenario == "uniform")
    out << "uniform_value = " << g17(cfg.uniform_value) << "\n";
  if (cfg.scenario == "collision") {
    out << "collision_base_height = " << g17(cfg.collision.base_height) << "\n";
    out << "collision_ramp_rate = " << g17(cfg.collision.ramp_rate) << "\n";
    std::string sides;
    const char* names = "LRBT";
    for (int i = 0; i < 4; ++i)
      if (cfg.collision.sides_enabled[static_cast<size_t>(i)]) sides += names[i];
    out << "collision_sides = " << sides << "\n";
    for (int i = 0; i < 4; ++i) {
      static const char* keys[4] = {"collision_band_left", "collision_band_right",
                                    "collision_band_bottom", "collision_band_top"};
      if (!cfg.collision.sides_enabled[static_cast<size_t>(i)]) continue;
      auto band = cfg.collision.bands[static_cast<size_t>(i)];
      if (band.empty()) band = default_band(static_cast<Side>(i), vg);
      out << keys[i] << " =";
      for (size_t b = 0; b < band.size(); ++b)
        out << (b ? "," : " ") << band[b].first << ":" << band[b].second;
      out << "\n";
    }
  }
  out << "snapshots =";
  {
    const auto steps = snapshot_steps(cfg);
    for (size_t i = 0; i < steps.size(); ++i) out << (i ? "," : " ") << steps[i];
  }
  out << "\n";
  out << "output_dir = " << cfg.output_dir << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "# derived quantities\n";
  out << "h1 = " << g17(sg.h1) << "\n";
  out << "h2 = " << g17(sg.h2) << "\n";
  out << "D1 = " << g17(vg.D1()) << "\n";
  out << "G1 = " << g17(vg.G1()) << "\n";
  out << "D2 = " << g17(vg.D2()) << "\n";
  out << "G2 = " << g17(vg.G2()) << "\n";
  out << "velocity_nodes = " << vg.count() << "\n";
  out << "unknowns = " << static_cast<long>(vg.count()) * sg.M1 * sg.M2 << "\n";
  out << "tau = " << g17(tg.tau) << "\n";
  out << "lambda1 = " << g17(cs[0].lambda1) << "\n";
  out << "lambda2 = " << g17(cs[0].lambda2) << "\n";
  out << "mu1 = " << g17(cs[0].mu1) << "\n";
  out << "mu2 = " << g17(cs[0].mu2) << "\n";
  out << "d = " << g17(cs.d()) << "\n";
  out << "d1 = " << g17(cs[0].d1) << "\n";
  out << "s_opt = " << g17(optimal_s(cs)) << "\n";
  out << "NOR = " << g17(nor) << "\n";
  return out.str();
}

std::uint64_t config_hash(const Config& cfg) {
  const std::string text = describe(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SpaceGrid space_grid(const Config& cfg) {
  return build_space_grid(cfg.L1, cfg.L2, cfg.M1, cfg.M2);
}

VelocityGrid velocity_grid(const Config& cfg) {
  return build_velocity_grid(cfg.ah1, cfg.ah2, cfg.MR1, cfg.PR1, cfg.MR2, cfg.PR2);
}

TimeGrid time_grid(const Config& cfg) { return build_time_grid(cfg.T, cfg.N); }

SolverSettings solver_settings(const Config& cfg) {
  SolverSettings st;
  st.s = cfg.s;
  st.tol_linear = cfg.tol_linear;
  st.max_linear_iters = cfg.max_linear_iters;
  st.tol_picard = cfg.tol_picard;
  st.max_picard_iters = cfg.max_picard_iters;
  return st;
}

BoundaryData boundary_data(const Config& cfg, const SpaceGrid& sg,
                           const VelocityGrid& vg) {
  BoundaryData bd;
  if (cfg.scenario == "collision") bd = collision_boundary(cfg.collision, sg, vg);
  bd.max_level = cfg.N;
  return bd;
}

DensityField initial_field(const Config& cfg, const SpaceGrid& sg,
                           const VelocityGrid& vg) {
  if (cfg.scenario == "uniform") return uniform_initial(sg, vg, cfg.uniform_value);
  return empty_initial(sg, vg);
}

std::vector<int> snapshot_steps(const Config& cfg) {
  std::set<int> steps(cfg.snapshots.begin(), cfg.snapshots.end());
  if (cfg.snapshot_every > 0) {
    for (int s = 0; s <= cfg.N; s += cfg.snapshot_every) steps.insert(s);
    steps.insert(cfg.N);
  }
  return {steps.begin(), steps.end()};
}

Problem build_problem(const Config& cfg) {
  Problem p;
  p.sg = space_grid(cfg);
  p.vg = velocity_grid(cfg);
  p.weights = trapezoid_weights(p.vg);
  p.coeffs = CoefficientSet::build(p.sg, p.vg, time_grid(cfg).tau, cfg.nu);
  p.boundary = boundary_data(cfg, p.sg, p.vg);
  p.kappa = cfg.kappa;
  p.tau = time_grid(cfg).tau;
  p.settings = solver_settings(cfg);
  p.threads = cfg.threads;
  return p;
}

}  // namespace kinturb
