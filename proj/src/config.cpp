#include "bfsi/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "bfsi/operators.hpp"
#include "bfsi/pressure.hpp"

namespace bfsi {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"domain", {"L", "Nx", "Ny_f", "Ny_s"}},
      {"params", {"epsilon", "mu", "k1", "k2", "e_dir"}},
      {"scheme", {"dt", "T_end", "adv_scheme", "diffusion_theta"}},
      {"initial", {"u0_x", "u0_y", "rho0", "w0_x", "w0_y", "w1_x", "w1_y", "theta0"}},
      {"forcing", {"f1_x", "f1_y", "f2", "f3_x", "f3_y", "f4"}},
      {"output", {"directory", "snapshot_every", "series_every", "seed"}}};
  return s;
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    std::string raw, current;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string s = trim(raw);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "malformed section header");
        current = trim(s.substr(1, s.size() - 2));
        if (!schema().count(current)) fail(line, "unknown section [" + current + "]");
        sections_[current];
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected key = value");
      if (current.empty()) fail(line, "key outside of any section");
      const std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      const auto& keys = schema().at(current);
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        fail(line, "unknown key '" + key + "' in [" + current + "]");
      if (sections_[current].count(key)) fail(line, "duplicate key '" + key + "' in [" + current + "]");
      sections_[current][key] = {value, line, false};
    }
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
  }

  const Entry* find(const std::string& sec, const std::string& key) {
    auto s = sections_.find(sec);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    if (e == s->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  const Entry& get(const std::string& sec, const std::string& key) {
    const Entry* e = find(sec, key);
    if (!e) throw ConfigError(source_ + ": missing key [" + sec + "]." + key);
    return *e;
  }

  double number(const Entry& e, const std::string& key) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (trim(e.value.substr(pos)).empty() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    fail(e.line, "'" + key + "' must be a finite number");
  }

  long long integer(const Entry& e, const std::string& key) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(e.value, &pos);
      if (trim(e.value.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    fail(e.line, "'" + key + "' must be an integer");
  }

  double num(const std::string& sec, const std::string& key) { return number(get(sec, key), key); }
  int int_(const std::string& sec, const std::string& key) {
    const Entry& e = get(sec, key);
    const long long v = integer(e, key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(e.line, key + " is out of range");
    return static_cast<int>(v);
  }

  ExprSource expr(const std::string& sec, const std::string& key) {
    const Entry& e = get(sec, key);
    try {
      return {e.value, parse_expression(e.value)};
    } catch (const ParseError& err) {
      fail(e.line, "[" + sec + "]." + key + ": " + err.what());
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Section> sections_;
};

// Samples an expression on a region's nodes at time t.
ScalarField sample_expr(const ExprAst& e, const Grid& g, Region r, double t) {
  const double L = g.spec.L;
  return sample(g, r, [&](double x, double y) { return e.eval({x, y, t, L}); });
}

void require_finite(const ExprSource& e, const std::string& name, const Grid& g, Region r, double t) {
  if (!sample_expr(e.ast, g, r, t).all_finite())
    throw ConfigError("expression " + name + " = \"" + e.text + "\" is not finite on the grid at t = " +
                      std::to_string(t));
}

double max_on_rows(const ScalarField& f, const std::array<int, 2>& rows) {
  double m = 0.0;
  for (int r : rows)
    for (int i = 0; i < f.nx; ++i) m = std::max(m, std::abs(f(i, r)));
  return m;
}

VectorField sample_vec(const ExprSource (&e)[2], const Grid& g, Region r, double t) {
  VectorField v;
  v.c[0] = sample_expr(e[0].ast, g, r, t);
  v.c[1] = sample_expr(e[1].ast, g, r, t);
  return v;
}

void validate_data(Config& cfg) {
  const Grid g = build_grid(cfg.domain);
  const auto& in = cfg.initial;
  const auto& fo = cfg.forcing;
  const std::pair<const ExprSource*, const char*> initial[] = {
      {&in.u0[0], "u0_x"}, {&in.u0[1], "u0_y"}, {&in.rho0, "rho0"}, {&in.w0[0], "w0_x"},
      {&in.w0[1], "w0_y"}, {&in.w1[0], "w1_x"}, {&in.w1[1], "w1_y"}, {&in.theta0, "theta0"}};
  for (const auto& [e, name] : initial) require_finite(*e, name, g, Region::Whole, 0.0);
  const std::pair<const ExprSource*, const char*> forcing[] = {{&fo.f1[0], "f1_x"}, {&fo.f1[1], "f1_y"},
                                                               {&fo.f2, "f2"},       {&fo.f3[0], "f3_x"},
                                                               {&fo.f3[1], "f3_y"},  {&fo.f4, "f4"}};
  for (const auto& [e, name] : forcing)
    for (double t : {0.0, cfg.scheme.T_end}) require_finite(*e, name, g, Region::Whole, t);

  const VectorField w0 = sample_vec(in.w0, g, Region::Solid, 0.0);
  const VectorField w1 = sample_vec(in.w1, g, Region::Solid, 0.0);
  const std::array<int, 2> outer = {0, g.solid_rows() - 1};
  for (int c = 0; c < 2; ++c) {
    if (max_on_rows(w0.c[c], outer) > 1e-12 * std::max(1.0, w0.max_abs()))
      throw ConfigError("validation: w0 must vanish on the outer lines");
    if (max_on_rows(w1.c[c], outer) > 1e-12 * std::max(1.0, w1.max_abs()))
      throw ConfigError("validation: w1 must vanish on the outer lines (the displacement is clamped there)");
  }

  // Continuity of v₀ and d₀ across the interface.
  const VectorField u0 = sample_vec(in.u0, g, Region::Fluid, 0.0);
  const ScalarField rho0 = sample_expr(in.rho0.ast, g, Region::Fluid, 0.0);
  const ScalarField th0 = sample_expr(in.theta0.ast, g, Region::Solid, 0.0);
  const int fl[2] = {0, g.spec.Ny_f};
  const int sl[2] = {g.spec.Ny_s, g.spec.Ny_s + 1};
  const double vs = std::max({1.0, u0.max_abs(), w1.max_abs()});
  const double ds = std::max({1.0, rho0.max_abs(), th0.max_abs()});
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < g.nx(); ++i) {
      for (int c = 0; c < 2; ++c)
        if (std::abs(u0.c[c](i, fl[s]) - w1.c[c](i, sl[s])) > 1e-10 * vs)
          throw ConfigError("validation: u0 and w1 must agree on the interface");
      if (std::abs(rho0(i, fl[s]) - th0(i, sl[s])) > 1e-10 * ds)
        throw ConfigError("validation: rho0 and theta0 must agree on the interface");
    }

  double correction = 0.0;
  const State s = build_initial_state(cfg, g, &correction);
  const VectorField u = restrict_to(s.v, Region::Fluid, g);
  const double div = divergence(u, g).max_abs();
  if (div > 1e-10 * std::max(1.0, u.max_abs()))
    throw ConfigError("validation: initial velocity is not divergence-free after projection (" + std::to_string(div) +
                      ")");
  cfg.projection_correction = correction;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& source) {
  Reader rd(text, source);
  Config cfg;
  cfg.domain.L = rd.num("domain", "L");
  cfg.domain.Nx = rd.int_("domain", "Nx");
  cfg.domain.Ny_f = rd.int_("domain", "Ny_f");
  cfg.domain.Ny_s = rd.int_("domain", "Ny_s");

  cfg.params.epsilon = rd.num("params", "epsilon");
  cfg.params.mu = rd.num("params", "mu");
  cfg.params.k1 = rd.num("params", "k1");
  cfg.params.k2 = rd.num("params", "k2");
  cfg.params.L = cfg.domain.L;
  if (const Entry* e = rd.find("params", "e_dir")) {
    const auto comma = e->value.find(',');
    if (comma == std::string::npos) rd.fail(e->line, "e_dir needs two comma-separated components");
    cfg.params.e_dir.a = rd.number({trim(e->value.substr(0, comma)), e->line, true}, "e_dir");
    cfg.params.e_dir.b = rd.number({trim(e->value.substr(comma + 1)), e->line, true}, "e_dir");
  }

  cfg.scheme.dt = rd.num("scheme", "dt");
  cfg.scheme.T_end = rd.num("scheme", "T_end");
  if (const Entry* e = rd.find("scheme", "adv_scheme")) {
    if (e->value == "AB2")
      cfg.scheme.adv_scheme = AdvScheme::AB2;
    else if (e->value == "RK2")
      cfg.scheme.adv_scheme = AdvScheme::RK2;
    else
      rd.fail(e->line, "adv_scheme must be AB2 or RK2");
  }
  if (const Entry* e = rd.find("scheme", "diffusion_theta")) cfg.scheme.diffusion_theta = rd.number(*e, "diffusion_theta");

  auto& in = cfg.initial;
  in.u0[0] = rd.expr("initial", "u0_x");
  in.u0[1] = rd.expr("initial", "u0_y");
  in.rho0 = rd.expr("initial", "rho0");
  in.w0[0] = rd.expr("initial", "w0_x");
  in.w0[1] = rd.expr("initial", "w0_y");
  in.w1[0] = rd.expr("initial", "w1_x");
  in.w1[1] = rd.expr("initial", "w1_y");
  in.theta0 = rd.expr("initial", "theta0");
  auto& fo = cfg.forcing;
  fo.f1[0] = rd.expr("forcing", "f1_x");
  fo.f1[1] = rd.expr("forcing", "f1_y");
  fo.f2 = rd.expr("forcing", "f2");
  fo.f3[0] = rd.expr("forcing", "f3_x");
  fo.f3[1] = rd.expr("forcing", "f3_y");
  fo.f4 = rd.expr("forcing", "f4");

  cfg.output.directory = rd.get("output", "directory").value;
  cfg.output.snapshot_every = rd.int_("output", "snapshot_every");
  cfg.output.series_every = rd.int_("output", "series_every");
  if (cfg.output.snapshot_every < 0) rd.fail(rd.get("output", "snapshot_every").line, "snapshot_every must be >= 0");
  if (cfg.output.series_every < 1) rd.fail(rd.get("output", "series_every").line, "series_every must be >= 1");
  if (const Entry* e = rd.find("output", "seed")) {
    const long long s = rd.integer(*e, "seed");
    if (s < 0) rd.fail(e->line, "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  try {
    build_grid(cfg.domain);
    cfg.params.validate();
    cfg.scheme.validate();
  } catch (const std::exception& e) {
    throw ConfigError(source + ": validation: " + e.what());
  }
  try {
    validate_data(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

State build_initial_state(const Config& cfg, const Grid& g, double* correction) {
  State s = exact_state(cfg, g, 0.0);
  const std::array<int, 2> outer = {0, g.solid_rows() - 1};
  for (int c = 0; c < 2; ++c) {
    for (int r : outer) std::fill_n(s.w.c[c].row(r), g.nx(), 0.0);
    for (int r : g.gamma_out_rows) std::fill_n(s.v.c[c].row(r), g.nx(), 0.0);
  }
  const double change = project_state_velocity(s, g);
  if (correction) *correction = change;

  const Forcing f = build_forcing(cfg, g);
  s.p = initial_pressure(restrict_to(s.v, Region::Fluid, g), restrict_to(s.d, Region::Fluid, g), s.w,
                         restrict_to(f.f_at(0.0, g), Region::Fluid, g), cfg.params, g);
  return s;
}

State exact_state(const Config& cfg, const Grid& g, double t) {
  const auto& in = cfg.initial;
  State s = State::zero(g, t);
  s.v = merge(sample_vec(in.u0, g, Region::Fluid, t), sample_vec(in.w1, g, Region::Solid, t), g);
  s.d = merge(sample_expr(in.rho0.ast, g, Region::Fluid, t), sample_expr(in.theta0.ast, g, Region::Solid, t), g);
  s.w = sample_vec(in.w0, g, Region::Solid, t);
  return s;
}

Forcing build_forcing(const Config& cfg, const Grid& g) {
  const auto& fo = cfg.forcing;
  Forcing out;
  auto is_zero = [](const ExprSource& e) {
    const auto& n = e.ast.root();
    return n.kind == ExprKind::Literal && n.value == 0.0;
  };
  const bool f_zero = is_zero(fo.f1[0]) && is_zero(fo.f1[1]) && is_zero(fo.f3[0]) && is_zero(fo.f3[1]);
  const bool g_zero = is_zero(fo.f2) && is_zero(fo.f4);
  const bool f_steady = !(fo.f1[0].ast.depends_on(Var::T) || fo.f1[1].ast.depends_on(Var::T) ||
                          fo.f3[0].ast.depends_on(Var::T) || fo.f3[1].ast.depends_on(Var::T));
  const bool g_steady = !(fo.f2.ast.depends_on(Var::T) || fo.f4.ast.depends_on(Var::T));

  // Interface rows take the half-cell weighted average of both sides.
  auto f_of = [fo, g](double t) { return merge(sample_vec(fo.f1, g, Region::Fluid, t), sample_vec(fo.f3, g, Region::Solid, t), g); };
  auto g_of = [fo, g](double t) {
    return merge(sample_expr(fo.f2.ast, g, Region::Fluid, t), sample_expr(fo.f4.ast, g, Region::Solid, t), g);
  };
  if (!f_zero) {
    if (f_steady) {
      const VectorField fixed = f_of(0.0);
      out.f = [fixed](double) { return fixed; };
    } else {
      out.f = f_of;
    }
  }
  if (!g_zero) {
    if (g_steady) {
      const ScalarField fixed = g_of(0.0);
      out.g = [fixed](double) { return fixed; };
    } else {
      out.g = g_of;
    }
  }
  return out;
}

}  // namespace bfsi
