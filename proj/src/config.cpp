#include "vvlab/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vvlab/errors.hpp"

namespace vvlab::config {

using nlohmann::json;

nlohmann::json load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", "JSON syntax error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
  }
}

namespace {

const json& section(const json& doc, const std::string& key) {
  if (!doc.is_object() || !doc.contains(key)) throw ConfigError(key, "missing section");
  const json& s = doc.at(key);
  if (!s.is_object()) throw ConfigError(key, "must be an object");
  return s;
}

double number(const json& obj, const std::string& path, const std::string& key) {
  const std::string where = path + "." + key;
  if (!obj.contains(key)) throw ConfigError(where, "missing field");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where, "must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

long long integer(const json& obj, const std::string& path, const std::string& key) {
  const std::string where = path + "." + key;
  if (!obj.contains(key)) throw ConfigError(where, "missing field");
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<long long>(d);
  }
  throw ConfigError(where, "must be an integer");
}

long long integer_or(const json& obj, const std::string& path, const std::string& key,
                     long long fallback) {
  return obj.contains(key) ? integer(obj, path, key) : fallback;
}

std::string text(const json& obj, const std::string& path, const std::string& key) {
  const std::string where = path + "." + key;
  if (!obj.contains(key)) throw ConfigError(where, "missing field");
  if (!obj.at(key).is_string()) throw ConfigError(where, "must be a string");
  return obj.at(key).get<std::string>();
}

Grid1D parse_grid(const json& doc) {
  const json& g = section(doc, "grid");
  const double L = number(g, "grid", "L");
  const long long N = integer(g, "grid", "N");
  if (!(L > 0.0)) throw ConfigError("grid.L", "must be positive");
  if (N < 8 || N % 2 != 0) throw ConfigError("grid.N", "must be even and at least 8");
  return make_grid(L, static_cast<std::size_t>(N));
}

FluxKind parse_model(const json& doc) {
  const json& m = section(doc, "model");
  const std::string kind = text(m, "model", "kind");
  if (kind == "quadratic" || kind == "Quadratic") return FluxKind::Quadratic;
  if (kind == "cubic" || kind == "Cubic") return FluxKind::Cubic;
  throw ConfigError("model.kind", "expected 'quadratic' or 'cubic', got '" + kind + "'");
}

InitData parse_init(const json& doc, const Grid1D& grid) {
  const json& s = section(doc, "init");
  const std::string profile = text(s, "init", "profile");
  InitData init;
  if (profile == "zero") {
    init.profile = SineModes{{{1, 0.0}}};
  } else if (profile == "sine") {
    if (!s.contains("modes") || !s.at("modes").is_array() || s.at("modes").empty()) {
      throw ConfigError("init.modes", "expected a nonempty list of [m, amplitude] pairs");
    }
    SineModes modes;
    for (const auto& pair : s.at("modes")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number()) {
        throw ConfigError("init.modes", "each entry must be [integer m, amplitude]");
      }
      modes.modes.emplace_back(pair[0].get<int>(), pair[1].get<double>());
    }
    init.profile = modes;
  } else if (profile == "double_bump") {
    init.profile = DoubleBump{number_or(s, "init", "center", 0.0),
                              number_or(s, "init", "half_width", 0.5),
                              number_or(s, "init", "amplitude", 1.0)};
  } else if (profile == "smoothed_riemann") {
    init.profile = SmoothedRiemann{number(s, "init", "uL"), number(s, "init", "uR"),
                                   number_or(s, "init", "width_cells", 3.0)};
  } else {
    throw ConfigError("init.profile", "unknown profile '" + profile + "'");
  }
  try {
    init.validate(grid);
  } catch (const InvalidParams& e) {
    throw ConfigError("init", e.what());
  }
  return init;
}

SolverOptions parse_options(const json& doc) {
  const json& o = section(doc, "options");
  SolverOptions opt;
  opt.t_end = number(o, "options", "t_end");
  opt.cfl_hyp = number_or(o, "options", "cfl_hyp", opt.cfl_hyp);
  opt.cfl_visc = number_or(o, "options", "cfl_visc", opt.cfl_visc);
  opt.cfl_disp = number_or(o, "options", "cfl_disp", opt.cfl_disp);
  const long long stride = integer_or(o, "options", "snapshot_stride", 1);
  if (stride <= 0) throw ConfigError("options.snapshot_stride", "must be positive");
  opt.snapshot_stride = static_cast<std::size_t>(stride);
  opt.snapshot_interval = number_or(o, "options", "snapshot_interval", 0.0);
  const long long max_steps =
      integer_or(o, "options", "max_steps", static_cast<long long>(opt.max_steps));
  if (max_steps <= 0) throw ConfigError("options.max_steps", "must be positive");
  opt.max_steps = static_cast<std::size_t>(max_steps);
  opt.fixed_dt = number_or(o, "options", "fixed_dt", 0.0);
  if (o.contains("limiter")) {
    const std::string l = text(o, "options", "limiter");
    if (l == "llf" || l == "LocalLaxFriedrichs") {
      opt.limiter = Limiter::LocalLaxFriedrichs;
    } else if (l == "none" || l == "None") {
      opt.limiter = Limiter::None;
    } else {
      throw ConfigError("options.limiter", "expected 'llf' or 'none'");
    }
  }
  try {
    opt.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError("options", e.what());
  }
  return opt;
}

}  // namespace

SolveConfig parse_solve(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  SolveConfig cfg;
  cfg.grid = parse_grid(doc);
  cfg.model = parse_model(doc);
  cfg.init = parse_init(doc, cfg.grid);
  cfg.options = parse_options(doc);
  const json& p = section(doc, "params");
  cfg.params.eps = number_or(p, "params", "eps", 0.0);
  cfg.params.beta = number_or(p, "params", "beta", 0.0);
  cfg.params.delta = number_or(p, "params", "delta", 0.0);
  cfg.params.gamma = number_or(p, "params", "gamma", 0.0);
  try {
    cfg.params.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError("params", e.what());
  }
  return cfg;
}

SweepConfig parse_sweep(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  SweepConfig cfg;
  const json& r = section(doc, "regime");
  try {
    cfg.regime.kind = regime_kind_from_string(text(r, "regime", "kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("regime.kind", e.what());
  }
  cfg.regime.eps0 = number(r, "regime", "eps0");
  cfg.regime.delta0 = number(r, "regime", "delta0");
  cfg.regime.c_gamma = number_or(r, "regime", "c_gamma", 1.0);
  cfg.regime.c_beta = number_or(r, "regime", "c_beta", 1.0);
  cfg.regime.theta = number_or(r, "regime", "theta", 0.5);
  cfg.regime.k_max = static_cast<int>(integer(r, "regime", "k_max"));
  try {
    (void)regime_sequence(cfg.regime);
  } catch (const Error& e) {
    throw ConfigError("regime", e.what());
  }

  cfg.grid = parse_grid(doc);
  cfg.model = parse_model(doc);
  cfg.init = parse_init(doc, cfg.grid);
  cfg.options = parse_options(doc);

  const json& ref = section(doc, "reference");
  const long long refine = integer(ref, "reference", "refine");
  if (refine < 1) throw ConfigError("reference.refine", "must be >= 1");
  cfg.reference_refine = static_cast<std::size_t>(refine);

  if (doc.contains("window")) {
    const json& w = section(doc, "window");
    cfg.window = Window{number(w, "window", "lo"), number(w, "window", "hi")};
    if (!(cfg.window.hi > cfg.window.lo)) throw ConfigError("window", "hi must exceed lo");
  } else {
    cfg.window = Window{-0.5 * cfg.grid.half_width, 0.5 * cfg.grid.half_width};
  }

  if (doc.contains("norms")) {
    const json& n = doc.at("norms");
    if (!n.is_array() || n.empty()) throw ConfigError("norms", "expected a nonempty list");
    cfg.norms.clear();
    for (const auto& v : n) {
      if (v.is_string() && (v == "inf" || v == "Linf")) {
        cfg.norms.push_back(std::numeric_limits<double>::infinity());
      } else if (v.is_number() && v.get<double>() >= 1.0) {
        cfg.norms.push_back(v.get<double>());
      } else {
        throw ConfigError("norms", "entries must be numbers >= 1 or \"inf\"");
      }
    }
  }

  if (doc.contains("entropy")) {
    const json& e = section(doc, "entropy");
    cfg.entropy_nt = static_cast<std::size_t>(integer_or(e, "entropy", "nt", 3));
    cfg.entropy_nx = static_cast<std::size_t>(integer_or(e, "entropy", "nx", 8));
    cfg.kruzkov_kappa = number_or(e, "entropy", "kappa", 0.05);
    if (cfg.entropy_nt == 0 || cfg.entropy_nx == 0) {
      throw ConfigError("entropy", "lattice sizes must be positive");
    }
    if (!(cfg.kruzkov_kappa > 0.0)) throw ConfigError("entropy.kappa", "must be positive");
  }
  return cfg;
}

std::string hash(const json& doc) {
  const std::string s = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vvlab::config
