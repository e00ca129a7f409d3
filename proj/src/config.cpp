#include "ryd/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ryd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw std::invalid_argument(origin + ": " + msg);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& origin, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(origin, "unknown key '" + where + it.key() + "'");
}

double get_num(const json& obj, const std::string& key, const std::string& origin,
               const std::string& where) {
  if (!obj.contains(key)) fail(origin, "missing field '" + where + key + "'");
  if (!obj[key].is_number()) fail(origin, "field '" + where + key + "' must be a number");
  const double v = obj[key].get<double>();
  if (!std::isfinite(v)) fail(origin, "field '" + where + key + "' must be finite");
  return v;
}

double get_num_or(const json& obj, const std::string& key, double fallback,
                  const std::string& origin, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get_num(obj, key, origin, where);
}

int get_int_or(const json& obj, const std::string& key, int fallback,
               const std::string& origin, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    fail(origin, "field '" + where + key + "' must be an integer");
  return obj[key].get<int>();
}

TauWindow parse_tau_window(const json& obj, TauWindow def, const std::string& origin,
                           const std::string& where) {
  reject_unknown(obj, {"v0tau_lo", "v0tau_hi", "coarse_points"}, origin, where);
  TauWindow w = def;
  w.v0tau_lo = get_num_or(obj, "v0tau_lo", def.v0tau_lo, origin, where);
  w.v0tau_hi = get_num_or(obj, "v0tau_hi", def.v0tau_hi, origin, where);
  w.coarse_points = get_int_or(obj, "coarse_points", def.coarse_points, origin, where);
  if (!(w.v0tau_lo > 0.0) || !(w.v0tau_hi > w.v0tau_lo))
    fail(origin, "field '" + where + "': invalid tau window");
  return w;
}

Scheme parse_scheme(const std::string& s, const std::string& origin) {
  if (s == "rmd") return Scheme::Rmd;
  if (s == "srd") return Scheme::Srd;
  fail(origin, "unknown scheme '" + s + "' (expected rmd|srd)");
}

}  // namespace

RunConfig load_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // translate the byte offset into line/column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::invalid_argument(origin + ": parse error at line " +
                                std::to_string(line) + ", column " +
                                std::to_string(col) + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  reject_unknown(root,
                 {"units", "dressing", "mw", "coeffs", "chain", "protocol",
                  "pair", "scan", "dynamics", "output"},
                 origin, "");

  RunConfig cfg;

  if (!root.contains("units") || !root["units"].is_string())
    fail(origin, "missing or invalid 'units'");
  cfg.units = root["units"].get<std::string>();
  if (cfg.units != "omega" && cfg.units != "mhz_2pi")
    fail(origin, "'units' must be \"omega\" or \"mhz_2pi\"");

  if (!root.contains("dressing") || !root["dressing"].is_object())
    fail(origin, "missing 'dressing' object");
  const json& dr = root["dressing"];
  reject_unknown(dr, {"omega", "delta", "gamma", "g", "g_over_v0", "delta0"},
                 origin, "dressing.");
  const double omega_raw = get_num(dr, "omega", origin, "dressing.");
  if (!(omega_raw > 0.0)) fail(origin, "dressing.omega must be positive");
  cfg.dressing.omega = omega_raw;
  cfg.dressing.delta = get_num(dr, "delta", origin, "dressing.");
  cfg.dressing.gamma = get_num(dr, "gamma", origin, "dressing.");
  if (cfg.dressing.gamma < 0.0) fail(origin, "dressing.gamma must be >= 0");

  bool has_g = dr.contains("g"), has_gv0 = dr.contains("g_over_v0");
  if (has_g && has_gv0)
    fail(origin, "dressing.g and dressing.g_over_v0 are mutually exclusive");
  double g_over_v0 = 0.0;
  if (has_g) cfg.dressing.g = get_num(dr, "g", origin, "dressing.");
  if (has_gv0) g_over_v0 = get_num(dr, "g_over_v0", origin, "dressing.");

  bool delta0_auto = false;
  if (dr.contains("delta0")) {
    if (dr["delta0"].is_string()) {
      if (dr["delta0"].get<std::string>() != "light-shift-compensation")
        fail(origin, "dressing.delta0: unknown mode string");
      delta0_auto = true;
    } else {
      cfg.dressing.delta0 = get_num(dr, "delta0", origin, "dressing.");
    }
  }

  if (!root.contains("mw") || !root["mw"].is_object())
    fail(origin, "missing 'mw' object");
  const json& mwj = root["mw"];
  reject_unknown(mwj, {"omega_mw", "delta_mw"}, origin, "mw.");
  cfg.mw.omega_mw = get_num(mwj, "omega_mw", origin, "mw.");
  cfg.mw.delta_mw = get_num_or(mwj, "delta_mw", 0.0, origin, "mw.");
  if (cfg.mw.omega_mw < 0.0) fail(origin, "mw.omega_mw must be >= 0");

  if (!root.contains("coeffs") || !root["coeffs"].is_object())
    fail(origin, "missing 'coeffs' object");
  const json& co = root["coeffs"];
  reject_unknown(co, {"c6_ss", "c6_pp", "c3_sp", "scale_to_u_min"}, origin,
                 "coeffs.");
  cfg.coeffs.c6_ss = get_num(co, "c6_ss", origin, "coeffs.");
  cfg.coeffs.c6_pp = get_num(co, "c6_pp", origin, "coeffs.");
  cfg.coeffs.c3_sp = get_num(co, "c3_sp", origin, "coeffs.");
  double u_target = 0.0;
  bool calibrate = false;
  if (co.contains("scale_to_u_min")) {
    u_target = get_num(co, "scale_to_u_min", origin, "coeffs.");
    if (!(u_target < 0.0)) fail(origin, "coeffs.scale_to_u_min must be negative");
    calibrate = true;
  }

  if (root.contains("chain")) {
    const json& ch = root["chain"];
    reject_unknown(ch, {"n_sites", "lattice_ratio", "me_cap"}, origin, "chain.");
    cfg.chain.n_sites = get_int_or(ch, "n_sites", cfg.chain.n_sites, origin, "chain.");
    cfg.chain.lattice_ratio =
        get_num_or(ch, "lattice_ratio", cfg.chain.lattice_ratio, origin, "chain.");
    cfg.chain.me_cap = get_int_or(ch, "me_cap", cfg.chain.me_cap, origin, "chain.");
    if (cfg.chain.n_sites < 1) fail(origin, "chain.n_sites must be >= 1");
    if (!(cfg.chain.lattice_ratio > 0.0))
      fail(origin, "chain.lattice_ratio must be positive");
    if (cfg.chain.me_cap < 1 || cfg.chain.me_cap > 10)
      fail(origin, "chain.me_cap must be in [1, 10]");
  }

  if (root.contains("protocol")) {
    const json& pr = root["protocol"];
    reject_unknown(pr, {"scheme", "method", "tau_range"}, origin, "protocol.");
    if (pr.contains("scheme"))
      cfg.protocol.scheme = parse_scheme(pr["scheme"].get<std::string>(), origin);
    if (pr.contains("method")) {
      const std::string m = pr["method"].get<std::string>();
      if (m == "analytic")
        cfg.protocol.method = Method::Analytic;
      else if (m == "conditional_nh")
        cfg.protocol.method = Method::ConditionalNh;
      else if (m == "exact_me")
        cfg.protocol.method = Method::ExactMe;
      else
        fail(origin, "unknown protocol.method '" + m + "'");
    }
    if (pr.contains("tau_range"))
      cfg.protocol.tau = parse_tau_window(pr["tau_range"], cfg.protocol.tau,
                                          origin, "protocol.tau_range.");
  }

  if (root.contains("pair")) {
    const json& pj = root["pair"];
    reject_unknown(pj, {"u12_list", "v0t_max", "points"}, origin, "pair.");
    if (pj.contains("u12_list")) {
      if (!pj["u12_list"].is_array()) fail(origin, "pair.u12_list must be an array");
      for (const auto& v : pj["u12_list"]) {
        if (!v.is_number()) fail(origin, "pair.u12_list entries must be numbers");
        cfg.pair.u12_list.push_back(v.get<double>());
      }
    }
    cfg.pair.v0t_max = get_num_or(pj, "v0t_max", cfg.pair.v0t_max, origin, "pair.");
    cfg.pair.points = get_int_or(pj, "points", cfg.pair.points, origin, "pair.");
    if (cfg.pair.points < 2) fail(origin, "pair.points must be >= 2");
  }

  if (root.contains("scan")) {
    const json& sc = root["scan"];
    reject_unknown(sc, {"schemes", "lattice_ratios", "n_list", "gamma_list", "tau_range"},
                   origin, "scan.");
    if (sc.contains("schemes")) {
      cfg.scan.schemes.clear();
      for (const auto& v : sc["schemes"]) {
        parse_scheme(v.get<std::string>(), origin);  // validates
        cfg.scan.schemes.push_back(v.get<std::string>());
      }
    }
    if (sc.contains("lattice_ratios")) {
      cfg.scan.lattice_ratios.clear();
      for (const auto& v : sc["lattice_ratios"])
        cfg.scan.lattice_ratios.push_back(v.get<double>());
    }
    if (sc.contains("n_list")) {
      cfg.scan.n_list.clear();
      for (const auto& v : sc["n_list"]) cfg.scan.n_list.push_back(v.get<int>());
    }
    if (sc.contains("gamma_list")) {
      cfg.scan.gamma_list.clear();
      for (const auto& v : sc["gamma_list"])
        cfg.scan.gamma_list.push_back(v.get<double>());
    }
    if (sc.contains("tau_range"))
      cfg.scan.tau = parse_tau_window(sc["tau_range"], cfg.scan.tau, origin,
                                      "scan.tau_range.");
  }

  if (root.contains("dynamics")) {
    const json& dy = root["dynamics"];
    reject_unknown(dy, {"v0t_max", "points", "initial"}, origin, "dynamics.");
    cfg.dynamics.v0t_max =
        get_num_or(dy, "v0t_max", cfg.dynamics.v0t_max, origin, "dynamics.");
    cfg.dynamics.points = get_int_or(dy, "points", cfg.dynamics.points, origin,
                                     "dynamics.");
    if (cfg.dynamics.points < 2) fail(origin, "dynamics.points must be >= 2");
    if (dy.contains("initial")) {
      if (dy["initial"].is_string()) {
        cfg.dynamics.initial = dy["initial"].get<std::string>();
        if (cfg.dynamics.initial != "plus_x" && cfg.dynamics.initial != "all_zero")
          fail(origin, "dynamics.initial must be plus_x, all_zero or a site list");
      } else if (dy["initial"].is_array()) {
        cfg.dynamics.initial = "product";
        for (const auto& site : dy["initial"]) {
          if (!site.is_array() || site.size() != 4)
            fail(origin, "dynamics.initial sites must be [re0, im0, re1, im1]");
          std::array<double, 4> amp{};
          for (int k = 0; k < 4; ++k) {
            if (!site[k].is_number())
              fail(origin, "dynamics.initial amplitudes must be numbers");
            amp[k] = site[k].get<double>();
          }
          cfg.dynamics.initial_sites.push_back(amp);
        }
        if (cfg.dynamics.initial_sites.empty())
          fail(origin, "dynamics.initial site list is empty");
      } else {
        fail(origin, "dynamics.initial must be a string or an array");
      }
    }
  }

  if (root.contains("output")) {
    const json& out = root["output"];
    reject_unknown(out, {"path", "format"}, origin, "output.");
    if (out.contains("path")) cfg.output.path = out["path"].get<std::string>();
    if (out.contains("format")) {
      cfg.output.format = out["format"].get<std::string>();
      if (cfg.output.format != "csv") fail(origin, "output.format must be 'csv'");
    }
  }

  // unit conversion: internal units have omega = 1; mhz_2pi configs are given
  // in 2pi*MHz and divide through by the Rabi frequency exactly once
  if (cfg.units == "mhz_2pi") {
    cfg.omega_mhz = omega_raw;
    const double s = 1.0 / omega_raw;
    cfg.dressing.omega = 1.0;
    cfg.dressing.delta *= s;
    cfg.dressing.gamma *= s;
    cfg.dressing.g *= s;
    cfg.dressing.delta0 *= s;
    cfg.mw.omega_mw *= s;
    cfg.mw.delta_mw *= s;
    cfg.coeffs.c6_ss *= s;
    cfg.coeffs.c6_pp *= s;
    cfg.coeffs.c3_sp *= s;
    u_target *= s;
  } else {
    if (omega_raw != 1.0)
      fail(origin, "units=omega requires dressing.omega = 1");
  }

  if (cfg.dressing.delta == 0.0) fail(origin, "dressing.delta must be nonzero");
  if (delta0_auto)
    cfg.dressing.delta0 =
        cfg.dressing.omega * cfg.dressing.omega / (4.0 * std::abs(cfg.dressing.delta));
  if (has_gv0) cfg.dressing.g = g_over_v0 * std::abs(v0(cfg.dressing));

  if (calibrate) {
    const double s = depth_scale(cfg.mw, cfg.coeffs, u_target);
    cfg.mw.omega_mw *= s;
    cfg.mw.delta_mw *= s;
    cfg.coeffs.c6_ss *= s;
    cfg.coeffs.c6_pp *= s;
    cfg.coeffs.c3_sp *= s;
    cfg.depth_calibrated = true;
    cfg.u_target = u_target;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), path);
}

std::string preset_path(const std::string& name) {
  static const std::set<std::string> known = {"fig1", "fig2", "fig3",
                                              "fig4", "figS1", "figS2"};
  if (!known.count(name))
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected fig1|fig2|fig3|fig4|figS1|figS2)");
  const char* dir = std::getenv("RYD_PRESET_DIR");
  std::string base = dir ? dir : RYD_PRESET_DIR;
  return base + "/" + name + ".json";
}

double to_output_units(const RunConfig& cfg, double value) {
  return cfg.units == "mhz_2pi" ? value * cfg.omega_mhz : value;
}

}  // namespace ryd
