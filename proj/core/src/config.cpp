#include "spdc/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(path + "." + key, "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback, bool allow_infinite = false) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (allow_infinite && v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinite") return kInfinite;
    fail(path + "." + key, "expected a number or \"inf\"");
  }
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    fail(path + "." + key, "expected a nonnegative integer");
  }
  const auto i = v.get<std::int64_t>();
  if (i < 0) fail(path + "." + key, "expected a nonnegative integer");
  return static_cast<std::uint64_t>(i);
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

json infinity_aware(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

}  // namespace

double PumpConfig::k_p() const {
  return 2.0 * std::numbers::pi * n_p / lambda_p;
}

PumpSpec RunConfig::pump_spec() const {
  PumpSpec spec;
  spec.k_p = pump.k_p();
  if (pump.model == "coherent") {
    spec.model = CoherentGaussian{pump.w, pump.R};
  } else if (pump.model == "gaussian_schell") {
    spec.model = GaussianSchell{pump.w, pump.R, pump.l_c};
  } else if (pump.model == "phase_screen_ensemble") {
    spec.model = PhaseScreenEnsemble{pump.w,       pump.R,
                                     pump.delta_phi, pump.phi_0,
                                     pump.n_realizations, pump.seed};
  } else {
    throw ConfigError("config: pump.model: expected coherent, gaussian_schell "
                      "or phase_screen_ensemble, got \"" + pump.model + "\"");
  }
  return spec;
}

PhaseMatching RunConfig::phase_matching() const {
  PhaseMatching pm;
  pm.length = crystal.length;
  pm.k_s = 2.0 * std::numbers::pi * crystal.n_s / crystal.lambda_s;
  pm.k_i = 2.0 * std::numbers::pi * crystal.n_i / crystal.lambda_i;
  pm.k_p = pump.k_p();
  return pm;
}

Grid1D RunConfig::make_grid() const { return Grid1D(grid.n, grid.dx); }

Imaging4f RunConfig::imaging_system() const { return Imaging4f{optics.f1, optics.f2}; }

FourierLens RunConfig::fourier_system() const {
  return FourierLens{optics.f3, crystal.lambda_s, crystal.lambda_i};
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* key, bool allow_inf = false) {
    if (allow_inf && std::isinf(v) && v > 0.0) return;
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("config: ") + key + ": must be positive");
    }
  };
  positive(pump.w, "pump.w");
  positive(pump.R, "pump.R", true);
  positive(pump.l_c, "pump.l_c", true);
  positive(pump.delta_phi, "pump.delta_phi");
  if (!(pump.phi_0 >= 0.0) || !std::isfinite(pump.phi_0)) {
    throw ConfigError("config: pump.phi_0: must be >= 0");
  }
  if (pump.n_realizations < 1) {
    throw ConfigError("config: pump.n_realizations: must be >= 1");
  }
  positive(pump.lambda_p, "pump.lambda_p");
  positive(pump.n_p, "pump.n_p");
  positive(crystal.length, "crystal.length");
  positive(crystal.lambda_s, "crystal.lambda_s");
  positive(crystal.lambda_i, "crystal.lambda_i");
  positive(crystal.n_s, "crystal.n_s");
  positive(crystal.n_i, "crystal.n_i");
  positive(grid.dx, "grid.dx");
  if (grid.n < 8 || (grid.n & (grid.n - 1)) != 0) {
    throw ConfigError("config: grid.n: must be a power of two >= 8");
  }
  positive(optics.f1, "optics.f1");
  positive(optics.f2, "optics.f2");
  positive(optics.f3, "optics.f3");
  positive(scan.slit_width, "scan.slit_width");
  positive(scan.dwell, "scan.dwell");
  if (scan.range < 0.0 || scan.step < 0.0) {
    throw ConfigError("config: scan.range/scan.step: must be >= 0 (0 = auto)");
  }
  if (scan.rate_constant < 0.0 || scan.singles_rate_constant < 0.0) {
    throw ConfigError("config: scan rate constants must be >= 0 (0 = auto)");
  }
  if (scan.repeats < 1) {
    throw ConfigError("config: scan.repeats: must be >= 1");
  }
  for (double p : sweep.phi_0) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ConfigError("config: sweep.phi_0: entries must be >= 0");
    }
  }
  if (!(report.significance_k >= 0.0)) {
    throw ConfigError("config: report.significance_k: must be >= 0");
  }

  // Grid sizing rules. Finest transverse feature: the waist, the coherence
  // length (or the realized delta_phi / phi_0), and the screen width all need
  // >= 4 samples.
  double finest = pump.w;
  const PhaseMatching pm = phase_matching();
  if (pump.model == "gaussian_schell" && std::isfinite(pump.l_c)) {
    finest = std::min(finest, pump.l_c);
  }
  if (pump.model == "phase_screen_ensemble" && pump.phi_0 > 0.0) {
    finest = std::min(finest, pump.delta_phi);
    finest = std::min(finest, pump.delta_phi / pump.phi_0);
  }
  if (grid.dx > finest / 4.0) {
    std::ostringstream msg;
    msg << "config: grid.dx: under-resolved transverse features (need dx <= "
        << finest / 4.0 << " m = min(w, l_c, delta_phi)/4, got " << grid.dx
        << " m)";
    throw ConfigError(msg.str());
  }
  // Position extent must hold both the pump profile and the position
  // correlation width x_c = 2 pi / q0, q0 = sqrt(4 pi k_s / L).
  const double q0 = std::sqrt(4.0 * std::numbers::pi * pm.k_s / pm.length);
  const double x_corr = 2.0 * std::numbers::pi / q0;
  const double extent = static_cast<double>(grid.n) * grid.dx;
  const double needed = 8.0 * std::max(pump.w, x_corr);
  if (extent < needed) {
    std::ostringstream msg;
    msg << "config: grid: extent n*dx = " << extent
        << " m too small; need >= 8*max(w, 2pi/q0) = " << needed << " m";
    throw ConfigError(msg.str());
  }
  // The conjugate grid must resolve the pump angular profile.
  double l_eff = kInfinite;
  if (pump.model == "gaussian_schell") l_eff = pump.l_c;
  if (pump.model == "phase_screen_ensemble" && pump.phi_0 > 0.0) {
    l_eff = pump.delta_phi / pump.phi_0;
  }
  const double sigma_q =
      std::sqrt(2.0 * gsm_delta_p_plus_sq(pump.w, pump.R, l_eff, pump.k_p()));
  const double dq = 2.0 * std::numbers::pi / extent;
  if (dq > sigma_q / 2.0) {
    std::ostringstream msg;
    msg << "config: grid: conjugate spacing dq = " << dq
        << " rad/m under-resolves the pump angular width " << sigma_q
        << " rad/m (need dq <= sigma_q/2); increase n*dx";
    throw ConfigError(msg.str());
  }
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "config",
             {"pump", "crystal", "grid", "optics", "scan", "sweep", "report",
              "output"});

  RunConfig c;
  if (root.contains("pump")) {
    const auto& p = root.at("pump");
    check_keys(p, "pump",
               {"model", "w", "R", "l_c", "delta_phi", "phi_0",
                "n_realizations", "seed", "lambda_p", "n_p"});
    c.pump.model = get_string(p, "pump", "model", c.pump.model);
    c.pump.w = get_number(p, "pump", "w", c.pump.w);
    c.pump.R = get_number(p, "pump", "R", c.pump.R, true);
    c.pump.l_c = get_number(p, "pump", "l_c", c.pump.l_c, true);
    c.pump.delta_phi = get_number(p, "pump", "delta_phi", c.pump.delta_phi);
    c.pump.phi_0 = get_number(p, "pump", "phi_0", c.pump.phi_0);
    c.pump.n_realizations = static_cast<std::size_t>(
        get_uint(p, "pump", "n_realizations", c.pump.n_realizations));
    c.pump.seed = get_uint(p, "pump", "seed", c.pump.seed);
    c.pump.lambda_p = get_number(p, "pump", "lambda_p", c.pump.lambda_p);
    c.pump.n_p = get_number(p, "pump", "n_p", c.pump.n_p);
  }
  if (root.contains("crystal")) {
    const auto& k = root.at("crystal");
    check_keys(k, "crystal", {"length", "lambda_s", "lambda_i", "n_s", "n_i"});
    c.crystal.length = get_number(k, "crystal", "length", c.crystal.length);
    c.crystal.lambda_s = get_number(k, "crystal", "lambda_s", c.crystal.lambda_s);
    c.crystal.lambda_i = get_number(k, "crystal", "lambda_i", c.crystal.lambda_i);
    c.crystal.n_s = get_number(k, "crystal", "n_s", c.crystal.n_s);
    c.crystal.n_i = get_number(k, "crystal", "n_i", c.crystal.n_i);
  }
  if (root.contains("grid")) {
    const auto& g = root.at("grid");
    check_keys(g, "grid", {"n", "dx"});
    c.grid.n = static_cast<std::size_t>(get_uint(g, "grid", "n", c.grid.n));
    c.grid.dx = get_number(g, "grid", "dx", c.grid.dx);
  }
  if (root.contains("optics")) {
    const auto& o = root.at("optics");
    check_keys(o, "optics", {"f1", "f2", "f3"});
    c.optics.f1 = get_number(o, "optics", "f1", c.optics.f1);
    c.optics.f2 = get_number(o, "optics", "f2", c.optics.f2);
    c.optics.f3 = get_number(o, "optics", "f3", c.optics.f3);
  }
  if (root.contains("scan")) {
    const auto& s = root.at("scan");
    check_keys(s, "scan",
               {"slit_width", "range", "step", "dwell", "rate_constant",
                "singles_rate_constant", "repeats"});
    c.scan.slit_width = get_number(s, "scan", "slit_width", c.scan.slit_width);
    c.scan.range = get_number(s, "scan", "range", c.scan.range);
    c.scan.step = get_number(s, "scan", "step", c.scan.step);
    c.scan.dwell = get_number(s, "scan", "dwell", c.scan.dwell);
    c.scan.rate_constant =
        get_number(s, "scan", "rate_constant", c.scan.rate_constant);
    c.scan.singles_rate_constant = get_number(
        s, "scan", "singles_rate_constant", c.scan.singles_rate_constant);
    c.scan.repeats = static_cast<std::size_t>(
        get_uint(s, "scan", "repeats", c.scan.repeats));
  }
  if (root.contains("sweep")) {
    const auto& s = root.at("sweep");
    check_keys(s, "sweep", {"phi_0"});
    if (s.contains("phi_0")) {
      if (!s.at("phi_0").is_array()) fail("sweep.phi_0", "expected an array");
      c.sweep.phi_0.clear();
      for (const auto& v : s.at("phi_0")) {
        if (!v.is_number()) fail("sweep.phi_0", "expected numbers");
        c.sweep.phi_0.push_back(v.get<double>());
      }
    }
  }
  if (root.contains("report")) {
    const auto& r = root.at("report");
    check_keys(r, "report", {"significance_k"});
    c.report.significance_k =
        get_number(r, "report", "significance_k", c.report.significance_k);
  }
  if (root.contains("output")) {
    const auto& o = root.at("output");
    check_keys(o, "output", {"dir", "csv", "svg"});
    c.output.dir = get_string(o, "output", "dir", c.output.dir);
    c.output.csv = get_bool(o, "output", "csv", c.output.csv);
    c.output.svg = get_bool(o, "output", "svg", c.output.svg);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["pump"] = {{"model", c.pump.model},
                  {"w", c.pump.w},
                  {"R", infinity_aware(c.pump.R)},
                  {"l_c", infinity_aware(c.pump.l_c)},
                  {"delta_phi", c.pump.delta_phi},
                  {"phi_0", c.pump.phi_0},
                  {"n_realizations", c.pump.n_realizations},
                  {"seed", c.pump.seed},
                  {"lambda_p", c.pump.lambda_p},
                  {"n_p", c.pump.n_p}};
  root["crystal"] = {{"length", c.crystal.length},
                     {"lambda_s", c.crystal.lambda_s},
                     {"lambda_i", c.crystal.lambda_i},
                     {"n_s", c.crystal.n_s},
                     {"n_i", c.crystal.n_i}};
  root["grid"] = {{"n", c.grid.n}, {"dx", c.grid.dx}};
  root["optics"] = {{"f1", c.optics.f1}, {"f2", c.optics.f2}, {"f3", c.optics.f3}};
  root["scan"] = {{"slit_width", c.scan.slit_width},
                  {"range", c.scan.range},
                  {"step", c.scan.step},
                  {"dwell", c.scan.dwell},
                  {"rate_constant", c.scan.rate_constant},
                  {"singles_rate_constant", c.scan.singles_rate_constant},
                  {"repeats", c.scan.repeats}};
  root["sweep"] = {{"phi_0", c.sweep.phi_0}};
  root["report"] = {{"significance_k", c.report.significance_k}};
  root["output"] = {{"dir", c.output.dir}, {"csv", c.output.csv}, {"svg", c.output.svg}};
  return root.dump(2);
}

}  // namespace spdc
