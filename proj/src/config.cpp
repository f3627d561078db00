#include "flipflop/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace flipflop {

using nlohmann::json;

namespace {

// Reads the members of one JSON object, remembering which keys were used
// so that anything left over can be rejected.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "must be an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }

  const json& at(const std::string& k) {
    seen_.insert(k);
    if (!j_.contains(k)) throw ConfigError(key(k), "required");
    return j_.at(k);
  }

  void num(const std::string& k, double& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number()) throw ConfigError(key(k), "must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(key(k), "must be finite");
  }

  void integer(const std::string& k, int& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number_integer()) throw ConfigError(key(k), "must be an integer");
    out = v.get<int>();
  }

  void u64(const std::string& k, std::uint64_t& out) {
    if (!has(k)) return;
    const json& v = j_.at(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError(key(k), "must be a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void boolean(const std::string& k, bool& out) {
    if (!has(k)) return;
    if (!j_.at(k).is_boolean()) throw ConfigError(key(k), "must be true or false");
    out = j_.at(k).get<bool>();
  }

  void str(const std::string& k, std::string& out) {
    if (!has(k)) return;
    if (!j_.at(k).is_string()) throw ConfigError(key(k), "must be a string");
    out = j_.at(k).get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// A list of numbers or {"start", "stop", "n"}.
std::vector<double> parse_axis(const json& j, const std::string& path) {
  if (j.is_array()) {
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "must be a number");
      v.push_back(j[i].get<double>());
    }
    return v;
  }
  Obj o(j, path);
  Range r;
  o.num("start", r.start);
  o.num("stop", r.stop);
  o.integer("n", r.n);
  o.finish();
  if (r.n < 1) throw ConfigError(o.key("n"), "must be >= 1");
  if (r.n > 1 && !(r.stop > r.start)) throw ConfigError(o.key("stop"), "must exceed start");
  return r.values();
}

PropagatorConfig parse_propagator(const json& j, const std::string& path) {
  Obj o(j, path);
  PropagatorConfig c;
  o.num("max_step", c.max_step);
  o.num("rel_tol", c.rel_tol);
  o.integer("max_halvings", c.max_halvings);
  std::string method, picture;
  o.str("method", method);
  o.str("picture", picture);
  o.finish();
  if (!method.empty()) {
    if (method == "midpoint") c.method = StepMethod::midpoint;
    else if (method == "magnus4") c.method = StepMethod::magnus4;
    else if (method == "adaptive") c.method = StepMethod::adaptive;
    else throw ConfigError(o.key("method"), "must be midpoint, magnus4 or adaptive");
  }
  if (!picture.empty()) {
    if (picture == "orbital_adiabatic") c.picture = Picture::orbital_adiabatic;
    else if (picture == "lab") c.picture = Picture::lab;
    else throw ConfigError(o.key("picture"), "must be orbital_adiabatic or lab");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(o.key(e.key()), e.what());
  }
  return c;
}

// Re-throws a ConfigError with its key placed under `prefix`.
template <typename F>
void rekey(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    const std::string& k = e.key();
    if (!k.empty() && msg.rfind(k + ": ", 0) == 0) msg = msg.substr(k.size() + 2);
    std::string full = k;
    if (k.empty()) full = prefix;
    else if (!prefix.empty() && k.rfind(prefix + ".", 0) != 0) full = prefix + "." + k;
    throw ConfigError(full, msg);
  }
}

}  // namespace

std::vector<double> Range::values() const {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? start : start + (stop - start) * i / (n - 1);
  return v;
}

const GateSpec& RunConfig::require_gate() const {
  if (!gate) throw ConfigError("gate", "required block missing");
  return *gate;
}

DeviceParams parse_device(const json& j, const std::string& path) {
  Obj o(j, path);
  DeviceParams p;
  o.num("B0", p.B0);
  o.num("Vt_over_2pi", p.Vt_over_2pi);
  o.num("d", p.d);
  o.num("delta_gamma", p.delta_gamma);
  o.num("A_bulk_over_2pi", p.A_bulk_over_2pi);
  o.num("gamma_e_over_2pi", p.gamma_e_over_2pi);
  o.num("gamma_n_over_2pi", p.gamma_n_over_2pi);
  o.finish();
  rekey(path, [&] { p.validate(); });
  return p;
}

RunConfig parse_config(const json& doc) {
  Obj root(doc, "");
  RunConfig c;
  c.device = parse_device(root.at("device"), "device");

  if (root.has("gate")) {
    Obj o(root.at("gate"), "gate");
    GateSpec g;
    std::string axis = "z";
    o.str("axis", axis);
    rekey("gate", [&] { g.axis = axis_from_string(axis); });
    o.num("angle", g.angle);
    o.integer("branch", c.design.branch);
    o.boolean("refine", c.design.refine);
    o.integer("branches", c.design.branches);
    o.num("refine_window", c.design.refine_window);
    o.num("refine_target", c.design.refine_target);
    o.num("T_max", c.design.T_max);
    o.finish();
    if (c.design.branch < 0) throw ConfigError("gate.branch", "must be >= 0");
    if (c.design.branches < 1) throw ConfigError("gate.branches", "must be >= 1");
    if (!(c.design.T_max > 0)) throw ConfigError("gate.T_max", "must be > 0");
    if (g.axis == Axis::z && !(g.angle > -units::two_pi && g.angle <= units::two_pi))
      throw ConfigError("gate.angle", "must lie in (-2pi, 2pi]");
    if (g.axis == Axis::x && !(g.angle > 0 && g.angle < units::two_pi))
      throw ConfigError("gate.angle", "must lie in (0, 2pi)");
    c.gate = g;
  }
  if (c.gate && c.gate->axis == Axis::x) c.rx = RxTemplate{};

  if (root.has("pulse")) {
    Obj o(root.at("pulse"), "pulse");
    const bool x = c.gate && c.gate->axis == Axis::x;
    double xi0 = x ? c.rx.xi0 : c.rz.xi0, xif = x ? c.rx.xif : c.rz.xif;
    double t_r = x ? c.rx.t_r : c.rz.t_r, sigma = 1.0;
    o.num("xi0", xi0);
    o.num("xif", xif);
    o.num("t_r", t_r);
    o.num("sigma", sigma);
    o.num("sigma_ac", c.rx.sigma_ac);
    o.num("rho", c.rx.rho);
    o.num("R", c.rx.R);
    o.finish();
    c.rz.xi0 = c.rx.xi0 = xi0;
    c.rz.xif = c.rx.xif = xif;
    c.rz.t_r = c.rx.t_r = t_r;
    c.rz.sigma = c.rx.sigma = sigma;
  }
  if (!(c.rz.t_r > 0)) throw ConfigError("pulse.t_r", "must be > 0");
  if (!(c.rz.sigma > 0)) throw ConfigError("pulse.sigma", "must be > 0");
  if (!(c.rx.sigma_ac > 0)) throw ConfigError("pulse.sigma_ac", "must be > 0");
  if (!(c.rx.rho > 2)) throw ConfigError("pulse.rho", "must be > 2");
  if (!(c.rx.R > 0 && c.rx.R < 0.5)) throw ConfigError("pulse.R", "must lie in (0, 0.5)");

  if (root.has("noise")) {
    Obj o(root.at("noise"), "noise");
    o.num("dEz_rms", c.noise.dEz_rms);
    o.num("dVt_rms", c.noise.dVt_rms);
    o.integer("n_samples", c.noise.n_samples);
    o.u64("seed", c.noise.seed);
    if (o.has("dEz_rms_curve")) c.noise_curve = parse_axis(o.at("dEz_rms_curve"), "noise.dEz_rms_curve");
    o.finish();
    rekey("noise", [&] { c.noise.validate(); });
    for (double v : c.noise_curve)
      if (!(v >= 0)) throw ConfigError("noise.dEz_rms_curve", "values must be >= 0");
  }

  if (root.has("propagator")) c.design.propagator = parse_propagator(root.at("propagator"), "propagator");

  if (root.has("sweep")) {
    Obj o(root.at("sweep"), "sweep");
    SweepGrid g;
    g.delta_E_op = parse_axis(o.at("delta_E_op"), "sweep.delta_E_op");
    g.Vt_GHz = parse_axis(o.at("Vt_GHz"), "sweep.Vt_GHz");
    g.B0 = c.device.B0;
    o.num("B0", g.B0);
    o.finish();
    if (!(g.B0 > 0)) throw ConfigError("sweep.B0", "must be > 0");
    for (double v : g.Vt_GHz)
      if (!(v > 0)) throw ConfigError("sweep.Vt_GHz", "values must be > 0");
    rekey("", [&] { g.validate(); });
    c.sweep = g;
  }

  if (root.has("scan")) {
    Obj o(root.at("scan"), "scan");
    if (o.has("delta_E")) {
      Obj r(o.at("delta_E"), "scan.delta_E");
      r.num("start", c.scan.start);
      r.num("stop", c.scan.stop);
      r.integer("n", c.scan.n);
      r.finish();
      if (c.scan.n < 1) throw ConfigError("scan.delta_E.n", "must be >= 1");
      if (c.scan.n > 1 && !(c.scan.stop > c.scan.start)) throw ConfigError("scan.delta_E.stop", "must exceed start");
    }
    o.num("dEz_rms", c.scan_dEz_rms);
    o.finish();
    if (!(c.scan_dEz_rms > 0)) throw ConfigError("scan.dEz_rms", "must be > 0");
  }

  if (root.has("sensitivity")) {
    Obj o(root.at("sensitivity"), "sensitivity");
    c.deltas = parse_axis(o.at("deltas"), "sensitivity.deltas");
    o.finish();
  }

  if (root.has("t1")) {
    Obj o(root.at("t1"), "t1");
    for (auto [name, pt] : {std::pair{"i", &c.t1.i}, std::pair{"j", &c.t1.j}}) {
      if (!o.has(name)) continue;
      Obj q(o.at(name), std::string("t1.") + name);
      q.num("delta_E", pt->delta_E);
      double v = 0;
      if (q.has("B0")) q.num("B0", v), pt->B0 = v;
      if (q.has("Vt_over_2pi")) q.num("Vt_over_2pi", v), pt->Vt_over_2pi = v;
      q.finish();
      if (pt->B0 && !(*pt->B0 > 0)) throw ConfigError(q.key("B0"), "must be > 0");
      if (pt->Vt_over_2pi && !(*pt->Vt_over_2pi > 0)) throw ConfigError(q.key("Vt_over_2pi"), "must be > 0");
    }
    o.finish();
  }

  if (root.has("output")) {
    Obj o(root.at("output"), "output");
    o.str("path", c.output.path);
    o.str("format", c.output.format);
    o.finish();
    if (c.output.format != "csv" && c.output.format != "json")
      throw ConfigError("output.format", "must be \"csv\" or \"json\"");
  }
  root.finish();
  // the map designs the configured gate at every grid point
  if (c.sweep) {
    if (c.gate) c.sweep->axis = c.gate->axis, c.sweep->angle = c.gate->angle;
    c.sweep->rz = c.rz;
    c.sweep->rx = c.rx;
    c.sweep->design = c.design;
  }
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::stod(format12(x));
}

std::string format12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json to_json(const DeviceParams& p) {
  return {{"B0", round12(p.B0)},
          {"Vt_over_2pi", round12(p.Vt_over_2pi)},
          {"d", round12(p.d)},
          {"delta_gamma", round12(p.delta_gamma)},
          {"A_bulk_over_2pi", round12(p.A_bulk_over_2pi)},
          {"gamma_e_over_2pi", round12(p.gamma_e_over_2pi)},
          {"gamma_n_over_2pi", round12(p.gamma_n_over_2pi)}};
}

json to_json(const PlanckTaperPulse& p) {
  return {{"xi0", round12(p.xi0)},     {"xif", round12(p.xif)},     {"t_r", round12(p.ramp)},
          {"T", round12(p.duration)}, {"t0", round12(p.start)}, {"sigma", round12(p.sigma)}};
}

json to_json(const GateDesign& g) {
  json drive = {{"dc", to_json(g.drive.dc)},
                {"omega", round12(g.drive.omega)},
                {"phi", round12(g.drive.phi)},
                {"rho", round12(g.drive.rho)}};
  if (g.drive.has_ac()) drive["ac"] = to_json(g.drive.ac);
  json j = {{"axis", to_string(g.axis)},
            {"angle", round12(g.angle)},
            {"target", target_label(g.axis, g.angle)},
            {"params", to_json(g.params)},
            {"drive", drive},
            {"gate_time_ns", round12(g.gate_time())},
            {"predicted_T_ns", round12(g.predicted_T)},
            {"frame", g.frame == Frame::idle ? "idle" : "drive"}};
  if (g.axis == Axis::x) {
    j["E_ac_kVm"] = round12(g.E_ac);
    j["R"] = round12(g.R);
    j["Omega_R"] = round12(g.Omega_R);
    j["Rabi_MHz"] = round12(units::to_MHz(std::abs(g.Omega_R)));
    j["omega_GHz"] = round12(units::to_GHz(g.drive.omega));
    j["objective"] = round12(g.objective);
    j["sigma_ac"] = round12(g.sigma_ac);
  }
  return j;
}

namespace {

PlanckTaperPulse pulse_from_json(const json& j, const std::string& path) {
  Obj o(j, path);
  PlanckTaperPulse p;
  o.num("xi0", p.xi0);
  o.num("xif", p.xif);
  o.num("t_r", p.ramp);
  o.num("T", p.duration);
  o.num("t0", p.start);
  o.num("sigma", p.sigma);
  o.finish();
  rekey(path, [&] { p.validate(); });
  return p;
}

}  // namespace

GateDesign gate_design_from_json(const json& j) {
  Obj o(j, "design");
  GateDesign g;
  std::string axis = "z", frame = "idle", target;
  o.str("axis", axis);
  rekey("design", [&] { g.axis = axis_from_string(axis); });
  o.num("angle", g.angle);
  o.str("target", target);
  g.params = parse_device(o.at("params"), "design.params");
  {
    Obj d(o.at("drive"), "design.drive");
    g.drive.dc = pulse_from_json(d.at("dc"), "design.drive.dc");
    if (d.has("ac")) g.drive.ac = pulse_from_json(d.at("ac"), "design.drive.ac");
    d.num("omega", g.drive.omega);
    d.num("phi", g.drive.phi);
    d.num("rho", g.drive.rho);
    d.finish();
  }
  double ignored = 0.0;
  o.num("gate_time_ns", ignored);
  o.num("predicted_T_ns", g.predicted_T);
  o.str("frame", frame);
  if (frame == "idle") g.frame = Frame::idle;
  else if (frame == "drive") g.frame = Frame::drive;
  else throw ConfigError("design.frame", "must be \"idle\" or \"drive\"");
  o.num("E_ac_kVm", g.E_ac);
  o.num("R", g.R);
  o.num("Omega_R", g.Omega_R);
  o.num("Rabi_MHz", ignored);
  o.num("omega_GHz", ignored);
  o.num("objective", g.objective);
  o.num("sigma_ac", g.sigma_ac);
  o.finish();
  return g;
}

}  // namespace flipflop
