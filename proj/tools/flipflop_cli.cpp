// flipflop: command-line front end.
//
//   flipflop <subcommand> --config run.json [--out path] [--seed n] [--threads n] [--samples n]

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flipflop/config.hpp"
#include "flipflop/effective.hpp"
#include "flipflop/hamiltonian.hpp"
#include "flipflop/io.hpp"
#include "flipflop/noise.hpp"

using namespace flipflop;
using nlohmann::json;

namespace {

struct Flags {
  std::string config, out, design;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  int threads = 0;
};

std::string num(double x) { return format12(x); }

void emit(const RunConfig& c, const Table& t) {
  write_text(c.output.path, c.output.format == "json" ? to_json_text(t) : to_csv(t));
}

void emit(const RunConfig& c, const json& j) { write_text(c.output.path, j.dump(2) + "\n"); }

RunOptions run_options(const RunConfig& c, const Flags& f) { return {f.threads, c.design.propagator}; }

GateDesign design_from(const RunConfig& c, Axis axis) {
  const GateSpec& g = c.require_gate();
  return axis == Axis::z ? design_rz(c.device, g.angle, c.rz, c.design) : design_rx(c.device, g.angle, c.rx, c.design);
}

GateDesign design_for(const RunConfig& c, const Flags& f) {
  if (!f.design.empty()) {
    std::ifstream in(f.design);
    if (!in) throw ConfigError("--design", "cannot open " + f.design);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("--design", std::string("malformed JSON: ") + e.what());
    }
    return gate_design_from_json(j);
  }
  return design_from(c, c.require_gate().axis);
}

void cmd_spectrum(const RunConfig& c) {
  Table t;
  t.header = {"delta_E_kVm"};
  for (int k = 1; k <= 8; ++k) t.header.push_back("E" + std::to_string(k) + "_GHz");
  for (double x : c.scan.values()) {
    const auto s = eigen_spectrum(build_full_hamiltonian<double>(c.device, x));
    std::vector<std::string> row{num(x)};
    for (int k = 0; k < 8; ++k) row.push_back(num(units::to_GHz(s.values(k))));
    t.add(row);
  }
  emit(c, t);
}

void cmd_eff(const RunConfig& c) {
  Table t;
  t.header = {"delta_E_kVm", "eps_ff_GHz", "gap_numeric_GHz", "rel_error", "slope_MHz_per_kVm", "dephasing_rate_MHz"};
  const std::string nan = "nan";
  for (double x : c.scan.values()) {
    const double gap = numerical_transition_energy<double>(c.device, x);
    try {
      const double e = flipflop_transition_energy<double>(c.device, x);
      t.add({num(x), num(units::to_GHz(e)), num(units::to_GHz(gap)), num(std::abs(e - gap) / gap),
             num(units::to_MHz(transition_energy_slope(c.device, x))),
             num(units::to_MHz(dephasing_rate_estimate(c.device, x, c.scan_dEz_rms)))});
    } catch (const DegenerateRegimeError&) {
      t.add({num(x), nan, num(units::to_GHz(gap)), nan, nan, nan});
    }
  }
  emit(c, t);
}

void cmd_design(const RunConfig& c, Axis axis) { emit(c, to_json(design_from(c, axis))); }

void cmd_simulate(const RunConfig& c, const Flags& f) {
  const GateDesign g = design_for(c, f);
  const GateResult r = simulate(g, c.design.propagator);
  const FidelityResult fr = average_gate_fidelity(r, g.target());
  json u = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int k = 0; k < 2; ++k) row.push_back({round12(r.U_logical(i, k).real()), round12(r.U_logical(i, k).imag())});
    u.push_back(row);
  }
  emit(c, json{{"target", target_label(g.axis, g.angle)},
               {"gate_time_ns", round12(g.gate_time())},
               {"F", round12(fr.F)},
               {"infidelity", round12(fr.infidelity())},
               {"m", fr.m},
               {"leakage", round12(r.leakage)},
               {"U_logical", u}});
}

void cmd_noise_avg(const RunConfig& c, const Flags& f) {
  const GateDesign g = design_for(c, f);
  const RunOptions opt = run_options(c, f);
  Table t;
  t.header = {"dEz_rms_Vm",       "dVt_rms_MHz",       "mean_infidelity",     "std_error",
              "field_only_infidelity", "field_only_std_error", "delta_infidelity", "delta_std_error",
              "mean_gate_time_ns", "n_samples",         "seed"};
  const std::vector<double> curve = c.noise_curve.empty() ? std::vector<double>{c.noise.dEz_rms} : c.noise_curve;
  for (double ez : curve) {
    NoiseModel m = c.noise;
    m.dEz_rms = ez;
    const TunnelNoiseDelta d = tunnel_noise_delta(g, m, opt);
    t.add({num(ez), num(m.dVt_rms), num(d.both.mean_infidelity), num(d.both.std_error),
           num(d.field_only.mean_infidelity), num(d.field_only.std_error), num(d.delta), num(d.std_error),
           num(d.both.mean_gate_time), std::to_string(d.both.n), std::to_string(m.seed)});
  }
  emit(c, t);
}

void cmd_map(const RunConfig& c, const Flags& f) {
  if (!c.sweep) throw ConfigError("sweep", "required block missing");
  c.require_gate();
  emit(c, map_table(sweep_infidelity_map(*c.sweep, c.device, c.noise, run_options(c, f))));
}

void cmd_sensitivity(const RunConfig& c, const Flags& f) {
  const GateDesign g = design_for(c, f);
  Table t;
  t.header = {"dt_ns", "gate_time_ns", "mean_infidelity", "std_error", "n_samples", "seed"};
  for (const auto& r : pulse_length_sensitivity(g, c.deltas, c.noise, run_options(c, f)))
    t.add({num(r.dt), num(r.stat.mean_gate_time), num(r.stat.mean_infidelity), num(r.stat.std_error),
           std::to_string(r.stat.n), std::to_string(c.noise.seed)});
  emit(c, t);
}

void cmd_t1_ratio(const RunConfig& c) {
  auto set = [&](const T1Spec::Point& pt) {
    DeviceParams p = c.device;
    if (pt.B0) p.B0 = *pt.B0;
    if (pt.Vt_over_2pi) p.Vt_over_2pi = *pt.Vt_over_2pi;
    p.validate();
    return t1_parameter_set(p, pt.delta_E);
  };
  const double r = t1_ratio({set(c.t1.i), set(c.t1.j)});
  Table t;
  t.header = {"delta_E_i_kVm", "delta_E_j_kVm", "ratio", "log10_ratio"};
  t.add({num(c.t1.i.delta_E), num(c.t1.j.delta_E), num(r), num(std::log10(r))});
  emit(c, t);
}

int fail(int code, const std::string& type, const std::string& key, const std::string& msg) {
  json e = {{"type", type}, {"message", msg}};
  if (!key.empty()) e["key"] = key;
  std::cerr << json{{"error", e}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flip-flop qubit simulator and gate designer"};
  app.require_subcommand(1, 1);
  Flags f;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"spectrum", "eigenvalues of the full Hamiltonian versus detuning"},
      {"eff", "effective transition energy, slope and dephasing estimate versus detuning"},
      {"design-rz", "design a z rotation"},
      {"design-rx", "design an x rotation"},
      {"simulate", "noiseless simulation of one gate"},
      {"noise-avg", "quasi-static noise averaged infidelity"},
      {"map", "infidelity map over (delta_E_op, Vt)"},
      {"sensitivity", "infidelity versus pulse length error"},
      {"t1-ratio", "relaxation time ratio between two operating points"}};
  for (const auto& [name, help] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", f.config, "run configuration (JSON)")->required();
    s->add_option("--out", f.out, "output path, overrides output.path");
    s->add_option("--seed", f.seed, "noise seed, overrides noise.seed");
    s->add_option("--threads", f.threads, "worker threads (default FLIPFLOP_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    s->add_option("--samples", f.samples, "noise samples, overrides noise.n_samples")->check(CLI::PositiveNumber);
    if (name == "simulate" || name == "noise-avg" || name == "sensitivity")
      s->add_option("--design", f.design, "use a saved design JSON instead of designing from the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", "", e.what());
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    RunConfig c = load_config(f.config);
    if (!f.out.empty()) c.output.path = f.out;
    if (f.seed) c.noise.seed = *f.seed;
    if (f.samples) c.noise.n_samples = *f.samples;

    if (cmd == "spectrum") cmd_spectrum(c);
    else if (cmd == "eff") cmd_eff(c);
    else if (cmd == "design-rz") cmd_design(c, Axis::z);
    else if (cmd == "design-rx") cmd_design(c, Axis::x);
    else if (cmd == "simulate") cmd_simulate(c, f);
    else if (cmd == "noise-avg") cmd_noise_avg(c, f);
    else if (cmd == "map") cmd_map(c, f);
    else if (cmd == "sensitivity") cmd_sensitivity(c, f);
    else if (cmd == "t1-ratio") cmd_t1_ratio(c);
  } catch (const ConfigError& e) {
    return fail(2, "config", e.key(), e.what());
  } catch (const NumericalError& e) {
    return fail(3, "numerical", "", e.what());
  } catch (const std::exception& e) {
    return fail(1, "io", "", e.what());
  }
  return 0;
}
