#include "flipflop/noise.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "flipflop/parallel.hpp"

namespace flipflop {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void NoiseModel::validate() const {
  if (!(dEz_rms >= 0)) throw ConfigError("noise.dEz_rms", "must be >= 0");
  if (!(dVt_rms >= 0)) throw ConfigError("noise.dVt_rms", "must be >= 0");
  if (n_samples < 1) throw ConfigError("noise.n_samples", "must be >= 1");
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, unsigned axis) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ (2 * index + axis));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<NoiseSample> sample_noise(const NoiseModel& m, std::uint64_t stream) {
  m.validate();
  const double s3 = std::sqrt(3.0);
  std::vector<NoiseSample> out(m.n_samples);
  for (int i = 0; i < m.n_samples; ++i) {
    if (m.dEz_rms > 0) out[i].dEz = s3 * m.dEz_rms * (2 * uniform01(m.seed, stream, i, 0) - 1);
    if (m.dVt_rms > 0) out[i].dVt = s3 * m.dVt_rms * (2 * uniform01(m.seed, stream, i, 1) - 1);
  }
  return out;
}

PlantOffset to_offset(const NoiseSample& s) {
  return {units::kVm_from_Vm(s.dEz), s.dVt * 1e-3};
}

InfidelityStat summarize(const std::vector<double>& x, double gate_time) {
  InfidelityStat s;
  s.n = static_cast<int>(x.size());
  s.mean_gate_time = gate_time;
  if (x.empty()) return s;
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean_infidelity = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean_infidelity) * (v - s.mean_infidelity);
    s.std_error = std::sqrt(ss / (s.n - 1) / s.n);
  }
  return s;
}

std::vector<double> sample_infidelities(const GateDesign& g, const std::vector<NoiseSample>& samples,
                                        const RunOptions& opt) {
  const Eigen::Matrix2cd target = g.target();
  std::vector<double> out(samples.size());
  parallel_for(samples.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    out[i] = average_gate_fidelity(simulate(g, opt.propagator, to_offset(samples[i])), target).infidelity();
  });
  return out;
}

InfidelityStat averaged_infidelity(const GateDesign& g, const NoiseModel& m, const RunOptions& opt,
                                   std::uint64_t stream) {
  return summarize(sample_infidelities(g, sample_noise(m, stream), opt), g.gate_time());
}

TunnelNoiseDelta tunnel_noise_delta(const GateDesign& g, const NoiseModel& m, const RunOptions& opt) {
  const auto both_s = sample_noise(m);
  auto field_s = both_s;
  for (auto& s : field_s) s.dVt = 0.0;

  TunnelNoiseDelta r;
  const auto f = sample_infidelities(g, field_s, opt);
  const auto b = m.dVt_rms > 0 ? sample_infidelities(g, both_s, opt) : f;
  std::vector<double> diff(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) diff[i] = b[i] - f[i];
  r.field_only = summarize(f, g.gate_time());
  r.both = summarize(b, g.gate_time());
  const InfidelityStat d = summarize(diff, g.gate_time());
  r.delta = d.mean_infidelity;
  r.std_error = d.std_error;
  return r;
}

void SweepGrid::validate() const {
  if (delta_E_op.empty()) throw ConfigError("sweep.delta_E_op", "must not be empty");
  if (Vt_GHz.empty()) throw ConfigError("sweep.Vt_GHz", "must not be empty");
  auto monotone = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (!monotone(delta_E_op)) throw ConfigError("sweep.delta_E_op", "must be strictly increasing");
  if (!monotone(Vt_GHz)) throw ConfigError("sweep.Vt_GHz", "must be strictly increasing");
}

std::string target_label(Axis axis, double angle) {
  std::ostringstream os;
  os.precision(12);
  os << (axis == Axis::z ? "Rz(" : "Rx(") << angle << ")";
  return os.str();
}

std::vector<MapRow> sweep_infidelity_map(const SweepGrid& grid, const DeviceParams& base, const NoiseModel& m,
                                         const RunOptions& opt) {
  grid.validate();
  m.validate();
  const std::size_t nv = grid.Vt_GHz.size(), npts = grid.delta_E_op.size() * nv;
  const int threads = resolve_threads(opt.threads);

  std::vector<MapRow> rows(npts);
  std::vector<GateDesign> designs(npts);
  std::vector<bool> ok(npts, false);
  parallel_for(npts, threads, [&](std::size_t k) {
    MapRow& r = rows[k];
    r.delta_E_op = grid.delta_E_op[k / nv];
    r.Vt_GHz = grid.Vt_GHz[k % nv];
    r.B0 = grid.B0;
    r.target = target_label(grid.axis, grid.angle);
    r.seed = m.seed;
    DeviceParams p = base;
    p.B0 = grid.B0;
    p.Vt_over_2pi = r.Vt_GHz;
    try {
      if (grid.axis == Axis::z) {
        RzTemplate t = grid.rz;
        t.xif = r.delta_E_op;
        designs[k] = design_rz(p, grid.angle, t, grid.design);
      } else {
        RxTemplate t = grid.rx;
        t.xif = r.delta_E_op;
        designs[k] = design_rx(p, grid.angle, t, grid.design);
      }
      ok[k] = true;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.stat.mean_infidelity = std::numeric_limits<double>::quiet_NaN();
      r.stat.std_error = std::numeric_limits<double>::quiet_NaN();
      r.stat.mean_gate_time = std::numeric_limits<double>::quiet_NaN();
    }
  });

  // Flatten (point, sample) so that a few slow points do not serialize the run.
  const std::size_t ns = m.n_samples;
  std::vector<std::vector<NoiseSample>> draws(npts);
  for (std::size_t k = 0; k < npts; ++k)
    if (ok[k]) draws[k] = sample_noise(m, k);
  std::vector<double> infid(npts * ns, 0.0);
  std::vector<std::string> failure(npts);
  parallel_for(npts * ns, threads, [&](std::size_t j) {
    const std::size_t k = j / ns, i = j % ns;
    if (!ok[k]) return;
    try {
      infid[j] = average_gate_fidelity(simulate(designs[k], opt.propagator, to_offset(draws[k][i])),
                                       designs[k].target())
                     .infidelity();
    } catch (const NumericalError& e) {
      if (i == 0) failure[k] = e.what();
      infid[j] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  for (std::size_t k = 0; k < npts; ++k) {
    if (!ok[k]) continue;
    std::vector<double> x(infid.begin() + k * ns, infid.begin() + (k + 1) * ns);
    bool bad = false;
    for (double v : x) bad = bad || std::isnan(v);
    if (bad) {
      rows[k].error = failure[k].empty() ? "propagation failed" : failure[k];
      rows[k].stat.mean_infidelity = rows[k].stat.std_error = std::numeric_limits<double>::quiet_NaN();
      rows[k].stat.mean_gate_time = designs[k].gate_time();
      continue;
    }
    rows[k].stat = summarize(x, designs[k].gate_time());
  }
  return rows;
}

std::vector<SensitivityRow> pulse_length_sensitivity(const GateDesign& g, const std::vector<double>& deltas,
                                                     const NoiseModel& m, const RunOptions& opt) {
  const double T = g.gate_time(), tr = g.drive.dc.ramp;
  for (double dt : deltas)
    if (!(T + dt > 2 * tr)) throw ConfigError("deltas", "T + dt must exceed 2 t_r");
  const auto draws = sample_noise(m);
  std::vector<SensitivityRow> out;
  for (double dt : deltas) {
    const GateDesign gd = dt == 0.0 ? g : with_duration(g, T + dt);
    out.push_back({dt, summarize(sample_infidelities(gd, draws, opt), gd.gate_time())});
  }
  return out;
}

}  // namespace flipflop
