#include "gcm/esd_clamp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "gcm/errors.hpp"
#include "gcm/util.hpp"

namespace gcm {

void ClampConfig::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("clamp config: ") + name + " must be finite and > 0");
    }
  };
  pos(lg, "lg");
  pos(wfin, "wfin");
  pos(por_lg, "por_lg");
  pos(por_wfin, "por_wfin");
  pos(vdd_nom, "vdd_nom");
  pos(r_timer, "r_timer");
  pos(c_timer, "c_timer");
  pos(nfin_n1, "nfin_n1");
  pos(nfin_p1, "nfin_p1");
  pos(stage_scale, "stage_scale");
  pos(nfin_bigfet, "nfin_bigfet");
  pos(esd_peak_a, "esd_peak_a");
  pos(esd_tau_rise, "esd_tau_rise");
  pos(esd_tau_decay, "esd_tau_decay");
  pos(esd_window, "esd_window");
  pos(t_ramp, "t_ramp");
  pos(powerup_extra, "powerup_extra");
  pos(ft_settle, "ft_settle");
  pos(ft_rise, "ft_rise");
  pos(ft_window, "ft_window");
  pos(recovery_factor, "recovery_factor");
  pos(recovery_hold, "recovery_hold");
  if (stages < 1 || stages % 2 == 0) {
    throw ValidationError("clamp config: stages must be odd and >= 1 (inverting chain)");
  }
  if (nfin_n1 < 1.0 || nfin_p1 < 1.0 || nfin_bigfet < 1.0) {
    throw ValidationError("clamp config: fin counts must be >= 1");
  }
  if (!(esd_tau_decay > esd_tau_rise)) {
    throw ValidationError("clamp config: esd_tau_decay must exceed esd_tau_rise");
  }
}

namespace {

struct ClampField {
  const char* name;
  double ClampConfig::*member;
};

constexpr ClampField kClampFields[] = {
    {"lg", &ClampConfig::lg},
    {"wfin", &ClampConfig::wfin},
    {"por_lg", &ClampConfig::por_lg},
    {"por_wfin", &ClampConfig::por_wfin},
    {"vdd_nom", &ClampConfig::vdd_nom},
    {"r_timer", &ClampConfig::r_timer},
    {"c_timer", &ClampConfig::c_timer},
    {"nfin_n1", &ClampConfig::nfin_n1},
    {"nfin_p1", &ClampConfig::nfin_p1},
    {"stage_scale", &ClampConfig::stage_scale},
    {"nfin_bigfet", &ClampConfig::nfin_bigfet},
    {"esd_peak_a", &ClampConfig::esd_peak_a},
    {"esd_tau_rise", &ClampConfig::esd_tau_rise},
    {"esd_tau_decay", &ClampConfig::esd_tau_decay},
    {"esd_window", &ClampConfig::esd_window},
    {"t_ramp", &ClampConfig::t_ramp},
    {"powerup_extra", &ClampConfig::powerup_extra},
    {"ft_settle", &ClampConfig::ft_settle},
    {"ft_rise", &ClampConfig::ft_rise},
    {"ft_window", &ClampConfig::ft_window},
    {"recovery_factor", &ClampConfig::recovery_factor},
    {"recovery_hold", &ClampConfig::recovery_hold},
};

}  // namespace

ClampConfig parse_clamp_config(const std::string& text, const std::string& origin) {
  ClampConfig cfg;
  std::map<std::string, bool> seen;
  for (const KeyValue& kv : parse_key_value_text(text)) {
    if (seen[kv.key]) {
      throw ParseError(origin + ": duplicate key '" + kv.key + "'", kv.line, 1);
    }
    seen[kv.key] = true;
    double v = 0.0;
    try {
      v = parse_double(kv.value);
    } catch (const ValidationError& e) {
      throw ParseError(origin + ": key '" + kv.key + "': " + e.what(), kv.line, 1);
    }
    if (kv.key == "stages") {
      cfg.stages = static_cast<int>(v);
      if (static_cast<double>(cfg.stages) != v) {
        throw ParseError(origin + ": stages must be an integer", kv.line, 1);
      }
      continue;
    }
    bool matched = false;
    for (const auto& f : kClampFields) {
      if (kv.key == f.name) {
        cfg.*(f.member) = v;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(origin + ": unknown key '" + kv.key + "'", kv.line, 1);
    }
  }
  cfg.validate();
  return cfg;
}

ClampConfig load_clamp_config(const std::filesystem::path& path) {
  if (path == "defaults") return ClampConfig{};
  return parse_clamp_config(read_file(path), path.string());
}

std::string clamp_config_text(const ClampConfig& cfg) {
  std::ostringstream os;
  os << "# RC-triggered power clamp configuration\n";
  for (const auto& f : kClampFields) {
    os << f.name << " = " << format_g17(cfg.*(f.member)) << "\n";
  }
  os << "stages = " << cfg.stages << "\n";
  return os.str();
}

Netlist build_clamp_netlist(const ModelGrid& grid, const ClampConfig& cfg, EsdEvent event) {
  cfg.validate();
  Netlist nl;
  const int vdd = nl.node_id("vdd");
  const int trig = nl.node_id("trig");
  const Device* dev = nl.intern_ensemble(locate_and_weigh(grid, {cfg.lg, cfg.wfin}));

  nl.resistors.push_back({"Rtimer", vdd, trig, cfg.r_timer});
  nl.capacitors.push_back({"Ctimer", trig, kGroundNode, cfg.c_timer});

  int in = trig;
  double scale = 1.0;
  for (int k = 1; k <= cfg.stages; ++k) {
    const int out = nl.node_id("s" + std::to_string(k));
    nl.add_transistor("Mp" + std::to_string(k), out, in, vdd, vdd, dev, cfg.nfin_p1 * scale,
                      /*mirror_p=*/true);
    nl.add_transistor("Mn" + std::to_string(k), out, in, kGroundNode, kGroundNode, dev,
                      cfg.nfin_n1 * scale);
    in = out;
    scale *= cfg.stage_scale;
  }
  nl.add_transistor("Mbig", vdd, in, kGroundNode, kGroundNode, dev, cfg.nfin_bigfet);

  switch (event) {
    case EsdEvent::Leakage: {
      VSource v;
      v.name = "Vdd";
      v.np = vdd;
      v.nm = kGroundNode;
      v.stim = Stimulus::dc(cfg.vdd_nom);
      nl.vsources.push_back(std::move(v));
      nl.has_op = true;
      break;
    }
    case EsdEvent::EsdPulse: {
      // normalize i0 so the waveform peaks at esd_peak_a
      const Stimulus unit = Stimulus::dexp(1.0, cfg.esd_tau_rise, cfg.esd_tau_decay);
      const double peak = unit.value(unit.dexp_peak_time());
      ISource i;
      i.name = "Iesd";
      i.np = kGroundNode;  // + current np->nm: injects into the rail
      i.nm = vdd;
      i.stim = Stimulus::dexp(cfg.esd_peak_a / peak, cfg.esd_tau_rise, cfg.esd_tau_decay);
      nl.isources.push_back(std::move(i));
      nl.has_tran = true;
      nl.tstop = cfg.esd_window;
      break;
    }
    case EsdEvent::Powerup: {
      VSource v;
      v.name = "Vdd";
      v.np = vdd;
      v.nm = kGroundNode;
      v.stim = Stimulus::ramp(0.0, cfg.t_ramp, cfg.vdd_nom);
      nl.vsources.push_back(std::move(v));
      nl.has_tran = true;
      nl.tstop = cfg.t_ramp + cfg.powerup_extra;
      break;
    }
    case EsdEvent::FalseTrigger: {
      VSource v;
      v.name = "Vdd";
      v.np = vdd;
      v.nm = kGroundNode;
      v.stim = Stimulus::pwl({{0.0, 0.0},
                              {cfg.ft_settle, 0.0},
                              {cfg.ft_settle + cfg.ft_rise, cfg.vdd_nom}});
      nl.vsources.push_back(std::move(v));
      nl.has_tran = true;
      nl.tstop = cfg.ft_settle + cfg.ft_rise + cfg.ft_window;
      break;
    }
  }
  nl.check();
  return nl;
}

namespace {

double measure_leakage(const ModelGrid& grid, const ClampConfig& cfg) {
  Netlist nl = build_clamp_netlist(grid, cfg, EsdEvent::Leakage);
  SolverOptions opt;
  try {
    const DcResult dc = solve_dc(nl, opt);
    return std::abs(dc.branch_i.at(0));
  } catch (const SolverError& e) {
    throw SolverError(std::string("leakage event: ") + e.what());
  }
}

double measure_clamp_voltage(const ModelGrid& grid, const ClampConfig& cfg) {
  Netlist nl = build_clamp_netlist(grid, cfg, EsdEvent::EsdPulse);
  SolverOptions opt;
  opt.use_ic = true;  // floating rail starts discharged
  try {
    const TransientResult tr = solve_transient(nl, nl.tstop, opt);
    const int vdd = nl.find_node("vdd");
    double vmax = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      vmax = std::max(vmax, tr.v_at(k, vdd));
    }
    return vmax;
  } catch (const SolverError& e) {
    throw SolverError(std::string("esd_pulse event: ") + e.what());
  }
}

double measure_peak_powerup(const ModelGrid& grid, const ClampConfig& cfg) {
  Netlist nl = build_clamp_netlist(grid, cfg, EsdEvent::Powerup);
  SolverOptions opt;
  try {
    const TransientResult tr = solve_transient(nl, nl.tstop, opt);
    const std::size_t col = tr.node_names.size();  // single source branch
    double imax = 0.0;
    for (const auto& p : tr.points) imax = std::max(imax, std::abs(p[col]));
    return imax;
  } catch (const SolverError& e) {
    throw SolverError(std::string("powerup event: ") + e.what());
  }
}

struct RecoveryOutcome {
  double time = std::numeric_limits<double>::quiet_NaN();
  bool resolved = false;
};

RecoveryOutcome measure_recovery(const ModelGrid& grid, const ClampConfig& cfg,
                                 double dc_leakage) {
  Netlist nl = build_clamp_netlist(grid, cfg, EsdEvent::FalseTrigger);
  const int vdd = nl.find_node("vdd");
  const int gate = nl.find_node("s" + std::to_string(cfg.stages));
  const Transistor& bigfet = nl.transistors.back();
  const double threshold = cfg.recovery_factor * dc_leakage;
  const double t_rise_end = cfg.ft_settle + cfg.ft_rise;

  auto bigfet_id = [&](double v_vdd, double v_gate) {
    return std::abs(transistor_currents(bigfet, v_vdd, v_gate, 0.0, 0.0).id);
  };

  SolverOptions opt;
  double below_since = -1.0;
  opt.stop_condition = [&](double t, const std::vector<double>& x) {
    if (t < t_rise_end) return false;
    const double id = bigfet_id(x[static_cast<std::size_t>(vdd)],
                                x[static_cast<std::size_t>(gate)]);
    if (id < threshold) {
      if (below_since < 0.0) below_since = t;
      return t - below_since >= cfg.recovery_hold;
    }
    below_since = -1.0;
    return false;
  };

  TransientResult tr;
  try {
    tr = solve_transient(nl, nl.tstop, opt);
  } catch (const SolverError& e) {
    throw SolverError(std::string("false_trigger event: ") + e.what());
  }

  // Locate the final below-threshold streak and check the hold window.
  std::vector<double> id_at(tr.times.size());
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    id_at[k] = bigfet_id(tr.v_at(k, vdd), tr.v_at(k, gate));
  }
  RecoveryOutcome out;
  std::size_t streak_start = tr.times.size();
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    if (tr.times[k] < t_rise_end) continue;
    if (id_at[k] < threshold) {
      if (streak_start == tr.times.size()) streak_start = k;
      if (tr.times[k] - tr.times[streak_start] >= cfg.recovery_hold) {
        // crossing between streak_start-1 and streak_start, interpolated
        // in log current (the decay is exponential)
        double t_cross = tr.times[streak_start];
        if (streak_start > 0 && id_at[streak_start - 1] >= threshold &&
            id_at[streak_start] > 0.0) {
          const double la = std::log(id_at[streak_start - 1]);
          const double lb = std::log(id_at[streak_start]);
          const double lt = std::log(threshold);
          const double f = (la - lt) / (la - lb);
          t_cross = tr.times[streak_start - 1] +
                    f * (tr.times[streak_start] - tr.times[streak_start - 1]);
        }
        out.time = t_cross - t_rise_end;
        out.resolved = true;
        return out;
      }
    } else {
      streak_start = tr.times.size();
    }
  }
  return out;  // window exhausted without a held recovery
}

}  // namespace

MetricsReport measure_all(const ModelGrid& grid, const ClampConfig& cfg, const EventSet& events) {
  cfg.validate();
  MetricsReport rep;
  rep.lg = cfg.lg;
  rep.wfin = cfg.wfin;
  rep.config_digest = config_digest(clamp_config_text(cfg));
  if (events.leakage || events.false_trigger) {
    rep.leakage = measure_leakage(grid, cfg);
  }
  if (events.esd_pulse) {
    rep.clamp_voltage = measure_clamp_voltage(grid, cfg);
  }
  if (events.powerup) {
    rep.peak_powerup_current = measure_peak_powerup(grid, cfg);
  }
  if (events.false_trigger) {
    const RecoveryOutcome rec = measure_recovery(grid, cfg, rep.leakage);
    rep.recovery_time = rec.time;
    rep.recovery_resolved = rec.resolved;
  }
  return rep;
}

std::array<double, 4> metric_values(const MetricsReport& m) {
  return {m.clamp_voltage, m.leakage, m.peak_powerup_current, m.recovery_time};
}

namespace {

// Index-sharded worker pool; slot-addressed results keep output bytes
// independent of scheduling.
void run_jobs(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  const int nthreads = std::min<int>(jobs, static_cast<int>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int w = 0; w < nthreads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = static_cast<std::size_t>(w); i < count;
           i += static_cast<std::size_t>(nthreads)) {
        work(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepResult run_sweep(const ModelGrid& grid, const ClampConfig& cfg,
                      const std::vector<double>& lg_values,
                      const std::vector<double>& wfin_values, int jobs, const EventSet& events) {
  if (lg_values.empty() || wfin_values.empty()) {
    throw ValidationError("run_sweep: empty axis values");
  }
  SweepResult out;
  out.rows.resize(lg_values.size() * wfin_values.size());
  run_jobs(out.rows.size(), jobs, [&](std::size_t i) {
    const double lg = lg_values[i / wfin_values.size()];
    const double wfin = wfin_values[i % wfin_values.size()];
    SweepRow& row = out.rows[i];
    row.lg = lg;
    row.wfin = wfin;
    ClampConfig point_cfg = cfg;
    point_cfg.lg = lg;
    point_cfg.wfin = wfin;
    try {
      row.metrics = measure_all(grid, point_cfg, events);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });
  ClampConfig por_cfg = cfg;
  por_cfg.lg = cfg.por_lg;
  por_cfg.wfin = cfg.por_wfin;
  out.por = measure_all(grid, por_cfg, events);
  return out;
}

std::vector<Improvement> improvements(const SweepResult& sweep) {
  std::vector<Improvement> out;
  const std::array<double, 4> por = metric_values(sweep.por);
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    Improvement imp;
    imp.metric = kMetricNames[k];
    imp.por = por[k];
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : sweep.rows) {
      if (!row.ok) continue;
      const double v = metric_values(row.metrics)[k];
      if (std::isfinite(v) && v < best) {
        best = v;
        imp.best_lg = row.lg;
        imp.best_wfin = row.wfin;
      }
    }
    imp.best = best;
    imp.improvement = (std::isfinite(por[k]) && por[k] != 0.0 && std::isfinite(best))
                          ? (por[k] - best) / por[k]
                          : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(imp));
  }
  return out;
}

CorrelationMatrix correlation_matrix(const SweepResult& sweep) {
  CorrelationMatrix cm;
  std::array<std::vector<double>, 4> series;
  for (const auto& row : sweep.rows) {
    if (!row.ok) continue;
    const auto v = metric_values(row.metrics);
    for (std::size_t k = 0; k < 4; ++k) series[k].push_back(v[k]);
  }
  auto finite_variance = [](const std::vector<double>& s) {
    std::vector<double> f;
    for (double v : s) {
      if (std::isfinite(v)) f.push_back(v);
    }
    if (f.size() < 3) return false;
    const Moments m = moments(f);
    return m.m2 > 0.0;
  };
  for (std::size_t k = 0; k < 4; ++k) cm.defined[k] = finite_variance(series[k]);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) cm.r[i][j] = nan;
    if (cm.defined[i]) cm.r[i][i] = 1.0;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (!cm.defined[i] || !cm.defined[j]) continue;
      std::vector<double> xi, xj;
      for (std::size_t s = 0; s < series[i].size(); ++s) {
        if (std::isfinite(series[i][s]) && std::isfinite(series[j][s])) {
          xi.push_back(series[i][s]);
          xj.push_back(series[j][s]);
        }
      }
      if (xi.size() < 3) continue;
      try {
        cm.r[i][j] = cm.r[j][i] = pearson(xi, xj);
      } catch (const ValidationError&) {
        // paired subset degenerate: leave NaN
      }
    }
  }
  return cm;
}

McResult monte_carlo(const ModelGrid& grid, const ClampConfig& cfg, std::size_t n,
                     double sigma_lg, double sigma_wfin, std::uint64_t master_seed, int jobs,
                     const EventSet& events) {
  if (n == 0) throw ValidationError("monte_carlo: n must be >= 1");
  if (sigma_lg < 0.0 || sigma_wfin < 0.0) {
    throw ValidationError("monte_carlo: sigma values must be >= 0");
  }
  grid.validate();
  McResult out;
  out.master_seed = master_seed;
  out.sigma_lg = sigma_lg;
  out.sigma_wfin = sigma_wfin;
  out.events = events;
  out.samples.resize(n);

  const double lg_lo = grid.axis1.front(), lg_hi = grid.axis1.back();
  const double w_lo = grid.axis2.front(), w_hi = grid.axis2.back();
  const auto seed_lo = static_cast<std::uint32_t>(master_seed & 0xffffffffu);
  const auto seed_hi = static_cast<std::uint32_t>(master_seed >> 32);

  run_jobs(n, jobs, [&](std::size_t i) {
    McSample& s = out.samples[i];
    s.index = i;
    // independent substream per sample: order of execution cannot matter
    std::seed_seq seq{seed_lo, seed_hi, static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    auto uniform = [&rng]() {
      // in (0, 1]: log-safe for Box-Muller
      return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
    };
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double z0 = r * std::cos(2.0 * M_PI * u2);
    const double z1 = r * std::sin(2.0 * M_PI * u2);
    s.lg_raw = cfg.por_lg + sigma_lg * z0;
    s.wfin_raw = cfg.por_wfin + sigma_wfin * z1;
    s.lg = std::clamp(s.lg_raw, lg_lo, lg_hi);
    s.wfin = std::clamp(s.wfin_raw, w_lo, w_hi);
    s.clipped = (s.lg != s.lg_raw) || (s.wfin != s.wfin_raw);
    ClampConfig sample_cfg = cfg;
    sample_cfg.lg = s.lg;
    sample_cfg.wfin = s.wfin;
    s.metrics = measure_all(grid, sample_cfg, events);
  });

  for (const auto& s : out.samples) {
    if (s.clipped) ++out.clip_count;
  }
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<double> vals;
    for (const auto& s : out.samples) {
      const double v = metric_values(s.metrics)[k];
      if (std::isfinite(v)) vals.push_back(v);
    }
    McSummary& sum = out.summary[k];
    if (vals.empty()) continue;
    const Moments m = moments(vals);
    sum.mean = m.mean;
    sum.stddev = std::sqrt(m.m2);
    if (m.m2 > 0.0) {
      sum.skewness = m.m3 / std::pow(m.m2, 1.5);
      sum.skew_defined = true;
    }
  }
  return out;
}

std::string metrics_csv(const MetricsReport& m) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "lg_nm," << format_g17(m.lg) << "\n";
  os << "wfin_nm," << format_g17(m.wfin) << "\n";
  const auto v = metric_values(m);
  for (std::size_t k = 0; k < 4; ++k) {
    os << kMetricNames[k] << ',' << format_g17(v[k]) << "\n";
  }
  os << "recovery_resolved," << (m.recovery_resolved ? 1 : 0) << "\n";
  os << "config_digest," << digest_hex(m.config_digest) << "\n";
  return os.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "lg_nm,wfin_nm,clamp_v,leak_a,peak_a,recovery_s\n";
  for (const auto& row : sweep.rows) {
    if (!row.ok) continue;
    const auto v = metric_values(row.metrics);
    os << format_g17(row.lg) << ',' << format_g17(row.wfin);
    for (double x : v) os << ',' << format_g17(x);
    os << "\n";
  }
  return os.str();
}

std::string improvements_csv(const std::vector<Improvement>& imp) {
  std::ostringstream os;
  os << "metric,por,best,best_lg_nm,best_wfin_nm,improvement\n";
  for (const auto& i : imp) {
    os << i.metric << ',' << format_g17(i.por) << ',' << format_g17(i.best) << ','
       << format_g17(i.best_lg) << ',' << format_g17(i.best_wfin) << ','
       << format_g17(i.improvement) << "\n";
  }
  return os.str();
}

std::string correlations_csv(const CorrelationMatrix& cm) {
  std::ostringstream os;
  os << "metric";
  for (const char* name : kMetricNames) os << ',' << name;
  os << "\n";
  for (std::size_t i = 0; i < 4; ++i) {
    os << kMetricNames[i];
    for (std::size_t j = 0; j < 4; ++j) os << ',' << format_g17(cm.r[i][j]);
    os << "\n";
  }
  return os.str();
}

std::string mc_csv(const McResult& mc) {
  std::ostringstream os;
  os << "index,lg_raw_nm,wfin_raw_nm,lg_nm,wfin_nm,clipped,clamp_v,leak_a,peak_a,recovery_s\n";
  for (const auto& s : mc.samples) {
    os << s.index << ',' << format_g17(s.lg_raw) << ',' << format_g17(s.wfin_raw) << ','
       << format_g17(s.lg) << ',' << format_g17(s.wfin) << ',' << (s.clipped ? 1 : 0);
    for (double v : metric_values(s.metrics)) os << ',' << format_g17(v);
    os << "\n";
  }
  os << "# summary\n";
  os << "# metric,mean,stddev,skewness,skew_defined\n";
  for (std::size_t k = 0; k < 4; ++k) {
    const McSummary& s = mc.summary[k];
    os << "# " << kMetricNames[k] << ',' << format_g17(s.mean) << ',' << format_g17(s.stddev)
       << ',' << format_g17(s.skewness) << ',' << (s.skew_defined ? 1 : 0) << "\n";
  }
  os << "# master_seed = " << mc.master_seed << "\n";
  os << "# sigma_lg_nm = " << format_g17(mc.sigma_lg) << "\n";
  os << "# sigma_wfin_nm = " << format_g17(mc.sigma_wfin) << "\n";
  os << "# clip_count = " << mc.clip_count << "\n";
  return os.str();
}

}  // namespace gcm
