#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "gcm/circuit.hpp"
#include "gcm/model_grid.hpp"
#include "gcm/netlist.hpp"

namespace gcm {

// RC-triggered power clamp: R-top/C-bottom timer, odd inverter chain,
// big NMOS between the rails. All transistors bind to the model grid
// ensemble at (lg, wfin).
struct ClampConfig {
  double lg = 18.0;          // nm, design point applied to every device
  double wfin = 6.0;         // nm
  double por_lg = 18.0;      // nm, process-of-record reference point
  double por_wfin = 6.0;     // nm
  double vdd_nom = 0.75;     // V

  // Timer constant (3 us) is sized to hold the clamp on for the whole
  // 1 us ESD window; a shorter timer releases the BigFET mid-event and
  // lets the floating rail ring against the inverter chain.
  double r_timer = 300e3;    // ohm
  double c_timer = 10e-12;   // F
  int stages = 3;            // odd
  double nfin_n1 = 4.0;      // first inverter stage
  double nfin_p1 = 8.0;
  double stage_scale = 4.0;  // nfin multiplier per stage
  double nfin_bigfet = 20000.0;

  // event stimuli
  double esd_peak_a = 1.33;      // normalized dexp peak
  double esd_tau_rise = 10e-9;   // s
  double esd_tau_decay = 150e-9; // s
  double esd_window = 1e-6;      // s
  // Ramp slow enough that the timer only marginally trips the clamp
  // (peak tens of mA); faster ramps drive the BigFET fully on.
  double t_ramp = 10e-6;         // s, power-up ramp 0 -> vdd_nom
  double powerup_extra = 5e-6;   // s beyond the ramp
  double ft_settle = 10e-6;      // s at 0 V before the trigger step
  double ft_rise = 1e-9;         // s, step rise time
  double ft_window = 50e-6;      // s, recovery search window after the rise
  double recovery_factor = 1.5;  // x DC leakage
  double recovery_hold = 50e-9;  // s below threshold before recovered

  void validate() const;
};

ClampConfig parse_clamp_config(const std::string& text, const std::string& origin = "clamp config");
ClampConfig load_clamp_config(const std::filesystem::path& path);
std::string clamp_config_text(const ClampConfig& cfg);

enum class EsdEvent { Leakage, EsdPulse, Powerup, FalseTrigger };

struct EventSet {
  bool leakage = true;
  bool esd_pulse = true;
  bool powerup = true;
  bool false_trigger = true;
};

// Four figures of merit for one design point. NaN = not measured;
// recovery_resolved=false = window ended before the hold criterion.
struct MetricsReport {
  double lg = 0.0;
  double wfin = 0.0;
  double clamp_voltage = std::numeric_limits<double>::quiet_NaN();
  double leakage = std::numeric_limits<double>::quiet_NaN();
  double peak_powerup_current = std::numeric_limits<double>::quiet_NaN();
  double recovery_time = std::numeric_limits<double>::quiet_NaN();
  bool recovery_resolved = true;
  std::uint64_t config_digest = 0;
};

// Netlist for one event. Nodes: vdd, trig, s1..s<stages>; transistors
// Mp1/Mn1..Mp<k>/Mn<k> then Mbig last; the rail source (when the event
// has one) is named Vdd, the ESD stress source Iesd.
Netlist build_clamp_netlist(const ModelGrid& grid, const ClampConfig& cfg, EsdEvent event);

// Runs the selected events. leakage is also measured when
// false_trigger is requested (the recovery threshold needs it).
MetricsReport measure_all(const ModelGrid& grid, const ClampConfig& cfg,
                          const EventSet& events = {});

struct SweepRow {
  double lg = 0.0;
  double wfin = 0.0;
  bool ok = false;
  std::string error;  // out-of-hull / solver message when !ok
  MetricsReport metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // lg-major over the requested values
  MetricsReport por;           // measured at (por_lg, por_wfin)
};

SweepResult run_sweep(const ModelGrid& grid, const ClampConfig& cfg,
                      const std::vector<double>& lg_values,
                      const std::vector<double>& wfin_values, int jobs = 1,
                      const EventSet& events = {});

// Metric order used everywhere: clamp_v, leak_a, peak_a, recovery_s.
constexpr std::array<const char*, 4> kMetricNames = {"clamp_v", "leak_a", "peak_a", "recovery_s"};
std::array<double, 4> metric_values(const MetricsReport& m);

struct Improvement {
  std::string metric;
  double por = 0.0;
  double best = 0.0;
  double best_lg = 0.0;
  double best_wfin = 0.0;
  double improvement = 0.0;  // (por - best) / por; all metrics min-is-better
};
std::vector<Improvement> improvements(const SweepResult& sweep);

struct CorrelationMatrix {
  std::array<std::array<double, 4>, 4> r{};  // NaN where undefined
  std::array<bool, 4> defined{};             // >= 3 finite samples, nonzero variance
};
CorrelationMatrix correlation_matrix(const SweepResult& sweep);

struct McSample {
  std::size_t index = 0;
  double lg_raw = 0.0, wfin_raw = 0.0;  // Gaussian draw before clipping
  double lg = 0.0, wfin = 0.0;          // clipped to the grid hull
  bool clipped = false;
  MetricsReport metrics;
};

struct McSummary {
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  bool skew_defined = false;  // false when variance is zero
};

struct McResult {
  std::vector<McSample> samples;
  std::array<McSummary, 4> summary{};  // kMetricNames order
  std::uint64_t master_seed = 0;
  double sigma_lg = 0.0, sigma_wfin = 0.0;
  int clip_count = 0;
  EventSet events;
};

// Sample i draws from an independent substream of master_seed, so
// results are byte-identical for any jobs count.
McResult monte_carlo(const ModelGrid& grid, const ClampConfig& cfg, std::size_t n,
                     double sigma_lg, double sigma_wfin, std::uint64_t master_seed,
                     int jobs = 1, const EventSet& events = {});

std::string metrics_csv(const MetricsReport& m);
std::string sweep_csv(const SweepResult& sweep);       // lg_nm,wfin_nm,clamp_v,leak_a,peak_a,recovery_s
std::string improvements_csv(const std::vector<Improvement>& imp);
std::string correlations_csv(const CorrelationMatrix& cm);
std::string mc_csv(const McResult& mc);  // sample rows + '#' summary footer

}  // namespace gcm
