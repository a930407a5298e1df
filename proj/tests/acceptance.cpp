// Acceptance gate for the shipped pipeline. Runs one numbered criterion
// (--criterion N) or all of them, prints the measured values each verdict
// rests on, and one line per criterion:
//
//   criterion N: PASS | FAIL
//
// The process exit code is the total number of failed checks, so 0 means
// a fully green gate. Criterion 6 contains one check that fails by
// design on this implementation; see README "Known failing check".
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "gcm/calibration.hpp"
#include "gcm/circuit.hpp"
#include "gcm/compact_model.hpp"
#include "gcm/esd_clamp.hpp"
#include "gcm/model_grid.hpp"
#include "gcm/netlist.hpp"
#include "gcm/stimulus.hpp"
#include "gcm/util.hpp"

using namespace gcm;

namespace {

struct Gate {
  int failed = 0;
  void check(bool ok, const std::string& what) {
    std::cout << "  [" << (ok ? " ok " : "FAIL") << "] " << what << "\n";
    if (!ok) ++failed;
  }
  void note(const std::string& text) { std::cout << "  note: " << text << "\n"; }
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void check_budget(Gate& g, const Stopwatch& sw, double budget_s) {
  const double s = sw.seconds();
  g.check(s < budget_s,
          "runtime " + format_g17(s) + " s within " + format_g17(budget_s) + " s budget");
}

std::string fmt(double v) { return format_g17(v); }

// Synthetic lattice with per-node parameter variation; coordinates are
// pinned to the axes so the grid passes validation.
ModelGrid varied_grid(const std::vector<double>& axis1, const std::vector<double>& axis2) {
  ModelGrid grid;
  grid.axis1 = axis1;
  grid.axis2 = axis2;
  for (std::size_t i1 = 0; i1 < axis1.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < axis2.size(); ++i2) {
      ModelCard card;
      card.lg = axis1[i1];
      card.wfin = axis2[i2];
      card.vt0 = 0.30 + 0.004 * static_cast<double>(i1) - 0.003 * static_cast<double>(i2);
      card.dibl = 0.04 + 0.002 * static_cast<double>(i2);
      card.k_gain = 1e-4 * (1.0 + 0.05 * static_cast<double>(i1 + i2));
      card.cov = 2e-17;
      card.cch_max = 8e-17;
      grid.cards.push_back(card);
    }
  }
  return grid;
}

// Calibrated grids used by the pipeline criteria. Static so a run over
// all criteria calibrates each lattice once.
const GridCalibration& device_calibration() {
  static const GridCalibration gc = calibrate_grid(
      default_oracle_params(), {14.5, 15.5, 16.5, 17.5, 18.5}, {5.1, 6.1, 7.1, 8.1});
  return gc;
}

const ModelGrid& clamp_grid() {
  static const ModelGrid grid = calibrate_grid(default_oracle_params(),
                                               {14.5, 15.5, 16.5, 17.5, 18.5},
                                               {4.1, 5.1, 6.1, 7.1})
                                    .grid;
  return grid;
}

const SweepResult& clamp_sweep() {
  static const SweepResult sweep = run_sweep(clamp_grid(), ClampConfig{},
                                             {14.5, 15.5, 16.5, 17.5, 18.5},
                                             {4.1, 5.1, 6.1, 7.1});
  return sweep;
}

std::vector<double> simulate_ensemble(const EnsembleDevice& dev, const IvDataset& ref) {
  std::vector<double> sim(ref.id.size(), 0.0);
  for (std::size_t ivd = 0; ivd < ref.vd_values.size(); ++ivd) {
    for (std::size_t ivg = 0; ivg < ref.vg_values.size(); ++ivg) {
      const BiasPoint bias{ref.vd_values[ivd], ref.vg_values[ivg], 0.0, 0.0};
      sim[ref.index(ivd, ivg)] = dev.currents(bias, 1.0).id;
    }
  }
  return sim;
}

// ---------------------------------------------------------------------
// 1. Corner-weight formula at the reference query (17.8, 6.3)
int criterion_1() {
  Gate g;
  Stopwatch sw;
  const ModelGrid grid = varied_grid({17.5, 18.5}, {6.1, 7.1});
  const GeneralModel gm = locate_and_weigh(grid, {17.8, 6.3});

  const std::array<double, 4> expected = {0.44318, 0.18702, 0.15032, 0.21949};
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = gm.corners[k].weight;
    sum += w;
    g.check(std::abs(w - expected[k]) < 1e-4,
            "weight[" + std::to_string(k) + "] = " + fmt(w) + " vs " + fmt(expected[k]) +
                " (tol 1e-4)");
  }
  g.check(std::abs(sum - 1.0) <= 1e-12, "weight sum = " + fmt(sum) + " (|sum-1| <= 1e-12)");
  check_budget(g, sw, 1.0);
  return g.failed;
}

// ---------------------------------------------------------------------
// 2. Grid-node exactness + identical-card collapse on a 21x21 bias grid
int criterion_2() {
  Gate g;
  Stopwatch sw;
  const ModelGrid grid = varied_grid({14.5, 15.5, 16.5, 17.5, 18.5}, {5.1, 6.1, 7.1, 8.1});
  const std::vector<BiasPoint> probes = {
      {0.75, 0.75, 0.0, 0.0}, {0.05, 0.75, 0.0, 0.0}, {0.75, 0.30, 0.0, 0.0},
      {0.50, 0.50, 0.0, 0.0}, {0.75, 0.00, 0.0, 0.0}};

  double worst_node = 0.0;
  for (std::size_t i1 = 0; i1 < grid.axis1.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < grid.axis2.size(); ++i2) {
      const GeneralModel gm = locate_and_weigh(grid, {grid.axis1[i1], grid.axis2[i2]});
      const ModelCard& card = grid.card(i1, i2);
      for (const BiasPoint& b : probes) {
        const double ens = ensemble_currents(gm, b, 1.0).id;
        const double ref = eval_terminal_currents(card, b, 1.0).id;
        const double rel = std::abs(ens - ref) / std::max(std::abs(ref), 1e-30);
        worst_node = std::max(worst_node, rel);
      }
    }
  }
  g.check(worst_node <= 1e-12,
          "ensemble == node card at all 20 nodes: worst relative diff = " + fmt(worst_node));

  // four identical cards: the blend must reproduce the card everywhere
  ModelCard same;
  same.cov = 2e-17;
  same.cch_max = 8e-17;
  ModelGrid holder;
  holder.axis1 = {17.5, 18.5};
  holder.axis2 = {6.1, 7.1};
  holder.cards = {same, same, same, same};
  GeneralModel gm;
  gm.grid = &holder;
  gm.query = {17.8, 6.3};
  gm.corners = {{{0, 0.4431759474875671},
                 {1, 0.18701930035956205},
                 {3, 0.15031718575341899},
                 {2, 0.21948756639945186}}};

  double worst_i = 0.0, worst_q = 0.0;
  for (int ig = 0; ig <= 20; ++ig) {
    for (int id = 0; id <= 20; ++id) {
      const BiasPoint b{0.75 * id / 20.0, 0.75 * ig / 20.0, 0.0, 0.0};
      const double ens = ensemble_currents(gm, b, 1.0).id;
      const double ref = eval_terminal_currents(same, b, 1.0).id;
      if (ref == 0.0) {
        worst_i = std::max(worst_i, std::abs(ens));
      } else {
        worst_i = std::max(worst_i, std::abs(ens - ref) / std::abs(ref));
      }
      const double qens = ensemble_charges(gm, b, 1.0).qg;
      const double qref = eval_terminal_charges(same, b, 1.0).qg;
      worst_q = std::max(worst_q, std::abs(qens - qref) / std::max(std::abs(qref), 1e-30));
    }
  }
  g.check(worst_i <= 1e-12,
          "identical-card collapse, currents over 21x21 biases: worst relative diff = " +
              fmt(worst_i));
  g.check(worst_q <= 1e-12,
          "identical-card collapse, gate charge over 21x21 biases: worst relative diff = " +
              fmt(worst_q));
  check_budget(g, sw, 5.0);
  return g.failed;
}

// ---------------------------------------------------------------------
// 3. Per-node extraction error band after calibrating all 20 nodes
int criterion_3() {
  Gate g;
  Stopwatch sw;
  const GridCalibration& gc = device_calibration();
  double worst = 0.0;
  std::size_t worst_node = 0;
  for (std::size_t i = 0; i < gc.fits.size(); ++i) {
    if (gc.fits[i].rms_lin > worst) {
      worst = gc.fits[i].rms_lin;
      worst_node = i;
    }
  }
  g.check(gc.fits.size() == 20, "calibrated node count = " + std::to_string(gc.fits.size()));
  g.check(worst <= 2.5, "worst node rms_lin = " + fmt(worst) + " % at (lg " +
                            fmt(gc.grid.cards[worst_node].lg) + ", wfin " +
                            fmt(gc.grid.cards[worst_node].wfin) + ") (<= 2.5 %)");
  check_budget(g, sw, 120.0);
  return g.failed;
}

// ---------------------------------------------------------------------
// 4. Off-grid scaling contrast: blended lattice vs one fixed-point card
int criterion_4() {
  Gate g;
  const GridCalibration& gc = device_calibration();
  const DesignPoint q{14.5 + 0.3, 5.1 + 0.3};
  const OracleParams oracle = default_oracle_params();
  const IvDataset ref_q = virtual_tcad_iv(oracle, q, default_iv_vg(), default_iv_vd());

  const EnsembleDevice dev(locate_and_weigh(gc.grid, q));
  const double ens_lin = relative_rms(simulate_ensemble(dev, ref_q), ref_q).lin;

  // one card fitted only at (17.8, 6.3), then asked about (14.8, 5.4)
  const DesignPoint fit_pt{17.8, 6.3};
  const IvDataset iv_fit = virtual_tcad_iv(oracle, fit_pt, default_iv_vg(), default_iv_vd());
  const CvDataset cv_fit = virtual_tcad_cv(oracle, fit_pt, default_cv_vg());
  ModelCard init;
  init.lg = fit_pt.lg;
  init.wfin = fit_pt.wfin;
  const FitResult single = extract_card(iv_fit, &cv_fit, init, ExtractConfig{});
  const double single_lin = card_rms(single.card, ref_q).lin;

  g.check(std::isfinite(ens_lin) && ens_lin > 0.0,
          "ensemble rms_lin at (14.8, 5.4) = " + fmt(ens_lin) + " %");
  g.check(single_lin > ens_lin,
          "single-card rms_lin = " + fmt(single_lin) + " % exceeds the ensemble error");
  g.check(single_lin >= 1.5 * ens_lin,
          "error ratio single/ensemble = " + fmt(single_lin / ens_lin) + " (>= 1.5)");
  return g.failed;
}

// ---------------------------------------------------------------------
// 5. Solver analytic checks: RC step, divider, KCL, stress waveform peak
int criterion_5() {
  Gate g;
  Stopwatch sw;

  const Netlist rc = parse_netlist(
      "V1 in 0 dc 0.75\n"
      "R1 in out 100k\n"
      "C1 out 0 1p\n"
      ".tran 1u\n");
  SolverOptions opt;
  opt.use_ic = true;  // start discharged
  const double tau = 1e5 * 1e-12;
  opt.observe_times = {tau};
  const TransientResult tr = solve_transient(rc, rc.tstop, opt);
  const int out = rc.find_node("out");
  const double v_tau = tr.value_at(tau, out);
  const double v_ref = 0.75 * (1.0 - std::exp(-1.0));
  g.check(std::abs(v_tau - v_ref) / v_ref < 1e-3,
          "RC step v(tau) = " + fmt(v_tau) + " V vs analytic " + fmt(v_ref) +
              " V (0.1 % tol)");
  g.check(tr.max_kcl <= 1e-9,
          "transient max KCL residual = " + fmt(tr.max_kcl) + " A (<= 1e-9)");

  const Netlist div = parse_netlist(
      "V1 a 0 dc 0.75\n"
      "R1 a b 1k\n"
      "R2 b 0 1k\n"
      ".op\n");
  const DcResult dc = solve_dc(div);
  const double v_b = dc.v(div.find_node("b"));
  g.check(std::abs(v_b - 0.375) < 1e-6,
          "divider v(b) = " + fmt(v_b) + " V vs 0.375 V (1 uV tol)");
  g.check(dc.max_kcl <= 1e-9, "DC max KCL residual = " + fmt(dc.max_kcl) + " A (<= 1e-9)");

  // HBM-style double-exponential stress, normalized to a 1.33 A peak
  const Stimulus unit = Stimulus::dexp(1.0, 10e-9, 150e-9);
  const double t_peak = unit.dexp_peak_time();
  const Stimulus stress = Stimulus::dexp(1.33 / unit.value(t_peak), 10e-9, 150e-9);
  const double i_peak = stress.value(t_peak);
  g.check(std::abs(i_peak - 1.3300) / 1.3300 < 1e-3,
          "stress peak current = " + fmt(i_peak) + " A vs 1.3300 A (0.1 % tol)");
  g.check(std::abs(t_peak - 29.02e-9) / 29.02e-9 < 1e-3,
          "stress peak time = " + fmt(t_peak) + " s vs 29.02 ns (0.1 % tol)");
  check_budget(g, sw, 10.0);
  return g.failed;
}

// ---------------------------------------------------------------------
// 6. Clamp trend suite over the default 5x4 design sweep
int criterion_6() {
  Gate g;
  Stopwatch sw;
  const SweepResult& sweep = clamp_sweep();
  const std::vector<double> lgs = {14.5, 15.5, 16.5, 17.5, 18.5};
  const std::vector<double> ws = {4.1, 5.1, 6.1, 7.1};

  auto metric_at = [&](double lg, double wfin, int k) {
    for (const auto& row : sweep.rows) {
      if (row.lg == lg && row.wfin == wfin) return metric_values(row.metrics)[std::size_t(k)];
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  bool all_ok = true;
  for (const auto& row : sweep.rows) all_ok = all_ok && row.ok;
  g.check(all_ok, "all 20 sweep points solved");

  bool leak_down = true;
  for (double w : ws) {
    for (std::size_t i = 1; i < lgs.size(); ++i) {
      leak_down = leak_down && metric_at(lgs[i], w, 1) < metric_at(lgs[i - 1], w, 1);
    }
  }
  g.check(leak_down, "leakage monotonically decreasing in lg at every wfin");

  bool clamp_down_lg = true;
  for (double w : ws) {
    for (std::size_t i = 1; i < lgs.size(); ++i) {
      clamp_down_lg = clamp_down_lg && metric_at(lgs[i], w, 0) < metric_at(lgs[i - 1], w, 0);
    }
  }
  g.check(clamp_down_lg, "clamp voltage monotonically decreasing in lg at every wfin");
  if (!clamp_down_lg) {
    std::cout << "        clamp_v at wfin 6.1, lg 14.5 -> 18.5:";
    for (double lg : lgs) std::cout << ' ' << fmt(metric_at(lg, 6.1, 0));
    std::cout << "\n";
    g.note(
        "known failing check: the measured clamp voltage RISES with gate "
        "length. A longer gate raises the BigFET's on-resistance, and the "
        "clamped pad voltage is the stress current times that resistance, "
        "so the opposite slope is what this device stack actually "
        "produces. Kept red on purpose; see README 'Known failing check'.");
  }

  bool clamp_up_narrow = true;
  for (double lg : lgs) {
    for (std::size_t j = 1; j < ws.size(); ++j) {
      clamp_up_narrow =
          clamp_up_narrow && metric_at(lg, ws[j - 1], 0) > metric_at(lg, ws[j], 0);
    }
  }
  g.check(clamp_up_narrow, "clamp voltage increases as wfin decreases at every lg");

  const CorrelationMatrix cm = correlation_matrix(sweep);
  g.check(cm.r[1][0] < 0.0, "r(leakage, clamp_voltage) = " + fmt(cm.r[1][0]) + " (< 0)");
  g.check(cm.r[3][1] > 0.0, "r(recovery_time, leakage) = " + fmt(cm.r[3][1]) + " (> 0)");
  check_budget(g, sw, 600.0);
  return g.failed;
}

// ---------------------------------------------------------------------
// 7. Improvement existence over the same sweep
int criterion_7() {
  Gate g;
  const std::vector<Improvement> imp = improvements(clamp_sweep());
  for (const Improvement& i : imp) {
    g.check(std::isfinite(i.improvement) && i.improvement > 0.0,
            i.metric + " improvement = " + fmt(i.improvement) + " at (lg " + fmt(i.best_lg) +
                ", wfin " + fmt(i.best_wfin) + ") (> 0)");
  }
  double leak_imp = 0.0;
  for (const Improvement& i : imp) {
    if (i.metric == "leak_a") leak_imp = i.improvement;
  }
  g.check(leak_imp >= 0.5, "leakage improvement = " + fmt(leak_imp) + " (>= 0.5)");
  return g.failed;
}

// ---------------------------------------------------------------------
// 8. Monte Carlo shape statistics and byte-identical reruns
int criterion_8() {
  Gate g;
  Stopwatch sw;
  const McResult mc = monte_carlo(clamp_grid(), ClampConfig{}, 500, 0.5, 0.4, 7, 1);
  const McResult again = monte_carlo(clamp_grid(), ClampConfig{}, 500, 0.5, 0.4, 7, 1);

  g.check(mc.samples.size() == 500, "sample count = " + std::to_string(mc.samples.size()));
  const McSummary& leak = mc.summary[1];
  const McSummary& clamp = mc.summary[0];
  g.check(leak.skew_defined && leak.skewness > 0.5,
          "leakage skewness = " + fmt(leak.skewness) + " (> 0.5)");
  g.check(clamp.skew_defined && std::abs(clamp.skewness) < 0.3,
          "clamp-voltage |skewness| = " + fmt(std::abs(clamp.skewness)) + " (< 0.3)");
  g.check(mc_csv(mc) == mc_csv(again), "rerun with the same seed is byte-identical");
  g.note("clip count = " + std::to_string(mc.clip_count) + " of 500 raw draws");
  check_budget(g, sw, 1200.0);
  return g.failed;
}

// ---------------------------------------------------------------------
// 9. Cross-module property sweep
int criterion_9() {
  Gate g;

  // normalized, non-negative weights across 1e5 random in-hull queries
  {
    const ModelGrid grid = varied_grid({14.5, 15.5, 16.5, 17.5, 18.5}, {5.1, 6.1, 7.1, 8.1});
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u1(14.5, 18.5), u2(5.1, 8.1);
    double worst = 0.0;
    bool nonneg = true;
    for (int i = 0; i < 100000; ++i) {
      const GeneralModel gm = locate_and_weigh(grid, {u1(rng), u2(rng)});
      double sum = 0.0;
      for (const auto& c : gm.corners) {
        sum += c.weight;
        nonneg = nonneg && c.weight >= 0.0;
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    g.check(worst <= 1e-12,
            "weights over 1e5 random queries: worst |sum-1| = " + fmt(worst));
    g.check(nonneg, "all weights non-negative");
  }

  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> uv(-0.75, 0.75);
  std::uniform_real_distribution<double> uvt(0.25, 0.40), uk(5e-5, 2e-4), ud(0.0, 0.08);
  std::uniform_real_distribution<double> uth(0.0, 0.5), ul(0.0, 0.1), ur(0.0, 5e3);
  std::uniform_real_distribution<double> uc(0.0, 3e-17), uch(0.0, 9e-17);
  auto random_card = [&](Polarity pol) {
    ModelCard c;
    c.vt0 = uvt(rng);
    c.k_gain = uk(rng);
    c.dibl = ud(rng);
    c.theta_sat = uth(rng);
    c.lambda_clm = ul(rng);
    c.rs = ur(rng);
    c.rd = c.rs;
    c.cov = uc(rng);
    c.cch_max = uch(rng);
    c.polarity = pol;
    return c;
  };

  // charge neutrality
  {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const ModelCard c = random_card(Polarity::N);
      const BiasPoint b{uv(rng), uv(rng), uv(rng), uv(rng)};
      const TerminalCharges q = eval_terminal_charges(c, b, 7.0);
      worst = std::max(worst, std::abs(q.qg + q.qd + q.qs + q.qb));
    }
    g.check(worst <= 1e-18,
            "charge neutrality over 1e4 random cards/biases: worst |sum q| = " + fmt(worst) +
                " C");
  }

  // fin-count linearity
  {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const ModelCard c = random_card(Polarity::N);
      const BiasPoint b{uv(rng), uv(rng), 0.0, 0.0};
      const double k = 1.0 + 99.0 * std::generate_canonical<double, 53>(rng);
      const double one = eval_terminal_currents(c, b, 1.0).id;
      const double many = eval_terminal_currents(c, b, k).id;
      if (one != 0.0) worst = std::max(worst, std::abs(many - k * one) / std::abs(k * one));
    }
    g.check(worst <= 1e-12, "fin-count linearity: worst relative error = " + fmt(worst));
  }

  // polarity mirror: P(b) must equal -N(-b) exactly
  {
    int mismatches = 0;
    for (int i = 0; i < 2000; ++i) {
      ModelCard n = random_card(Polarity::N);
      ModelCard p = n;
      p.polarity = Polarity::P;
      const BiasPoint b{uv(rng), uv(rng), uv(rng), uv(rng)};
      const BiasPoint nb{-b.vd, -b.vg, -b.vs, -b.vb};
      const TerminalCurrents ip = eval_terminal_currents(p, b, 3.0);
      const TerminalCurrents in = eval_terminal_currents(n, nb, 3.0);
      if (ip.id != -in.id || ip.is_ != -in.is_ || ip.ig != -in.ig || ip.ib != -in.ib) {
        ++mismatches;
      }
      const TerminalCharges qp = eval_terminal_charges(p, b, 3.0);
      const TerminalCharges qn = eval_terminal_charges(n, nb, 3.0);
      if (qp.qg != -qn.qg || qp.qd != -qn.qd || qp.qs != -qn.qs || qp.qb != -qn.qb) {
        ++mismatches;
      }
    }
    g.check(mismatches == 0,
            "polarity mirror bit-exact over 2000 random biases: mismatches = " +
                std::to_string(mismatches));
  }

  // determinism: identical inputs give identical output bytes
  {
    const std::string rc_text =
        "V1 in 0 dc 0.75\n"
        "R1 in out 100k\n"
        "C1 out 0 1p\n"
        ".tran 1u\n";
    const Netlist a = parse_netlist(rc_text);
    const Netlist b = parse_netlist(rc_text);
    SolverOptions opt;
    opt.use_ic = true;
    const std::string csv_a = transient_csv(solve_transient(a, a.tstop, opt));
    const std::string csv_b = transient_csv(solve_transient(b, b.tstop, opt));
    g.check(csv_a == csv_b, "transient rerun is byte-identical");

    const ModelGrid grid = varied_grid({17.5, 18.5}, {6.1, 7.1});
    const GeneralModel g1 = locate_and_weigh(grid, {17.8, 6.3});
    const GeneralModel g2 = locate_and_weigh(grid, {17.8, 6.3});
    bool same = true;
    for (std::size_t k = 0; k < 4; ++k) {
      same = same && g1.corners[k].node == g2.corners[k].node &&
             g1.corners[k].weight == g2.corners[k].weight;
    }
    g.check(same, "weight computation rerun is bit-identical");
  }

  return g.failed;
}

struct Criterion {
  int number;
  const char* title;
  int (*run)();
};

constexpr Criterion kCriteria[] = {
    {1, "corner-weight formula exactness", criterion_1},
    {2, "grid-node exactness and identical-card collapse", criterion_2},
    {3, "per-node extraction error band", criterion_3},
    {4, "off-grid scaling contrast vs a single fixed card", criterion_4},
    {5, "solver analytic checks", criterion_5},
    {6, "clamp trend suite", criterion_6},
    {7, "improvement existence", criterion_7},
    {8, "Monte Carlo statistics and determinism", criterion_8},
    {9, "cross-module property sweep", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;  // 0 = all
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
      if (selected < 1 || selected > 9) {
        std::cerr << "criterion must be 1..9\n";
        return 64;
      }
    } else {
      std::cerr << "usage: gcm_acceptance [--criterion N]\n";
      return 64;
    }
  }

  int total_failed = 0;
  for (const Criterion& c : kCriteria) {
    if (selected != 0 && c.number != selected) continue;
    std::cout << "criterion " << c.number << " (" << c.title << "):\n";
    int failed = 0;
    try {
      failed = c.run();
    } catch (const std::exception& e) {
      std::cout << "  [FAIL] unexpected exception: " << e.what() << "\n";
      failed = 1;
    }
    std::cout << "criterion " << c.number << ": " << (failed == 0 ? "PASS" : "FAIL") << "\n";
    total_failed += failed;
  }
  return std::min(total_failed, 125);
}
