// gcm: calibrate model grids, characterize devices, and run the ESD
// power-clamp benchmark pipeline. Exit codes: 0 success, 1 invalid
// input, 2 solver failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "gcm/calibration.hpp"
#include "gcm/characterize.hpp"
#include "gcm/circuit.hpp"
#include "gcm/errors.hpp"
#include "gcm/esd_clamp.hpp"
#include "gcm/model_grid.hpp"
#include "gcm/netlist.hpp"
#include "gcm/util.hpp"

namespace fs = std::filesystem;
using namespace gcm;

namespace {

DesignPoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw ValidationError("point must be 'lg,wfin' in nm, got '" + s + "'");
  }
  return {parse_double(trim(s.substr(0, comma))), parse_double(trim(s.substr(comma + 1)))};
}

EventSet parse_events(const std::string& s) {
  if (s == "all") return EventSet{};
  EventSet ev{false, false, false, false};
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string tok =
        trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (tok == "leakage") ev.leakage = true;
    else if (tok == "esd_pulse") ev.esd_pulse = true;
    else if (tok == "powerup") ev.powerup = true;
    else if (tok == "false_trigger") ev.false_trigger = true;
    else throw ValidationError("unknown event '" + tok +
                               "' (expected leakage, esd_pulse, powerup, false_trigger or all)");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return ev;
}

void write_manifest(const fs::path& outdir, const std::string& subcommand, std::uint64_t digest,
                    std::uint64_t master_seed) {
  std::ostringstream os;
  os << "subcommand = " << subcommand << "\n";
  os << "config_digest = " << digest_hex(digest) << "\n";
  os << "master_seed = " << master_seed << "\n";
  write_file(outdir / "run_manifest.txt", os.str());
}

std::string fit_csv(const GridCalibration& gc) {
  std::ostringstream os;
  os << "lg_nm,wfin_nm,rms_lin_pct,rms_log_dec,evals,iterations,converged\n";
  for (std::size_t i1 = 0; i1 < gc.grid.axis1.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < gc.grid.axis2.size(); ++i2) {
      const FitResult& f = gc.fits[gc.grid.index(i1, i2)];
      os << format_g17(gc.grid.axis1[i1]) << ',' << format_g17(gc.grid.axis2[i2]) << ','
         << format_g17(f.rms_lin) << ',' << format_g17(f.rms_log) << ',' << f.evals << ','
         << f.iterations << ',' << (f.converged ? 1 : 0) << "\n";
    }
  }
  return os.str();
}

std::string char_csv(const CharReport& r) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "ioff_a," << format_g17(r.ioff) << "\n";
  os << "ion_a," << format_g17(r.ion) << "\n";
  os << "ieff_a," << format_g17(r.ieff) << "\n";
  os << "vt_lin_v," << format_g17(r.vt_lin) << "\n";
  os << "vt_sat_v," << format_g17(r.vt_sat) << "\n";
  os << "ss_mv_dec," << format_g17(r.ss) << "\n";
  os << "dibl_mv_v," << format_g17(r.dibl_meas) << "\n";
  os << "cgg_f," << format_g17(r.cgg) << "\n";
  os << "cov_f," << format_g17(r.cov_meas) << "\n";
  os << "cch_f," << format_g17(r.cch_meas) << "\n";
  os << "ron_ohm," << format_g17(r.ron) << "\n";
  os << "extraction_ok," << (r.extraction_ok ? 1 : 0) << "\n";
  return os.str();
}

std::string seam_csv(const std::vector<SeamEdge>& edges) {
  std::ostringstream os;
  os << "axis,coordinate_nm,max_gap\n";
  for (const auto& e : edges) {
    os << e.axis << ',' << format_g17(e.coordinate) << ',' << format_g17(e.max_gap) << "\n";
  }
  return os.str();
}

struct Options {
  std::string outdir = "out";
  int jobs = 1;
  bool verbose = false;

  // calibrate
  std::string oracle = "defaults";
  std::string lg_range = "14.5:18.5:1.0";
  std::string wfin_range = "4.1:7.1:1.0";
  int max_evals = 2000;
  std::string from_csv;

  // shared
  std::string grid_path;
  std::string card_path;
  std::string point;
  double vdd = 0.75;

  // clamp / sweep / mc
  std::string clamp_config = "defaults";
  std::string metric = "all";
  std::size_t n = 500;
  double sigma_lg = 0.5;
  double sigma_wfin = 0.4;
  std::uint64_t seed = 7;
  std::string events = "all";

  // simulate
  std::string netlist_path;
};

int run_calibrate(const Options& o) {
  const fs::path outdir(o.outdir);
  const std::vector<double> lgs = parse_range(o.lg_range);
  const std::vector<double> ws = parse_range(o.wfin_range);
  ExtractConfig ecfg;
  ecfg.max_evals = o.max_evals;

  GridCalibration gc;
  std::uint64_t digest = 0;
  if (o.from_csv.empty()) {
    const OracleParams p = load_oracle_params(o.oracle);
    digest = config_digest(oracle_params_text(p));
    gc = calibrate_grid(p, lgs, ws, ecfg);
  } else {
    // reference data exported as per-node CSV files
    gc.grid.axis1 = lgs;
    gc.grid.axis2 = ws;
    std::string all_text;
    for (std::size_t i1 = 0; i1 < lgs.size(); ++i1) {
      for (std::size_t i2 = 0; i2 < ws.size(); ++i2) {
        char iv_name[64], cv_name[64];
        std::snprintf(iv_name, sizeof iv_name, "iv_node_%02zu_%02zu.csv", i1, i2);
        std::snprintf(cv_name, sizeof cv_name, "cv_node_%02zu_%02zu.csv", i1, i2);
        const DesignPoint pt{lgs[i1], ws[i2]};
        const std::string iv_text = read_file(fs::path(o.from_csv) / iv_name);
        all_text += iv_text;
        const IvDataset iv = parse_iv_csv(iv_text, pt);
        CvDataset cv;
        const CvDataset* cv_ptr = nullptr;
        const fs::path cv_path = fs::path(o.from_csv) / cv_name;
        if (fs::exists(cv_path)) {
          const std::string cv_text = read_file(cv_path);
          all_text += cv_text;
          cv = parse_cv_csv(cv_text, pt);
          cv_ptr = &cv;
        }
        ModelCard init;
        init.lg = pt.lg;
        init.wfin = pt.wfin;
        FitResult fit = extract_card(iv, cv_ptr, init, ecfg);
        fit.card.lg = pt.lg;
        fit.card.wfin = pt.wfin;
        gc.grid.cards.push_back(fit.card);
        gc.fits.push_back(std::move(fit));
      }
    }
    gc.grid.validate();
    digest = config_digest(all_text);
  }
  save_grid(gc.grid, outdir);
  write_file(outdir / "fit.csv", fit_csv(gc));
  write_manifest(outdir, "calibrate", digest, 0);
  if (o.verbose) {
    for (std::size_t i = 0; i < gc.fits.size(); ++i) {
      const auto& c = gc.grid.cards[i];
      std::cerr << "node lg=" << c.lg << " wfin=" << c.wfin
                << " rms_lin=" << gc.fits[i].rms_lin << "% rms_log=" << gc.fits[i].rms_log
                << " evals=" << gc.fits[i].evals << "\n";
    }
  }
  double worst = 0.0;
  for (const auto& f : gc.fits) worst = std::max(worst, f.rms_lin);
  std::cout << "calibrated " << gc.grid.cards.size() << " nodes; worst rms_lin = "
            << format_g17(worst) << " %\n";
  return 0;
}

int run_characterize(const Options& o) {
  const fs::path outdir(o.outdir);
  CharReport rep;
  std::uint64_t digest = 0;
  if (!o.card_path.empty()) {
    const ModelCard card = load_model_card(o.card_path);
    digest = config_digest(model_card_text(card));
    rep = characterize(card, o.vdd);
  } else if (!o.grid_path.empty() && !o.point.empty()) {
    const ModelGrid grid = load_grid(o.grid_path);
    digest = config_digest(read_file(o.grid_path));
    const EnsembleDevice dev(locate_and_weigh(grid, parse_point(o.point)));
    rep = characterize(dev, o.vdd);
  } else {
    throw ValidationError("characterize needs --card FILE, or --grid MANIFEST with --point LG,WFIN");
  }
  write_file(outdir / "char.csv", char_csv(rep));
  write_manifest(outdir, "characterize", digest, 0);
  std::cout << char_csv(rep);
  return 0;
}

int run_clamp(const Options& o) {
  const fs::path outdir(o.outdir);
  if (o.grid_path.empty()) throw ValidationError("clamp requires --grid MANIFEST");
  const ModelGrid grid = load_grid(o.grid_path);
  ClampConfig cfg = load_clamp_config(o.clamp_config);
  if (!o.point.empty()) {
    const DesignPoint pt = parse_point(o.point);
    cfg.lg = pt.lg;
    cfg.wfin = pt.wfin;
  }
  EventSet ev{false, false, false, false};
  if (o.metric == "all") ev = EventSet{};
  else if (o.metric == "clamp_v") ev.esd_pulse = true;
  else if (o.metric == "leak_a") ev.leakage = true;
  else if (o.metric == "peak_a") ev.powerup = true;
  else if (o.metric == "recovery_s") ev.false_trigger = true;
  else throw ValidationError("unknown metric '" + o.metric +
                             "' (expected all, clamp_v, leak_a, peak_a, recovery_s)");
  const MetricsReport rep = measure_all(grid, cfg, ev);
  write_file(outdir / "metrics.csv", metrics_csv(rep));
  write_manifest(outdir, "clamp", rep.config_digest, 0);
  std::cout << metrics_csv(rep);
  return 0;
}

int run_sweep_cmd(const Options& o) {
  const fs::path outdir(o.outdir);
  if (o.grid_path.empty()) throw ValidationError("sweep requires --grid MANIFEST");
  const ModelGrid grid = load_grid(o.grid_path);
  const ClampConfig cfg = load_clamp_config(o.clamp_config);
  const SweepResult sw =
      run_sweep(grid, cfg, parse_range(o.lg_range), parse_range(o.wfin_range), o.jobs);
  for (const auto& row : sw.rows) {
    if (!row.ok) {
      std::cerr << "skipped (" << row.lg << ", " << row.wfin << "): " << row.error << "\n";
    }
  }
  write_file(outdir / "sweep.csv", sweep_csv(sw));
  write_file(outdir / "improvements.csv", improvements_csv(improvements(sw)));
  write_file(outdir / "correlations.csv", correlations_csv(correlation_matrix(sw)));
  write_manifest(outdir, "sweep", config_digest(clamp_config_text(cfg)), 0);
  std::cout << "swept " << sw.rows.size() << " points\n" << improvements_csv(improvements(sw));
  return 0;
}

int run_mc(const Options& o) {
  const fs::path outdir(o.outdir);
  if (o.grid_path.empty()) throw ValidationError("mc requires --grid MANIFEST");
  const ModelGrid grid = load_grid(o.grid_path);
  const ClampConfig cfg = load_clamp_config(o.clamp_config);
  const McResult mc = monte_carlo(grid, cfg, o.n, o.sigma_lg, o.sigma_wfin, o.seed, o.jobs,
                                  parse_events(o.events));
  write_file(outdir / "mc.csv", mc_csv(mc));
  write_manifest(outdir, "mc", config_digest(clamp_config_text(cfg)), o.seed);
  std::cout << "n = " << mc.samples.size() << ", clipped = " << mc.clip_count << "\n";
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& s = mc.summary[k];
    std::cout << kMetricNames[k] << ": mean = " << format_g17(s.mean)
              << ", stddev = " << format_g17(s.stddev) << ", skewness = "
              << (s.skew_defined ? format_g17(s.skewness) : std::string("undefined")) << "\n";
  }
  return 0;
}

int run_seam(const Options& o) {
  const fs::path outdir(o.outdir);
  if (o.grid_path.empty()) throw ValidationError("seam-check requires --grid MANIFEST");
  const ModelGrid grid = load_grid(o.grid_path);
  const std::vector<BiasPoint> bias = {{o.vdd, o.vdd, 0.0, 0.0},
                                       {o.vdd, 0.5 * o.vdd, 0.0, 0.0},
                                       {0.05, o.vdd, 0.0, 0.0}};
  const std::vector<SeamEdge> edges = seam_gap(grid, bias);
  write_file(outdir / "seam.csv", seam_csv(edges));
  write_manifest(outdir, "seam-check", config_digest(read_file(o.grid_path)), 0);
  double worst = 0.0;
  for (const auto& e : edges) worst = std::max(worst, e.max_gap);
  std::cout << "interior edges: " << edges.size() << ", worst relative seam gap: "
            << format_g17(worst) << "\n";
  return 0;
}

int run_simulate(const Options& o) {
  const fs::path outdir(o.outdir);
  ModelContext ctx;
  ModelGrid grid;
  if (!o.grid_path.empty()) {
    grid = load_grid(o.grid_path);
    ctx.grid = &grid;
  }
  const Netlist nl = load_netlist(o.netlist_path, ctx);
  const std::uint64_t digest = config_digest(read_file(o.netlist_path));
  if (!nl.has_op && !nl.has_tran) {
    throw ValidationError("netlist has no .op or .tran directive");
  }
  if (nl.has_op) {
    const DcResult dc = solve_dc(nl);
    write_file(outdir / "op.csv", dc_csv(nl, dc));
    std::cout << dc_csv(nl, dc);
  }
  if (nl.has_tran) {
    const TransientResult tr = solve_transient(nl, nl.tstop);
    write_file(outdir / "waves.csv", transient_csv(tr));
    std::cout << "transient: " << tr.times.size() << " points, " << tr.steps_rejected
              << " rejected steps, max KCL residual " << format_g17(tr.max_kcl) << " A\n";
  }
  write_manifest(outdir, "simulate", digest, 0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"general compact model: lattice-calibrated device models and ESD clamp benchmark"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global options after the subcommand too
  Options o;
  if (const char* env = std::getenv("GCM_OUT_DIR")) o.outdir = env;
  app.add_option("-o,--outdir", o.outdir, "output directory (env GCM_OUT_DIR)");
  app.add_option("--jobs", o.jobs, "parallel jobs for sweep/mc")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", o.verbose, "chatty progress on stderr");

  auto* cal = app.add_subcommand("calibrate", "fit a model grid against reference I-V/C-V data");
  cal->add_option("--oracle", o.oracle, "oracle config file or 'defaults'");
  cal->add_option("--lg", o.lg_range, "lg axis, nm, start:stop:step");
  cal->add_option("--wfin", o.wfin_range, "wfin axis, nm, start:stop:step");
  cal->add_option("--max-evals", o.max_evals, "objective evaluation budget per node");
  cal->add_option("--from-csv", o.from_csv,
                  "directory of iv_node_XX_YY.csv (+ optional cv_node_XX_YY.csv) instead of the oracle");

  auto* chr = app.add_subcommand("characterize", "device figures of merit for a card or grid point");
  chr->add_option("--card", o.card_path, "model card file");
  chr->add_option("--grid", o.grid_path, "grid manifest");
  chr->add_option("--point", o.point, "design point lg,wfin in nm");
  chr->add_option("--vdd", o.vdd, "supply voltage");

  auto* clp = app.add_subcommand("clamp", "four ESD metrics at one design point");
  clp->add_option("--grid", o.grid_path, "grid manifest")->required();
  clp->add_option("--config", o.clamp_config, "clamp config file or 'defaults'");
  clp->add_option("--point", o.point, "design point lg,wfin in nm (overrides config)");
  clp->add_option("--metric", o.metric, "all | clamp_v | leak_a | peak_a | recovery_s");

  auto* swp = app.add_subcommand("sweep", "metrics over an lg x wfin lattice + improvements/correlations");
  swp->add_option("--grid", o.grid_path, "grid manifest")->required();
  swp->add_option("--config", o.clamp_config, "clamp config file or 'defaults'");
  swp->add_option("--lg", o.lg_range, "lg values, nm, start:stop:step");
  swp->add_option("--wfin", o.wfin_range, "wfin values, nm, start:stop:step");

  auto* mc = app.add_subcommand("mc", "Monte Carlo process variation at the POR point");
  mc->add_option("--grid", o.grid_path, "grid manifest")->required();
  mc->add_option("--config", o.clamp_config, "clamp config file or 'defaults'");
  mc->add_option("--n", o.n, "sample count");
  mc->add_option("--sigma-lg", o.sigma_lg, "lg standard deviation, nm");
  mc->add_option("--sigma-wfin", o.sigma_wfin, "wfin standard deviation, nm");
  mc->add_option("--seed", o.seed, "master seed");
  mc->add_option("--events", o.events,
                 "comma list of leakage,esd_pulse,powerup,false_trigger or 'all'");

  auto* seam = app.add_subcommand("seam-check", "relative drain-current gap across interior cell edges");
  seam->add_option("--grid", o.grid_path, "grid manifest")->required();
  seam->add_option("--vdd", o.vdd, "bias level for the probe set");

  auto* sim = app.add_subcommand("simulate", "run a netlist (.op and/or .tran)");
  sim->add_option("netlist", o.netlist_path, "netlist file")->required();
  sim->add_option("--grid", o.grid_path, "grid manifest for 'gcm' transistors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cal->parsed()) return run_calibrate(o);
    if (chr->parsed()) return run_characterize(o);
    if (clp->parsed()) return run_clamp(o);
    if (swp->parsed()) return run_sweep_cmd(o);
    if (mc->parsed()) return run_mc(o);
    if (seam->parsed()) return run_seam(o);
    if (sim->parsed()) return run_simulate(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
