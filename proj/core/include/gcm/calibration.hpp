#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gcm/model_card.hpp"
#include "gcm/model_grid.hpp"

namespace gcm {

// Analytic reference-data generator standing in for a physics stack.
// Trend coefficients turn one base card into an effective card per
// design point; all of it lives in a config file so real exported data
// can replace it.
struct OracleParams {
  ModelCard base;              // vt0 acts as vt_base, k_gain as k0
  double wc = 3.0;             // nm, mobility-degradation width
  double p_exp = 2.0;          // mobility-degradation exponent
  double d0 = 0.5;             // V/V, DIBL prefactor
  double ell = 7.0;            // nm, DIBL decay length
  double alpha = 1.0;          // fin-width exponent
  double vt_rolloff_amp = 0.8; // V
  double vt_rolloff_len = 8.0; // nm
  double lg_min = 5.0, lg_max = 50.0;      // validity box, nm
  double wfin_min = 1.0, wfin_max = 20.0;  // nm

  void validate() const;
};

OracleParams default_oracle_params();
OracleParams parse_oracle_params(const std::string& text, const std::string& origin = "oracle config");
OracleParams load_oracle_params(const std::filesystem::path& path);
std::string oracle_params_text(const OracleParams& p);

// k_gain = k0/(1+(wc/wfin)^p); dibl = d0*exp(-lg/ell)*(wfin/6)^alpha;
// vt0 = vt_base - amp*exp(-lg/len)*(wfin/6)^alpha.
ModelCard oracle_effective_card(const OracleParams& p, const DesignPoint& point);

// Rectangular I-V reference set; id laid out vd-major.
struct IvDataset {
  DesignPoint point;
  double vdd = 0.75;
  std::vector<double> vg_values;
  std::vector<double> vd_values;
  std::vector<double> id;  // size vg*vd, index = ivd*vg_values.size() + ivg
  std::size_t index(std::size_t ivd, std::size_t ivg) const {
    return ivd * vg_values.size() + ivg;
  }
};

struct CvDataset {
  DesignPoint point;
  double vd = 0.0;
  std::vector<double> vg_values;
  std::vector<double> cgg;
};

IvDataset virtual_tcad_iv(const OracleParams& p, const DesignPoint& point,
                          const std::vector<double>& vg_values,
                          const std::vector<double>& vd_values);
CvDataset virtual_tcad_cv(const OracleParams& p, const DesignPoint& point,
                          const std::vector<double>& vg_values, double vd = 0.0);

// Default calibration bias grids (vdd 0.75).
std::vector<double> default_iv_vg();   // 0 : 0.75 : 0.025
std::vector<double> default_iv_vd();   // {0.05, 0.25, 0.50, 0.75}
std::vector<double> default_cv_vg();   // -0.2 : 0.75 : 0.025

// CSV round-trip: "vg,vd,id" and "vg,cgg".
std::string iv_csv(const IvDataset& ds);
IvDataset parse_iv_csv(const std::string& text, const DesignPoint& point, double vdd = 0.75);
std::string cv_csv(const CvDataset& ds);
CvDataset parse_cv_csv(const std::string& text, const DesignPoint& point, double vd = 0.0);

// Fit error of a simulated Id table against a dataset.
// lin: percent, normalized per point by the max |Iref| of that point's
// own Vd curve. log: RMS decades over points with |Iref| > 1e-12 A.
struct RmsPair {
  double lin = 0.0;
  double log = 0.0;
};
RmsPair relative_rms(const std::vector<double>& id_sim, const IvDataset& ref);
RmsPair card_rms(const ModelCard& card, const IvDataset& ref);

struct ExtractConfig {
  // subset of {vt0, n_ss, dibl, k_gain, theta_sat, lambda_clm, rs_rd}
  std::vector<std::string> free_params = {"vt0", "n_ss", "dibl",
                                          "k_gain", "theta_sat", "lambda_clm"};
  int max_evals = 2000;
  bool seed_from_data = true;  // data-driven vt0/k_gain starting guess
};

struct FitResult {
  ModelCard card;
  double rms_lin = 0.0;
  double rms_log = 0.0;
  int iterations = 0;
  int evals = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // best-so-far, non-increasing
};

// Simplex fit of the free parameters against the I-V set (objective
// rms_lin + 0.5*rms_log); cov/cch_max come from the C-V plateaus when a
// C-V set is given. Deterministic for fixed inputs.
FitResult extract_card(const IvDataset& iv, const CvDataset* cv, const ModelCard& init,
                       const ExtractConfig& cfg = {});

struct GridCalibration {
  ModelGrid grid;
  std::vector<FitResult> fits;  // row-major, axis1 outer
};

GridCalibration calibrate_grid(const OracleParams& p, const std::vector<double>& lg_values,
                               const std::vector<double>& wfin_values,
                               const ExtractConfig& cfg = {});

}  // namespace gcm
