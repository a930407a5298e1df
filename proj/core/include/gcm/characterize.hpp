#pragma once

#include "gcm/compact_model.hpp"

namespace gcm {

// Device-level figures of merit extracted from the model.
struct CharReport {
  double ioff = 0.0;       // A, |Id| at Vgs=0, Vds=vdd
  double ion = 0.0;        // A, |Id| at Vgs=Vds=vdd
  double ieff = 0.0;       // A, (IH + IL)/2
  double vt_lin = 0.0;     // V, constant-current Vt at Vds=50 mV
  double vt_sat = 0.0;     // V, constant-current Vt at Vds=vdd
  double ss = 0.0;         // mV/dec
  double dibl_meas = 0.0;  // mV/V
  double cgg = 0.0;        // F, numeric dQg/dVg at Vgs=Vds=vdd
  double cov_meas = 0.0;   // F
  double cch_meas = 0.0;   // F
  double ron = 0.0;        // ohm, Vds/Id at Vgs=vdd, Vds=50 mV
  bool extraction_ok = true;  // false: Vt criterion not bracketed; vt/ss/dibl are NaN
};

// Constant-current criterion 100 nA * Weff*nfin/lg. P devices are probed
// with mirrored bias so the report reads like an N device's.
CharReport characterize(const Device& device, double vdd);
CharReport characterize(const Device& device, double vdd, double nfin);
CharReport characterize(const ModelCard& card, double vdd);

}  // namespace gcm
