#include "gcm/compact_model.hpp"

#include <algorithm>
#include <cmath>

#include "gcm/constants.hpp"
#include "gcm/errors.hpp"

namespace gcm {

namespace {

void check_bias(const BiasPoint& b) {
  for (double v : {b.vd, b.vg, b.vs, b.vb}) {
    if (!std::isfinite(v)) throw ValidationError("bias point not finite");
    if (std::abs(v) > 10.0) throw ValidationError("bias point exceeds 10 V guard");
  }
}

void check_nfin(double nfin) {
  if (!(std::isfinite(nfin) && nfin >= 1.0))
    throw ValidationError("nfin must be a finite count >= 1");
}

double fekv(double x, double pt) {
  const double g = softplus(x / (2.0 * pt));
  return g * g;
}

// Per-fin channel current, normalized so the internal frame has vd >= vs.
// The swap makes dibl, lambda_clm and theta_sat act on |Vds| and the model
// exactly antisymmetric under drain-source exchange.
double core_id_fin(const ModelCard& c, double vd, double vg, double vs) {
  const double pt = thermal_voltage(c.temp);
  double sign = 1.0;
  if (vd < vs) {
    std::swap(vd, vs);
    sign = -1.0;
  }
  const double vds = vd - vs;
  const double vt_eff = c.vt0 - c.dibl * vds;
  const double vp = (vg - vt_eff) / c.n_ss;
  const double ispec = 2.0 * c.n_ss * pt * pt * c.k_gain * (c.weff() / c.lg);
  double idc = ispec * (fekv(vp - vs, pt) - fekv(vp - vd, pt));
  idc *= (1.0 + c.lambda_clm * vds) / (1.0 + c.theta_sat * std::abs(vds));
  return sign * idc;
}

// Per-fin current with series resistance: exact solve of
// i = core(vd - i*rd, vg, vs + i*rs) by bracketed bisection. The zero-R
// current bounds the solution on the open side, so [0, i0] brackets.
double id_fin(const ModelCard& c, double vd, double vg, double vs) {
  if (c.rs == 0.0 && c.rd == 0.0) return core_id_fin(c, vd, vg, vs);
  const double i0 = core_id_fin(c, vd, vg, vs);
  if (i0 == 0.0) return 0.0;
  auto h = [&](double i) { return core_id_fin(c, vd - i * c.rd, vg, vs + i * c.rs) - i; };
  double lo = std::min(0.0, i0);
  double hi = std::max(0.0, i0);
  double flo = h(lo);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = h(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TerminalCurrents eval_terminal_currents(const ModelCard& card, const BiasPoint& bias,
                                        double nfin) {
  card.validate();
  check_bias(bias);
  check_nfin(nfin);
  double ud = bias.vd - bias.vb;
  double ug = bias.vg - bias.vb;
  double us = bias.vs - bias.vb;
  double sign = 1.0;
  if (card.polarity == Polarity::P) {
    ud = -ud;
    ug = -ug;
    us = -us;
    sign = -1.0;
  }
  const double id = sign * nfin * id_fin(card, ud, ug, us);
  TerminalCurrents out;
  out.id = id;
  out.ig = 0.0;
  out.is_ = -id;
  out.ib = 0.0;
  return out;
}

TerminalCharges eval_terminal_charges(const ModelCard& card, const BiasPoint& bias,
                                      double nfin) {
  card.validate();
  check_bias(bias);
  check_nfin(nfin);
  double ud = bias.vd - bias.vb;
  double ug = bias.vg - bias.vb;
  double us = bias.vs - bias.vb;
  double sign = 1.0;
  if (card.polarity == Polarity::P) {
    ud = -ud;
    ug = -ug;
    us = -us;
    sign = -1.0;
  }
  const double pt = thermal_voltage(card.temp);
  const double vds = ud - us;
  const double vt_eff = card.vt0 - card.dibl * vds;
  const double vgs = ug - us;
  const double vgd = ug - ud;
  const double qch =
      card.cch_max * card.n_ss * pt * softplus((ug - vt_eff - vds / 2.0) / (card.n_ss * pt)) * nfin;
  const double qg = nfin * card.cov * (vgs + vgd) + qch;
  const double qd = -nfin * card.cov * vgd - qch / 2.0;
  const double qs = -qg - qd;
  TerminalCharges out;
  out.qg = sign * qg;
  out.qd = sign * qd;
  out.qs = sign * qs;
  out.qb = 0.0;
  return out;
}

}  // namespace gcm
