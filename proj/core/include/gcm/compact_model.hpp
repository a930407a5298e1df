#pragma once

#include "gcm/model_card.hpp"

namespace gcm {

// Terminal potentials against a common ground, volts.
struct BiasPoint {
  double vd = 0.0;
  double vg = 0.0;
  double vs = 0.0;
  double vb = 0.0;
};

struct TerminalCurrents {
  double id = 0.0;
  double ig = 0.0;
  double is_ = 0.0;
  double ib = 0.0;
};

struct TerminalCharges {
  double qg = 0.0;
  double qd = 0.0;
  double qs = 0.0;
  double qb = 0.0;
};

// ig = ib = 0, id = -is_. Currents/charges scale linearly with nfin.
// P-polarity cards evaluate the N equations on sign-mirrored,
// bulk-referenced voltages and mirror the outputs.
TerminalCurrents eval_terminal_currents(const ModelCard& card, const BiasPoint& bias,
                                        double nfin);
TerminalCharges eval_terminal_charges(const ModelCard& card, const BiasPoint& bias,
                                      double nfin);

// Model-agnostic device view used by characterization and the circuit
// solver: a single card or a weighted card ensemble behind one interface.
class Device {
 public:
  virtual ~Device() = default;
  virtual TerminalCurrents currents(const BiasPoint& bias, double nfin) const = 0;
  virtual TerminalCharges charges(const BiasPoint& bias, double nfin) const = 0;
  virtual double lg() const = 0;    // nm
  virtual double weff() const = 0;  // nm
  virtual double default_nfin() const = 0;
  virtual Polarity polarity() const = 0;
};

class CardDevice final : public Device {
 public:
  explicit CardDevice(const ModelCard& card) : card_(&card) {}
  TerminalCurrents currents(const BiasPoint& bias, double nfin) const override {
    return eval_terminal_currents(*card_, bias, nfin);
  }
  TerminalCharges charges(const BiasPoint& bias, double nfin) const override {
    return eval_terminal_charges(*card_, bias, nfin);
  }
  double lg() const override { return card_->lg; }
  double weff() const override { return card_->weff(); }
  double default_nfin() const override { return card_->nfin_unit; }
  Polarity polarity() const override { return card_->polarity; }

 private:
  const ModelCard* card_;
};

}  // namespace gcm
