#pragma once

#include <string>
#include <vector>

namespace gcm {

// Time-dependent source waveform. Value is volts for V sources, amps
// for I sources; breakpoints() lists times where the waveform has a
// corner the integrator must land on exactly.
class Stimulus {
 public:
  enum class Kind { Dc, Pwl, Dexp, Ramp };

  static Stimulus dc(double value);
  // points are (t, v) pairs; t strictly increasing, value clamped
  // to the first/last point outside the covered span.
  static Stimulus pwl(std::vector<std::pair<double, double>> points);
  // i0*(exp(-t/tau_decay) - exp(-t/tau_rise)), 0 for t < 0;
  // requires tau_decay > tau_rise > 0.
  static Stimulus dexp(double i0, double tau_rise, double tau_decay);
  // 0 until t0, linear to vf over tr, then flat.
  static Stimulus ramp(double t0, double tr, double vf);

  Kind kind() const { return kind_; }
  double value(double t) const;
  std::vector<double> breakpoints() const;
  std::string describe() const;

  // dexp helpers used for pulse normalization
  double dexp_peak_time() const;
  double dexp_i0() const { return p0_; }

 private:
  Stimulus() = default;
  Kind kind_ = Kind::Dc;
  double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

}  // namespace gcm
