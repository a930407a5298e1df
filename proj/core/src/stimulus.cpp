#include "gcm/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcm/errors.hpp"
#include "gcm/util.hpp"

namespace gcm {

Stimulus Stimulus::dc(double value) {
  if (!std::isfinite(value)) throw ValidationError("dc stimulus value must be finite");
  Stimulus s;
  s.kind_ = Kind::Dc;
  s.p0_ = value;
  return s;
}

Stimulus Stimulus::pwl(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw ValidationError("pwl stimulus needs at least 2 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second)) {
      throw ValidationError("pwl stimulus points must be finite");
    }
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      throw ValidationError("pwl stimulus times must be strictly increasing");
    }
  }
  Stimulus s;
  s.kind_ = Kind::Pwl;
  s.points_ = std::move(points);
  return s;
}

Stimulus Stimulus::dexp(double i0, double tau_rise, double tau_decay) {
  if (!std::isfinite(i0)) throw ValidationError("dexp stimulus i0 must be finite");
  if (!(tau_rise > 0.0) || !(tau_decay > tau_rise)) {
    throw ValidationError("dexp stimulus requires tau_decay > tau_rise > 0");
  }
  Stimulus s;
  s.kind_ = Kind::Dexp;
  s.p0_ = i0;
  s.p1_ = tau_rise;
  s.p2_ = tau_decay;
  return s;
}

Stimulus Stimulus::ramp(double t0, double tr, double vf) {
  if (!std::isfinite(t0) || t0 < 0.0) throw ValidationError("ramp stimulus t0 must be >= 0");
  if (!(tr > 0.0) || !std::isfinite(tr)) throw ValidationError("ramp stimulus tr must be > 0");
  if (!std::isfinite(vf)) throw ValidationError("ramp stimulus vf must be finite");
  Stimulus s;
  s.kind_ = Kind::Ramp;
  s.p0_ = t0;
  s.p1_ = tr;
  s.p2_ = vf;
  return s;
}

double Stimulus::value(double t) const {
  switch (kind_) {
    case Kind::Dc:
      return p0_;
    case Kind::Pwl: {
      if (t <= points_.front().first) return points_.front().second;
      if (t >= points_.back().first) return points_.back().second;
      // first point with time > t; predecessor starts the active segment
      auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                 [](double tv, const auto& pt) { return tv < pt.first; });
      auto lo = hi - 1;
      const double f = (t - lo->first) / (hi->first - lo->first);
      return lo->second + f * (hi->second - lo->second);
    }
    case Kind::Dexp:
      if (t < 0.0) return 0.0;
      return p0_ * (std::exp(-t / p2_) - std::exp(-t / p1_));
    case Kind::Ramp:
      if (t <= p0_) return 0.0;
      if (t >= p0_ + p1_) return p2_;
      return p2_ * (t - p0_) / p1_;
  }
  return 0.0;
}

std::vector<double> Stimulus::breakpoints() const {
  switch (kind_) {
    case Kind::Dc:
    case Kind::Dexp:
      return {};
    case Kind::Pwl: {
      std::vector<double> bp;
      bp.reserve(points_.size());
      for (const auto& pt : points_) bp.push_back(pt.first);
      return bp;
    }
    case Kind::Ramp:
      return {p0_, p0_ + p1_};
  }
  return {};
}

double Stimulus::dexp_peak_time() const {
  if (kind_ != Kind::Dexp) throw ValidationError("dexp_peak_time on non-dexp stimulus");
  // d/dt = 0  =>  t* = ln(tau_decay/tau_rise) * tau_rise*tau_decay/(tau_decay-tau_rise)
  return std::log(p2_ / p1_) * p1_ * p2_ / (p2_ - p1_);
}

std::string Stimulus::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Dc:
      os << "dc " << format_g17(p0_);
      break;
    case Kind::Pwl:
      os << "pwl";
      for (const auto& pt : points_) os << " (" << format_g17(pt.first) << ' ' << format_g17(pt.second) << ')';
      break;
    case Kind::Dexp:
      os << "dexp " << format_g17(p0_) << ' ' << format_g17(p1_) << ' ' << format_g17(p2_);
      break;
    case Kind::Ramp:
      os << "ramp " << format_g17(p0_) << ' ' << format_g17(p1_) << ' ' << format_g17(p2_);
      break;
  }
  return os.str();
}

}  // namespace gcm
