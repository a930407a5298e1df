#include "gcm/circuit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "gcm/errors.hpp"
#include "gcm/util.hpp"

namespace gcm {

TerminalCurrents transistor_currents(const Transistor& m, double vd, double vg, double vs,
                                     double vb) {
  if (!m.mirror_p) return m.device->currents({vd, vg, vs, vb}, m.nfin);
  TerminalCurrents tc = m.device->currents({-vd, -vg, -vs, -vb}, m.nfin);
  return {-tc.id, -tc.ig, -tc.is_, -tc.ib};
}

TerminalCharges transistor_charges(const Transistor& m, double vd, double vg, double vs,
                                   double vb) {
  if (!m.mirror_p) return m.device->charges({vd, vg, vs, vb}, m.nfin);
  TerminalCharges q = m.device->charges({-vd, -vg, -vs, -vb}, m.nfin);
  return {-q.qg, -q.qd, -q.qs, -q.qb};
}

namespace {

enum class Mode { Dc, BackwardEuler, Trapezoid };

// One integrated charge: a capacitor plate pair or a transistor
// terminal set. q_prev/i_prev feed the companion model.
struct ChargeState {
  double q_prev = 0.0;
  double i_prev = 0.0;
};

class Engine {
 public:
  Engine(const Netlist& nl, const SolverOptions& opt) : nl_(nl), opt_(opt) {
    nl_.check();
    nn_ = static_cast<int>(nl_.node_count());
    nvs_ = static_cast<int>(nl_.vsources.size());
    nx_ = nn_ + nvs_;
    // caps first, then 4 states per transistor (g, d, s, b)
    states_.resize(nl_.capacitors.size() + 4 * nl_.transistors.size());
  }

  int nx() const { return nx_; }
  int nn() const { return nn_; }

  double v_of(const std::vector<double>& x, int node) const {
    return node < 0 ? 0.0 : x[static_cast<std::size_t>(node)];
  }

  // Sum of currents leaving each node, then source branch equations.
  void residual(double t, const std::vector<double>& x, Mode mode, double h,
                std::vector<double>& f) const {
    f.assign(static_cast<std::size_t>(nx_), 0.0);
    auto add = [&](int node, double i) {
      if (node >= 0) f[static_cast<std::size_t>(node)] += i;
    };
    for (const auto& r : nl_.resistors) {
      const double i = (v_of(x, r.n1) - v_of(x, r.n2)) / r.ohms;
      add(r.n1, i);
      add(r.n2, -i);
    }
    if (gmin_ > 0.0) {
      for (int n = 0; n < nn_; ++n) f[static_cast<std::size_t>(n)] += gmin_ * x[static_cast<std::size_t>(n)];
    }
    for (int k = 0; k < nvs_; ++k) {
      const auto& vs = nl_.vsources[static_cast<std::size_t>(k)];
      const double ibr = x[static_cast<std::size_t>(nn_ + k)];
      add(vs.np, ibr);
      add(vs.nm, -ibr);
      f[static_cast<std::size_t>(nn_ + k)] =
          v_of(x, vs.np) - v_of(x, vs.nm) - src_scale_ * vs.stim.value(t);
    }
    for (const auto& is : nl_.isources) {
      const double i = src_scale_ * is.stim.value(t);
      add(is.np, i);
      add(is.nm, -i);
    }
    for (const auto& m : nl_.transistors) {
      const TerminalCurrents tc =
          transistor_currents(m, v_of(x, m.d), v_of(x, m.g), v_of(x, m.s), v_of(x, m.b));
      add(m.d, tc.id);
      add(m.g, tc.ig);
      add(m.s, tc.is_);
      add(m.b, tc.ib);
    }
    if (mode != Mode::Dc) {
      std::size_t si = 0;
      auto companion = [&](double q_now, const ChargeState& st) {
        if (mode == Mode::BackwardEuler) return (q_now - st.q_prev) / h;
        return 2.0 * (q_now - st.q_prev) / h - st.i_prev;
      };
      for (const auto& c : nl_.capacitors) {
        const double q = c.farads * (v_of(x, c.n1) - v_of(x, c.n2));
        const double i = companion(q, states_[si++]);
        add(c.n1, i);
        add(c.n2, -i);
      }
      for (const auto& m : nl_.transistors) {
        const TerminalCharges q =
            transistor_charges(m, v_of(x, m.d), v_of(x, m.g), v_of(x, m.s), v_of(x, m.b));
        add(m.g, companion(q.qg, states_[si++]));
        add(m.d, companion(q.qd, states_[si++]));
        add(m.s, companion(q.qs, states_[si++]));
        add(m.b, companion(q.qb, states_[si++]));
      }
    }
  }

  // Commit charge history at an accepted transient solution.
  void update_states(double t, const std::vector<double>& x, Mode mode, double h) {
    std::size_t si = 0;
    auto advance = [&](double q_now) {
      ChargeState& st = states_[si];
      const double i = (mode == Mode::BackwardEuler)
                           ? (q_now - st.q_prev) / h
                           : 2.0 * (q_now - st.q_prev) / h - st.i_prev;
      st.q_prev = q_now;
      st.i_prev = i;
      ++si;
    };
    (void)t;
    for (const auto& c : nl_.capacitors) {
      advance(c.farads * (v_of(x, c.n1) - v_of(x, c.n2)));
    }
    for (const auto& m : nl_.transistors) {
      const TerminalCharges q =
          transistor_charges(m, v_of(x, m.d), v_of(x, m.g), v_of(x, m.s), v_of(x, m.b));
      advance(q.qg);
      advance(q.qd);
      advance(q.qs);
      advance(q.qb);
    }
  }

  // Zero-rate charge history (DC start or all-zero initial condition).
  void init_states(const std::vector<double>& x) {
    std::size_t si = 0;
    for (const auto& c : nl_.capacitors) {
      states_[si].q_prev = c.farads * (v_of(x, c.n1) - v_of(x, c.n2));
      states_[si].i_prev = 0.0;
      ++si;
    }
    for (const auto& m : nl_.transistors) {
      const TerminalCharges q =
          transistor_charges(m, v_of(x, m.d), v_of(x, m.g), v_of(x, m.s), v_of(x, m.b));
      for (double qv : {q.qg, q.qd, q.qs, q.qb}) {
        states_[si].q_prev = qv;
        states_[si].i_prev = 0.0;
        ++si;
      }
    }
  }

  double total_transistor_charge() const {
    double q = 0.0;
    for (std::size_t k = nl_.capacitors.size(); k < states_.size(); ++k) q += states_[k].q_prev;
    return q;
  }

  struct NewtonOutcome {
    bool converged = false;
    int iters = 0;
    double max_kcl = std::numeric_limits<double>::infinity();
    std::string diagnostic;
  };

  NewtonOutcome newton(double t, std::vector<double>& x, Mode mode, double h) const {
    const std::size_t n = static_cast<std::size_t>(nx_);
    std::vector<double> f(n), fp(n), xt(n);
    residual(t, x, mode, h, f);
    NewtonOutcome out;
    Eigen::MatrixXd jac(nx_, nx_);
    Eigen::VectorXd rhs(nx_);
    for (int iter = 1; iter <= opt_.max_newton_iters; ++iter) {
      out.iters = iter;
      // forward-difference Jacobian, column per unknown
      for (int j = 0; j < nx_; ++j) {
        xt = x;
        const double dx = opt_.jac_rel_step * std::abs(x[static_cast<std::size_t>(j)]) +
                          opt_.jac_abs_step;
        xt[static_cast<std::size_t>(j)] += dx;
        residual(t, xt, mode, h, fp);
        for (int i = 0; i < nx_; ++i) {
          jac(i, j) = (fp[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i)]) / dx;
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
      if (lu.rank() < nx_) {
        // name the node whose column is closest to dead
        int worst = 0;
        double worst_norm = std::numeric_limits<double>::infinity();
        for (int j = 0; j < nn_; ++j) {
          const double cn = jac.col(j).norm();
          if (cn < worst_norm) {
            worst_norm = cn;
            worst = j;
          }
        }
        out.diagnostic = "singular MNA system (node '" + nl_.node_name(worst) +
                         "' appears floating)";
        return out;
      }
      for (int i = 0; i < nx_; ++i) rhs(i) = -f[static_cast<std::size_t>(i)];
      const Eigen::VectorXd dx = lu.solve(rhs);
      bool small_update = true;
      for (int i = 0; i < nx_; ++i) {
        double step = dx(i);
        if (i < nn_) step = std::clamp(step, -opt_.dv_limit, opt_.dv_limit);
        double xi = x[static_cast<std::size_t>(i)] + step;
        if (i < nn_) xi = std::clamp(xi, -opt_.v_clamp, opt_.v_clamp);
        const double applied = xi - x[static_cast<std::size_t>(i)];
        if (std::abs(applied) > opt_.newton_abstol + opt_.newton_reltol * std::abs(xi)) {
          small_update = false;
        }
        x[static_cast<std::size_t>(i)] = xi;
      }
      residual(t, x, mode, h, f);
      double max_kcl = 0.0;
      for (int i = 0; i < nn_; ++i) max_kcl = std::max(max_kcl, std::abs(f[static_cast<std::size_t>(i)]));
      out.max_kcl = max_kcl;
      if (small_update && max_kcl <= opt_.kcl_abstol) {
        out.converged = true;
        return out;
      }
    }
    out.diagnostic = "Newton did not converge in " + std::to_string(opt_.max_newton_iters) +
                     " iterations";
    return out;
  }

  double gmin_ = 0.0;
  double src_scale_ = 1.0;

  const Netlist& nl_;
  const SolverOptions& opt_;
  int nn_ = 0, nvs_ = 0, nx_ = 0;
  std::vector<ChargeState> states_;
};

}  // namespace

DcResult solve_dc(const Netlist& nl, const SolverOptions& opt, double t) {
  Engine eng(nl, opt);
  const std::size_t n = static_cast<std::size_t>(eng.nx());
  std::vector<double> x(n, 0.0);
  DcResult res;
  std::string last_diag;

  auto finish = [&](const Engine::NewtonOutcome& oc) {
    res.node_v.assign(x.begin(), x.begin() + eng.nn());
    res.branch_i.assign(x.begin() + eng.nn(), x.end());
    res.max_kcl = oc.max_kcl;
  };

  // 1. plain Newton from zero
  {
    Engine::NewtonOutcome oc = eng.newton(t, x, Mode::Dc, 0.0);
    res.newton_iters += oc.iters;
    if (oc.converged) {
      finish(oc);
      return res;
    }
    last_diag = oc.diagnostic;
  }

  // 2. gmin stepping: heavy shunt first, relax by decades, then remove
  {
    std::fill(x.begin(), x.end(), 0.0);
    bool ladder_ok = true;
    int stage = 0;
    for (double g = 1e-3; g >= 0.9e-12; g *= 0.1) {
      eng.gmin_ = g;
      ++stage;
      Engine::NewtonOutcome oc = eng.newton(t, x, Mode::Dc, 0.0);
      res.newton_iters += oc.iters;
      if (!oc.converged) {
        ladder_ok = false;
        if (!oc.diagnostic.empty()) last_diag = oc.diagnostic;
        break;
      }
    }
    if (ladder_ok) {
      eng.gmin_ = 0.0;
      Engine::NewtonOutcome oc = eng.newton(t, x, Mode::Dc, 0.0);
      res.newton_iters += oc.iters;
      if (oc.converged) {
        res.gmin_stage = stage;
        finish(oc);
        return res;
      }
      if (!oc.diagnostic.empty()) last_diag = oc.diagnostic;
    }
    eng.gmin_ = 0.0;
  }

  // 3. source stepping: ramp all sources together from 10% to 100%
  {
    std::fill(x.begin(), x.end(), 0.0);
    bool ok = true;
    for (int s = 1; s <= 10; ++s) {
      eng.src_scale_ = 0.1 * s;
      Engine::NewtonOutcome oc = eng.newton(t, x, Mode::Dc, 0.0);
      res.newton_iters += oc.iters;
      if (!oc.converged) {
        ok = false;
        if (!oc.diagnostic.empty()) last_diag = oc.diagnostic;
        break;
      }
      if (s == 10) {
        res.source_stage = s;
        finish(oc);
        return res;
      }
    }
    (void)ok;
  }

  if (last_diag.empty()) last_diag = "DC operating point did not converge";
  throw SolverError("solve_dc: " + last_diag);
}

namespace {

double interp_column(const TransientResult& tr, double t, std::size_t col) {
  if (tr.times.empty()) throw ValidationError("transient result is empty");
  if (t <= tr.times.front()) return tr.points.front()[col];
  if (t >= tr.times.back()) return tr.points.back()[col];
  const auto it = std::upper_bound(tr.times.begin(), tr.times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - tr.times.begin());
  const std::size_t lo = hi - 1;
  const double f = (t - tr.times[lo]) / (tr.times[hi] - tr.times[lo]);
  return tr.points[lo][col] + f * (tr.points[hi][col] - tr.points[lo][col]);
}

}  // namespace

double TransientResult::value_at(double t, int node) const {
  if (node < 0) return 0.0;
  return interp_column(*this, t, static_cast<std::size_t>(node));
}

double TransientResult::branch_at(double t, std::size_t source_index) const {
  return interp_column(*this, t, node_names.size() + source_index);
}

TransientResult solve_transient(const Netlist& nl, double t_stop, const SolverOptions& opt) {
  if (!(t_stop > 0.0) || !std::isfinite(t_stop)) {
    throw ValidationError("solve_transient: t_stop must be finite and > 0");
  }
  Engine eng(nl, opt);
  const std::size_t n = static_cast<std::size_t>(eng.nx());

  TransientResult res;
  res.node_names = nl.node_names;
  for (const auto& vs : nl.vsources) res.branch_names.push_back(vs.name);

  // hard breakpoints force a BE restart; soft ones are only landed on
  std::set<double> hard, soft;
  for (const auto& vs : nl.vsources) {
    for (double bp : vs.stim.breakpoints()) {
      if (bp > 0.0 && bp < t_stop) hard.insert(bp);
    }
  }
  for (const auto& is : nl.isources) {
    for (double bp : is.stim.breakpoints()) {
      if (bp > 0.0 && bp < t_stop) hard.insert(bp);
    }
  }
  for (double ot : opt.observe_times) {
    if (ot > 0.0 && ot < t_stop && !hard.count(ot)) soft.insert(ot);
  }

  std::vector<double> x(n, 0.0);
  if (opt.use_ic) {
    eng.init_states(x);
  } else {
    const DcResult dc = solve_dc(nl, opt, 0.0);
    std::copy(dc.node_v.begin(), dc.node_v.end(), x.begin());
    std::copy(dc.branch_i.begin(), dc.branch_i.end(), x.begin() + eng.nn());
    eng.init_states(x);
    res.newton_iters_total += dc.newton_iters;
  }

  auto push_point = [&](double t, const std::vector<double>& xv, double kcl) {
    res.times.push_back(t);
    res.points.emplace_back(xv);
    res.max_kcl = std::max(res.max_kcl, kcl);
  };
  push_point(0.0, x, 0.0);

  // (t, x) history for the LTE predictor; cleared at hard restarts
  std::deque<std::pair<double, std::vector<double>>> hist;
  hist.emplace_back(0.0, x);

  auto next_event = [&](double t) {
    double te = t_stop;
    auto ih = hard.upper_bound(t);
    if (ih != hard.end()) te = std::min(te, *ih);
    auto is = soft.upper_bound(t);
    if (is != soft.end()) te = std::min(te, *is);
    return te;
  };

  double t = 0.0;
  const double h0 = std::max(opt.hmin, std::min(opt.h0_scale * t_stop, next_event(0.0) * 0.25));
  double h_want = h0;
  bool next_be = true;

  while (t < t_stop) {
    if (h_want < opt.hmin) {
      throw SolverError("solve_transient: step underflow (< " + format_g17(opt.hmin) +
                        " s) at t = " + format_g17(t) + " s");
    }
    const double te = next_event(t);
    double t_new;
    double h_step;
    if (t + h_want >= te - 1e-12 * std::max(te, 1.0)) {
      t_new = te;  // land exactly on the event
      h_step = te - t;
    } else {
      h_step = h_want;
      t_new = t + h_step;
    }
    const Mode mode = next_be ? Mode::BackwardEuler : Mode::Trapezoid;

    std::vector<double> x_try = x;
    const Engine::NewtonOutcome oc = eng.newton(t_new, x_try, mode, h_step);
    res.newton_iters_total += oc.iters;
    if (!oc.converged) {
      if (!oc.diagnostic.empty() && oc.diagnostic.find("singular") != std::string::npos) {
        throw SolverError("solve_transient: " + oc.diagnostic + " at t = " + format_g17(t_new));
      }
      ++res.steps_rejected;
      h_want = h_step * opt.step_shrink;
      continue;
    }

    // LTE: compare against a polynomial predictor through the history
    double err = 0.0;
    if (hist.size() >= 2) {
      const auto& p1 = hist[hist.size() - 1];  // (t_n, x_n)
      const auto& p0 = hist[hist.size() - 2];
      for (int i = 0; i < eng.nn(); ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        double xp;
        if (hist.size() >= 3) {
          // quadratic extrapolation through the last three points
          const auto& pm = hist[hist.size() - 3];
          const double t0 = pm.first, t1 = p0.first, t2 = p1.first;
          const double l0 = ((t_new - t1) * (t_new - t2)) / ((t0 - t1) * (t0 - t2));
          const double l1 = ((t_new - t0) * (t_new - t2)) / ((t1 - t0) * (t1 - t2));
          const double l2 = ((t_new - t0) * (t_new - t1)) / ((t2 - t0) * (t2 - t1));
          xp = l0 * pm.second[ui] + l1 * p0.second[ui] + l2 * p1.second[ui];
        } else {
          const double slope = (p1.second[ui] - p0.second[ui]) / (p1.first - p0.first);
          xp = p1.second[ui] + slope * (t_new - p1.first);
        }
        const double scale = opt.lte_abstol +
                             opt.lte_reltol * std::max(std::abs(x_try[ui]), std::abs(p1.second[ui]));
        err = std::max(err, std::abs(x_try[ui] - xp) / scale);
      }
      err /= opt.trtol;
    }
    if (err > 1.0) {
      ++res.steps_rejected;
      h_want = h_step * opt.step_shrink;
      continue;
    }

    // accept
    eng.update_states(t_new, x_try, mode, h_step);
    x = std::move(x_try);
    t = t_new;
    ++res.steps_accepted;
    push_point(t, x, oc.max_kcl);
    hist.emplace_back(t, x);
    while (hist.size() > 3) hist.pop_front();

    const bool hit_hard = hard.count(t) > 0;
    if (hit_hard) {
      // waveform corner: restart the integrator gently
      next_be = true;
      hist.clear();
      hist.emplace_back(t, x);
      const double gap = next_event(t) - t;
      h_want = std::max(opt.hmin, std::min(h_step * 0.1, gap * 0.25));
    } else {
      next_be = false;
      const double base = std::max(h_want, h_step);
      if (err <= 0.5) h_want = base * opt.step_grow;
      else h_want = base;
    }

    if (opt.stop_condition && opt.stop_condition(t, x)) {
      res.stopped_early = true;
      break;
    }
  }
  return res;
}

std::string transient_csv(const TransientResult& tr) {
  std::ostringstream os;
  os << 't';
  for (const auto& nn : tr.node_names) os << ',' << nn;
  for (const auto& bn : tr.branch_names) os << ",I(" << bn << ')';
  os << '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << format_g17(tr.times[k]);
    for (double v : tr.points[k]) os << ',' << format_g17(v);
    os << '\n';
  }
  return os.str();
}

std::string dc_csv(const Netlist& nl, const DcResult& dc) {
  std::ostringstream os;
  os << "quantity,value\n";
  for (std::size_t i = 0; i < nl.node_names.size(); ++i) {
    os << "V(" << nl.node_names[i] << ")," << format_g17(dc.node_v[i]) << '\n';
  }
  for (std::size_t k = 0; k < nl.vsources.size(); ++k) {
    os << "I(" << nl.vsources[k].name << ")," << format_g17(dc.branch_i[k]) << '\n';
  }
  return os.str();
}

}  // namespace gcm
