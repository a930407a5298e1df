#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gcm/netlist.hpp"

namespace gcm {

struct SolverOptions {
  // Newton on the MNA system
  int max_newton_iters = 50;
  double newton_abstol = 1e-6;   // V, update tolerance: abs + rel*|V|
  double newton_reltol = 1e-3;
  double kcl_abstol = 1e-9;      // A, node residual at accepted solutions
  double dv_limit = 0.5;         // V, per-iteration update clamp on nodes
  double v_clamp = 10.0;         // V, hard bound on node voltages
  double jac_rel_step = 1e-6;    // numeric Jacobian: rel*|x| + abs
  double jac_abs_step = 1e-9;

  // Transient step control
  double lte_reltol = 1e-3;
  double lte_abstol = 1e-6;      // V
  double trtol = 3.0;            // LTE acceptance divisor
  double step_shrink = 0.5;
  double step_grow = 1.5;
  double hmin = 1e-15;           // s
  double h0_scale = 1e-6;        // first step = h0_scale * t_stop

  // Start transient from an all-zero state instead of the t=0 DC point
  // (floating-rail events).
  bool use_ic = false;

  // Extra times the integrator must land on exactly (no restart there).
  std::vector<double> observe_times;

  // Checked after every accepted point; return true to stop early.
  // x holds node voltages [0,n) then source branch currents.
  std::function<bool(double t, const std::vector<double>& x)> stop_condition;
};

struct DcResult {
  std::vector<double> node_v;    // by node id
  std::vector<double> branch_i;  // by vsource order; + flows np -> nm inside the source
  int newton_iters = 0;
  double max_kcl = 0.0;          // A
  int gmin_stage = 0;            // 0 = plain Newton solved it
  int source_stage = 0;

  double v(int node) const { return node < 0 ? 0.0 : node_v.at(static_cast<std::size_t>(node)); }
};

// Newton with numeric Jacobian; gmin stepping then source stepping on
// failure. Sources are evaluated at time t (default 0).
DcResult solve_dc(const Netlist& nl, const SolverOptions& opt = {}, double t = 0.0);

struct TransientResult {
  std::vector<std::string> node_names;    // column order for x
  std::vector<std::string> branch_names;  // vsource names, after nodes
  std::vector<double> times;
  std::vector<std::vector<double>> points;  // per time: nodes then branches

  int steps_accepted = 0;
  int steps_rejected = 0;
  int newton_iters_total = 0;
  double max_kcl = 0.0;
  bool stopped_early = false;

  double v_at(std::size_t point_index, int node) const {
    return node < 0 ? 0.0 : points[point_index][static_cast<std::size_t>(node)];
  }
  // Linear interpolation between accepted points.
  double value_at(double t, int node) const;
  double branch_at(double t, std::size_t source_index) const;
};

// Trapezoidal integration with backward-Euler startup and restarts at
// stimulus breakpoints; adaptive step from the local truncation error.
TransientResult solve_transient(const Netlist& nl, double t_stop,
                                const SolverOptions& opt = {});

// Terminal quantities of one netlist transistor at given node voltages,
// honoring the mirror_p convention (all terminals and outputs negated).
TerminalCurrents transistor_currents(const Transistor& m, double vd, double vg, double vs,
                                     double vb);
TerminalCharges transistor_charges(const Transistor& m, double vd, double vg, double vs,
                                   double vb);

// "t,<node>...,I(<vsource>)..." with one row per accepted point.
std::string transient_csv(const TransientResult& tr);
std::string dc_csv(const Netlist& nl, const DcResult& dc);

}  // namespace gcm
