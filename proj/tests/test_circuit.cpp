#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gcm/circuit.hpp"
#include "gcm/errors.hpp"
#include "gcm/model_grid.hpp"
#include "gcm/netlist.hpp"
#include "gcm/stimulus.hpp"

using namespace gcm;

namespace {

ModelGrid test_grid() {
  ModelGrid g;
  g.axis1 = {14.5, 15.5, 16.5, 17.5, 18.5};
  g.axis2 = {5.1, 6.1, 7.1, 8.1};
  for (std::size_t i = 0; i < g.axis1.size(); ++i)
    for (std::size_t j = 0; j < g.axis2.size(); ++j) {
      ModelCard c;
      c.lg = g.axis1[i];
      c.wfin = g.axis2[j];
      c.vt0 = 0.28 + 0.005 * static_cast<double>(i);
      g.cards.push_back(c);
    }
  g.validate();
  return g;
}

const char* kRcNetlist =
    "* simple low-pass\n"
    "V1 in 0 dc 0.75\n"
    "R1 in out 100k\n"
    "C1 out 0 1p\n"
    ".tran 1u\n";

}  // namespace

TEST_CASE("resistive divider hits the midpoint") {
  const Netlist nl = parse_netlist(
      "V1 in 0 dc 0.75\n"
      "R1 in out 1k\n"
      "R2 out 0 1k\n");
  const DcResult dc = solve_dc(nl);
  CHECK(dc.v(nl.find_node("out")) == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(dc.v(nl.find_node("in")) == doctest::Approx(0.75).epsilon(1e-12));
  // + branch current flows np -> nm inside the source
  REQUIRE(dc.branch_i.size() == 1);
  CHECK(dc.branch_i[0] == doctest::Approx(-0.75 / 2000.0).epsilon(1e-9));
  CHECK(dc.max_kcl <= 1e-9);
}

TEST_CASE("three-resistor ladder within a microvolt") {
  const Netlist nl = parse_netlist(
      "V1 top 0 dc 0.75\n"
      "R1 top a 1k\n"
      "R2 a b 2k\n"
      "R3 b 0 3k\n");
  const DcResult dc = solve_dc(nl);
  CHECK(std::abs(dc.v(nl.find_node("a")) - 0.625) <= 1e-6);
  CHECK(std::abs(dc.v(nl.find_node("b")) - 0.375) <= 1e-6);
}

TEST_CASE("diode-connected transistor agrees with a scalar bisection oracle") {
  const ModelCard card;  // reference N card
  Netlist nl;
  const int n_in = nl.node_id("in");
  const int n_out = nl.node_id("out");
  nl.vsources.push_back({"V1", n_in, kGroundNode, Stimulus::dc(0.75)});
  nl.resistors.push_back({"R1", n_in, n_out, 10e3});
  nl.add_transistor("M1", n_out, n_out, kGroundNode, kGroundNode, nl.intern_card(card), 100.0);
  nl.check();
  const DcResult dc = solve_dc(nl);

  // oracle: lone unknown v solves (0.75 - v)/10k = Id(v, v)
  auto f = [&](double v) {
    return (0.75 - v) / 10e3 - eval_terminal_currents(card, {v, v, 0.0, 0.0}, 100.0).id;
  };
  double lo = 0.0, hi = 0.75;
  REQUIRE(f(lo) > 0.0);
  REQUIRE(f(hi) < 0.0);
  for (int k = 0; k < 100; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double v_oracle = 0.5 * (lo + hi);
  CHECK(std::abs(dc.v(n_out) - v_oracle) <= 1e-6);
  CHECK(dc.max_kcl <= 1e-9);
}

TEST_CASE("floating node yields a diagnostic, not a crash") {
  const Netlist nl = parse_netlist(
      "V1 in 0 dc 0.75\n"
      "R1 in out 1k\n"
      "C1 out q 1p\n");
  try {
    (void)solve_dc(nl);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    const std::string what = e.what();
    CHECK(what.find("floating") != std::string::npos);
    CHECK(what.find("'q'") != std::string::npos);
  }
}

TEST_CASE("RC low-pass step response matches the closed form") {
  const Netlist nl = parse_netlist(kRcNetlist);
  REQUIRE(nl.has_tran);
  CHECK(nl.tstop == doctest::Approx(1e-6).epsilon(1e-12));

  SolverOptions opt;
  opt.use_ic = true;  // ideal 0 -> 0.75 V step at t = 0
  opt.observe_times = {100e-9, 500e-9};
  const TransientResult tr = solve_transient(nl, nl.tstop, opt);
  const int out = nl.find_node("out");

  const double v_tau = tr.value_at(100e-9, out);
  const double v_5tau = tr.value_at(500e-9, out);
  CHECK(std::abs(v_tau - 0.75 * (1.0 - std::exp(-1.0))) <= 1e-3 * 0.75 * (1.0 - std::exp(-1.0)));
  CHECK(v_5tau == doctest::Approx(0.7449465397506859).epsilon(1e-3));
  CHECK(tr.max_kcl <= 1e-9);
  CHECK(tr.steps_accepted > 0);

  // observe_times are landed on exactly
  CHECK(std::find(tr.times.begin(), tr.times.end(), 100e-9) != tr.times.end());
  CHECK(std::find(tr.times.begin(), tr.times.end(), 500e-9) != tr.times.end());
  // times strictly increasing, ending at t_stop
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
  CHECK(tr.times.back() == doctest::Approx(1e-6).epsilon(1e-12));
}

TEST_CASE("halving the LTE tolerance moves the RC answer by < 0.05 percent") {
  const Netlist nl = parse_netlist(kRcNetlist);
  SolverOptions a;
  a.use_ic = true;
  a.observe_times = {100e-9};
  SolverOptions b = a;
  b.lte_reltol = 0.5e-3;
  const double va = solve_transient(nl, nl.tstop, a).value_at(100e-9, nl.find_node("out"));
  const double vb = solve_transient(nl, nl.tstop, b).value_at(100e-9, nl.find_node("out"));
  CHECK(std::abs(va - vb) <= 5e-4 * std::abs(va));
}

TEST_CASE("zero-stimulus netlist holds its DC point") {
  const Netlist nl = parse_netlist(
      "V1 in 0 dc 0.5\n"
      "R1 in out 1k\n"
      "C1 out 0 1p\n");
  const DcResult dc = solve_dc(nl);
  const TransientResult tr = solve_transient(nl, 1e-6);
  for (const auto& pt : tr.points) {
    for (std::size_t n = 0; n < nl.node_count(); ++n) {
      CHECK(std::abs(pt[n] - dc.node_v[n]) <= 1e-9);
    }
  }
}

TEST_CASE("closed capacitor loop conserves charge") {
  const Netlist nl = parse_netlist(
      "C1 0 a 1p\n"
      "C2 a b 1p\n"
      "C3 b 0 1p\n");
  SolverOptions opt;
  opt.use_ic = true;  // no sources: start from the all-zero state
  const TransientResult tr = solve_transient(nl, 1e-6, opt);
  auto total_q = [&](const std::vector<double>& pt) {
    auto v = [&](int n) { return n < 0 ? 0.0 : pt[static_cast<std::size_t>(n)]; };
    double q = 0.0;
    for (const Capacitor& c : nl.capacitors) q += c.farads * (v(c.n1) - v(c.n2));
    return q;
  };
  const double q0 = total_q(tr.points.front());
  for (const auto& pt : tr.points) CHECK(std::abs(total_q(pt) - q0) <= 1e-18);
}

TEST_CASE("integrator lands exactly on stimulus breakpoints") {
  const Netlist nl = parse_netlist(
      "V1 in 0 pwl (0 0) (50n 0) (51n 0.75)\n"
      "R1 in out 100k\n"
      "C1 out 0 1p\n");
  const TransientResult tr = solve_transient(nl, 300e-9);
  for (double bp : nl.vsources[0].stim.breakpoints()) {
    if (bp <= 0.0 || bp >= 300e-9) continue;
    CHECK(std::find(tr.times.begin(), tr.times.end(), bp) != tr.times.end());
  }
  // before the corner the output must still be at 0
  CHECK(std::abs(tr.value_at(50e-9, nl.find_node("out"))) <= 1e-6);
  CHECK(tr.value_at(300e-9, nl.find_node("out")) > 0.6);
}

TEST_CASE("stop_condition ends the run early") {
  const Netlist nl = parse_netlist(kRcNetlist);
  const int out = nl.find_node("out");
  SolverOptions opt;
  opt.use_ic = true;
  opt.stop_condition = [out](double, const std::vector<double>& x) {
    return x[static_cast<std::size_t>(out)] >= 0.5;
  };
  const TransientResult tr = solve_transient(nl, nl.tstop, opt);
  CHECK(tr.stopped_early);
  CHECK(tr.times.back() < 1e-6);
  CHECK(tr.points.back()[static_cast<std::size_t>(out)] >= 0.5);
}

TEST_CASE("transient results are deterministic") {
  const Netlist nl1 = parse_netlist(kRcNetlist);
  const Netlist nl2 = parse_netlist(kRcNetlist);
  SolverOptions opt;
  opt.use_ic = true;
  const std::string csv1 = transient_csv(solve_transient(nl1, nl1.tstop, opt));
  const std::string csv2 = transient_csv(solve_transient(nl2, nl2.tstop, opt));
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("t,", 0) == 0);

  const std::string dcsv1 = dc_csv(nl1, solve_dc(nl1));
  const std::string dcsv2 = dc_csv(nl2, solve_dc(nl2));
  CHECK(dcsv1 == dcsv2);
}

TEST_CASE("double-exponential stimulus: closed-form peak") {
  const double tr_ = 10e-9, td = 150e-9;
  const Stimulus s = Stimulus::dexp(1.7291050645648218, tr_, td);
  const double tp_formula = tr_ * td / (td - tr_) * std::log(td / tr_);
  CHECK(s.dexp_peak_time() == doctest::Approx(tp_formula).epsilon(1e-12));
  CHECK(s.dexp_peak_time() == doctest::Approx(2.9014823583237965e-08).epsilon(1e-12));
  CHECK(s.value(s.dexp_peak_time()) == doctest::Approx(1.33).epsilon(1e-10));
  CHECK(s.value(-1e-9) == 0.0);
  CHECK(s.dexp_i0() == 1.7291050645648218);
  CHECK_THROWS_AS((void)Stimulus::dexp(1.0, 150e-9, 10e-9), ValidationError);
}

TEST_CASE("piecewise-linear stimulus interpolates and clamps") {
  const Stimulus s = Stimulus::pwl({{0.0, 0.0}, {1e-6, 0.75}});
  CHECK(s.value(0.5e-6) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(s.value(2e-6) == 0.75);   // held after the last point
  CHECK(s.value(-1e-9) == 0.0);   // clamped before the first
  CHECK_THROWS_AS((void)Stimulus::pwl({{1e-6, 0.0}, {0.5e-6, 1.0}}), ValidationError);

  const Stimulus r = Stimulus::ramp(1e-6, 1e-6, 0.75);
  CHECK(r.value(0.5e-6) == 0.0);
  CHECK(r.value(1.5e-6) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(r.value(5e-6) == 0.75);
}

TEST_CASE("transistor element honors the mirror convention") {
  const ModelCard card;
  CardDevice dev(card);
  Transistor m;
  m.device = &dev;
  m.nfin = 3.0;
  const TerminalCurrents fwd = transistor_currents(m, 0.6, 0.5, 0.0, 0.0);
  m.mirror_p = true;
  const TerminalCurrents mir = transistor_currents(m, -0.6, -0.5, 0.0, 0.0);
  CHECK(mir.id == -fwd.id);
  CHECK(mir.is_ == -fwd.is_);
  const TerminalCharges qf = transistor_charges(m, -0.6, -0.5, 0.0, 0.0);
  m.mirror_p = false;
  const TerminalCharges qn = transistor_charges(m, 0.6, 0.5, 0.0, 0.0);
  CHECK(qf.qg == -qn.qg);
  CHECK(qf.qd == -qn.qd);
}

TEST_CASE("grammar: grid-bound transistor line") {
  const ModelGrid grid = test_grid();
  ModelContext ctx;
  ctx.grid = &grid;
  const Netlist nl = parse_netlist(
      "M1 vdd gate 0 0 gcm lg=17.8n wfin=6.3n nfin=20000\n"
      "V1 vdd 0 dc 0.75\n"
      "V2 gate 0 dc 0.75\n",
      ctx);
  REQUIRE(nl.transistors.size() == 1);
  const Transistor& m = nl.transistors[0];
  CHECK(m.nfin == 20000.0);
  CHECK(m.device->lg() == doctest::Approx(17.8).epsilon(1e-12));
  CHECK(m.device->polarity() == Polarity::N);
  CHECK_FALSE(m.mirror_p);
  CHECK(nl.node_name(m.d) == "vdd");
  CHECK(nl.node_name(m.g) == "gate");
  CHECK(m.s == kGroundNode);
}

TEST_CASE("grammar: card-file transistor uses the load hook") {
  ModelContext ctx;
  ctx.load_card = [](const std::string& ref) {
    CHECK(ref == "my.card");
    ModelCard c;
    c.vt0 = 0.33;
    return c;
  };
  const Netlist nl = parse_netlist(
      "M1 d g 0 0 my.card nfin=4\n"
      "V1 d 0 dc 0.75\n"
      "V2 g 0 dc 0.75\n",
      ctx);
  CHECK(nl.transistors[0].nfin == 4.0);
  CHECK(nl.transistors[0].device->lg() == 18.0);
}

TEST_CASE("grammar: units, case, comments") {
  const Netlist nl = parse_netlist(
      "* comment line\n"
      "# another comment\n"
      "r1 VDD out 100k\n"
      "c1 out 0 2.5u\n"
      "v1 VDD 0 DC 0.75\n"
      "RBIG out 0 3meg\n");
  CHECK(nl.resistors[0].ohms == doctest::Approx(1e5).epsilon(1e-12));
  CHECK(nl.capacitors[0].farads == doctest::Approx(2.5e-6).epsilon(1e-12));
  CHECK(nl.resistors[1].ohms == doctest::Approx(3e6).epsilon(1e-12));
}

TEST_CASE("grammar: errors carry line and column") {
  // trailing token
  try {
    (void)parse_netlist("C1 a 0 1p extra\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 11);
    CHECK(std::string(e.what()).find("extra") != std::string::npos);
  }
  // unknown element letter on line 2
  try {
    (void)parse_netlist("R1 a 0 1k\nX1 a b c\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  // malformed number
  CHECK_THROWS_AS((void)parse_netlist("R1 a 0 12q\n"), ParseError);
  // duplicate element name
  CHECK_THROWS_AS((void)parse_netlist("R1 a 0 1k\nR1 a 0 2k\n"), ParseError);
  // no ground anywhere
  CHECK_THROWS_AS((void)parse_netlist("R1 a b 1k\n"), ParseError);
  // card-file transistors must not carry geometry overrides
  ModelContext ctx;
  ctx.load_card = [](const std::string&) { return ModelCard{}; };
  CHECK_THROWS_AS(
      (void)parse_netlist("M1 d g 0 0 my.card lg=17.8n nfin=4\nV1 d 0 dc 0.1\n", ctx),
      ParseError);
  // gcm without a grid in context
  CHECK_THROWS_AS(
      (void)parse_netlist("M1 d g 0 0 gcm lg=17.8n wfin=6.3n nfin=4\nV1 d 0 dc 0.1\n"),
      ParseError);
  // nfin is mandatory
  const ModelGrid grid = test_grid();
  ModelContext gctx;
  gctx.grid = &grid;
  CHECK_THROWS_AS(
      (void)parse_netlist("M1 d g 0 0 gcm lg=17.8n wfin=6.3n\nV1 d 0 dc 0.1\n", gctx),
      ParseError);
}

TEST_CASE("programmatic netlists run the same structural checks") {
  Netlist nl;
  const int a = nl.node_id("a");
  nl.resistors.push_back({"R1", a, kGroundNode, 1e3});
  nl.resistors.push_back({"R1", a, kGroundNode, 2e3});  // duplicate name
  CHECK_THROWS_AS(nl.check(), ValidationError);

  Netlist nl2;
  const int b = nl2.node_id("b");
  nl2.resistors.push_back({"R1", b, kGroundNode, 0.0});  // zero ohms
  CHECK_THROWS_AS(nl2.check(), ValidationError);
}
