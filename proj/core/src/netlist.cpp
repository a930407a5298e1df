#include "gcm/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "gcm/errors.hpp"
#include "gcm/util.hpp"

namespace gcm {

int Netlist::node_id(const std::string& name) {
  if (name == "0") return kGroundNode;
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    if (node_names[i] == name) return static_cast<int>(i);
  }
  node_names.push_back(name);
  return static_cast<int>(node_names.size()) - 1;
}

int Netlist::find_node(const std::string& name) const {
  if (name == "0") return kGroundNode;
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    if (node_names[i] == name) return static_cast<int>(i);
  }
  return -2;
}

const std::string& Netlist::node_name(int id) const {
  static const std::string ground = "0";
  if (id == kGroundNode) return ground;
  return node_names.at(static_cast<std::size_t>(id));
}

Transistor& Netlist::add_transistor(const std::string& name, int d, int g, int s, int b,
                                    const Device* dev, double nfin, bool mirror_p) {
  Transistor t;
  t.name = name;
  t.d = d;
  t.g = g;
  t.s = s;
  t.b = b;
  t.device = dev;
  t.nfin = nfin;
  t.mirror_p = mirror_p;
  transistors.push_back(t);
  return transistors.back();
}

const Device* Netlist::intern_card(const ModelCard& card) {
  owned_cards.push_back(card);
  card_devices.emplace_back(owned_cards.back());
  return &card_devices.back();
}

const Device* Netlist::intern_ensemble(GeneralModel gm) {
  ensemble_devices.emplace_back(std::move(gm));
  return &ensemble_devices.back();
}

void Netlist::check() const {
  std::set<std::string> names;
  auto add_name = [&](const std::string& n) {
    if (!names.insert(n).second) {
      throw ValidationError("duplicate element name '" + n + "'");
    }
  };
  const int nn = static_cast<int>(node_names.size());
  auto check_node = [&](int id, const std::string& elem) {
    if (id < kGroundNode || id >= nn) {
      throw ValidationError("element '" + elem + "' references an unknown node id");
    }
  };
  bool touches_ground = false;
  auto see = [&](int id) { touches_ground = touches_ground || id == kGroundNode; };
  for (const auto& r : resistors) {
    add_name(r.name);
    check_node(r.n1, r.name);
    check_node(r.n2, r.name);
    see(r.n1);
    see(r.n2);
    if (!(r.ohms > 0.0) || !std::isfinite(r.ohms)) {
      throw ValidationError("resistor '" + r.name + "' must have finite resistance > 0");
    }
  }
  for (const auto& c : capacitors) {
    add_name(c.name);
    check_node(c.n1, c.name);
    check_node(c.n2, c.name);
    see(c.n1);
    see(c.n2);
    if (!(c.farads > 0.0) || !std::isfinite(c.farads)) {
      throw ValidationError("capacitor '" + c.name + "' must have finite capacitance > 0");
    }
  }
  for (const auto& v : vsources) {
    add_name(v.name);
    check_node(v.np, v.name);
    check_node(v.nm, v.name);
    see(v.np);
    see(v.nm);
  }
  for (const auto& i : isources) {
    add_name(i.name);
    check_node(i.np, i.name);
    check_node(i.nm, i.name);
    see(i.np);
    see(i.nm);
  }
  for (const auto& m : transistors) {
    add_name(m.name);
    check_node(m.d, m.name);
    check_node(m.g, m.name);
    check_node(m.s, m.name);
    check_node(m.b, m.name);
    see(m.d);
    see(m.g);
    see(m.s);
    see(m.b);
    if (m.device == nullptr) {
      throw ValidationError("transistor '" + m.name + "' has no model bound");
    }
    if (!(m.nfin >= 1.0) || !std::isfinite(m.nfin)) {
      throw ValidationError("transistor '" + m.name + "' must have nfin >= 1");
    }
  }
  if (names.empty()) throw ValidationError("netlist has no elements");
  if (!touches_ground) {
    throw ValidationError("netlist has no ground reference (node '0')");
  }
}

namespace {

struct Token {
  std::string text;
  int col = 1;  // 1-based column of the first character
};

std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '(' && line[i] != ')') {
      ++i;
    }
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Token> toks, int lineno, std::string origin)
      : toks_(std::move(toks)), lineno_(lineno), origin_(std::move(origin)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const {
    if (done()) fail("unexpected end of line", end_col());
    return toks_[pos_];
  }
  Token take(const char* what) {
    if (done()) fail(std::string("expected ") + what, end_col());
    return toks_[pos_++];
  }
  std::string take_word(const char* what) {
    Token t = take(what);
    if (t.text == "(" || t.text == ")") {
      fail(std::string("expected ") + what + ", got '" + t.text + "'", t.col);
    }
    return t.text;
  }
  double take_number(const char* what) {
    Token t = take(what);
    try {
      return parse_si_value(t.text);
    } catch (const ValidationError&) {
      fail(std::string("malformed number '") + t.text + "' for " + what, t.col);
    }
    return 0.0;  // unreachable
  }
  void expect(const std::string& literal) {
    Token t = take(literal.c_str());
    if (t.text != literal) {
      fail("expected '" + literal + "', got '" + t.text + "'", t.col);
    }
  }
  void expect_end() const {
    if (!done()) {
      fail("trailing token '" + toks_[pos_].text + "'", toks_[pos_].col);
    }
  }
  [[noreturn]] void fail(const std::string& msg, int col) const {
    throw ParseError(origin_ + ": " + msg, lineno_, col);
  }
  int end_col() const { return toks_.empty() ? 1 : toks_.back().col + static_cast<int>(toks_.back().text.size()); }
  int lineno() const { return lineno_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int lineno_;
  std::string origin_;
};

Stimulus parse_v_stimulus(LineParser& lp) {
  Token kw = lp.take("stimulus kind (dc | pwl | ramp)");
  const std::string kind = to_lower(kw.text);
  if (kind == "dc") {
    return Stimulus::dc(lp.take_number("dc value"));
  }
  if (kind == "ramp") {
    const double t0 = lp.take_number("ramp t0");
    const double tr = lp.take_number("ramp tr");
    const double vf = lp.take_number("ramp vf");
    try {
      return Stimulus::ramp(t0, tr, vf);
    } catch (const ValidationError& e) {
      lp.fail(e.what(), kw.col);
    }
  }
  if (kind == "pwl") {
    std::vector<std::pair<double, double>> pts;
    while (!lp.done()) {
      lp.expect("(");
      const double t = lp.take_number("pwl time");
      const double v = lp.take_number("pwl value");
      lp.expect(")");
      pts.emplace_back(t, v);
    }
    try {
      return Stimulus::pwl(std::move(pts));
    } catch (const ValidationError& e) {
      lp.fail(e.what(), kw.col);
    }
  }
  lp.fail("unknown voltage stimulus kind '" + kw.text + "'", kw.col);
}

Stimulus parse_i_stimulus(LineParser& lp) {
  Token kw = lp.take("stimulus kind (dc | dexp)");
  const std::string kind = to_lower(kw.text);
  if (kind == "dc") {
    return Stimulus::dc(lp.take_number("dc value"));
  }
  if (kind == "dexp") {
    const double i0 = lp.take_number("dexp i0");
    const double tr = lp.take_number("dexp tau_rise");
    const double td = lp.take_number("dexp tau_decay");
    try {
      return Stimulus::dexp(i0, tr, td);
    } catch (const ValidationError& e) {
      lp.fail(e.what(), kw.col);
    }
  }
  lp.fail("unknown current stimulus kind '" + kw.text + "'", kw.col);
}

}  // namespace

Netlist parse_netlist(const std::string& text, const ModelContext& ctx,
                      const std::string& origin) {
  Netlist nl;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '*' || stripped[0] == '#') continue;
    LineParser lp(tokenize_line(line), lineno, origin);
    Token head = lp.take("element or directive");
    if (head.text[0] == '.') {
      const std::string dir = to_lower(head.text);
      if (dir == ".tran") {
        const double tstop = lp.take_number(".tran stop time");
        lp.expect_end();
        if (!(tstop > 0.0)) lp.fail(".tran stop time must be > 0", head.col);
        nl.has_tran = true;
        nl.tstop = tstop;
      } else if (dir == ".op") {
        lp.expect_end();
        nl.has_op = true;
      } else {
        lp.fail("unknown directive '" + head.text + "'", head.col);
      }
      continue;
    }
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(head.text[0])));
    const std::string& name = head.text;
    switch (letter) {
      case 'R': {
        Resistor r;
        r.name = name;
        r.n1 = nl.node_id(lp.take_word("node"));
        r.n2 = nl.node_id(lp.take_word("node"));
        r.ohms = lp.take_number("resistance");
        lp.expect_end();
        nl.resistors.push_back(std::move(r));
        break;
      }
      case 'C': {
        Capacitor c;
        c.name = name;
        c.n1 = nl.node_id(lp.take_word("node"));
        c.n2 = nl.node_id(lp.take_word("node"));
        c.farads = lp.take_number("capacitance");
        lp.expect_end();
        nl.capacitors.push_back(std::move(c));
        break;
      }
      case 'V': {
        VSource v;
        v.name = name;
        v.np = nl.node_id(lp.take_word("node"));
        v.nm = nl.node_id(lp.take_word("node"));
        v.stim = parse_v_stimulus(lp);
        lp.expect_end();
        nl.vsources.push_back(std::move(v));
        break;
      }
      case 'I': {
        ISource i;
        i.name = name;
        i.np = nl.node_id(lp.take_word("node"));
        i.nm = nl.node_id(lp.take_word("node"));
        i.stim = parse_i_stimulus(lp);
        lp.expect_end();
        nl.isources.push_back(std::move(i));
        break;
      }
      case 'M': {
        Transistor m;
        m.name = name;
        m.d = nl.node_id(lp.take_word("drain node"));
        m.g = nl.node_id(lp.take_word("gate node"));
        m.s = nl.node_id(lp.take_word("source node"));
        m.b = nl.node_id(lp.take_word("bulk node"));
        Token model = lp.take("model (card file path or 'gcm')");
        bool have_lg = false, have_wfin = false, have_nfin = false;
        double lg_nm = 0.0, wfin_nm = 0.0, nfin = 0.0;
        while (!lp.done()) {
          Token t = lp.take("parameter");
          const std::size_t eq = t.text.find('=');
          if (eq == std::string::npos) {
            lp.fail("trailing token '" + t.text + "'", t.col);
          }
          const std::string key = to_lower(t.text.substr(0, eq));
          const std::string val = t.text.substr(eq + 1);
          double num = 0.0;
          try {
            num = parse_si_value(val);
          } catch (const ValidationError&) {
            lp.fail("malformed number '" + val + "' for " + key, t.col);
          }
          if (key == "lg") {
            have_lg = true;
            lg_nm = num * 1e9;  // grammar value is meters; design space is nm
          } else if (key == "wfin") {
            have_wfin = true;
            wfin_nm = num * 1e9;
          } else if (key == "nfin") {
            have_nfin = true;
            nfin = num;
          } else {
            lp.fail("unknown transistor parameter '" + key + "'", t.col);
          }
        }
        if (!have_nfin) lp.fail("transistor requires nfin=<count>", model.col);
        m.nfin = nfin;
        if (to_lower(model.text) == "gcm") {
          if (ctx.grid == nullptr) {
            lp.fail("model 'gcm' used but no model grid is loaded", model.col);
          }
          if (!have_lg || !have_wfin) {
            lp.fail("model 'gcm' requires lg= and wfin=", model.col);
          }
          GeneralModel gm;
          try {
            gm = locate_and_weigh(*ctx.grid, {lg_nm, wfin_nm});
          } catch (const std::exception& e) {
            lp.fail(e.what(), model.col);
          }
          m.device = nl.intern_ensemble(std::move(gm));
        } else {
          if (have_lg || have_wfin) {
            lp.fail("card-file transistors take geometry from the card; lg=/wfin= apply only to 'gcm'",
                    model.col);
          }
          ModelCard card;
          try {
            card = ctx.load_card ? ctx.load_card(model.text) : load_model_card(model.text);
          } catch (const std::exception& e) {
            lp.fail(std::string("cannot load card '") + model.text + "': " + e.what(), model.col);
          }
          m.device = nl.intern_card(card);
        }
        nl.transistors.push_back(std::move(m));
        break;
      }
      default:
        lp.fail(std::string("unknown element letter '") + head.text[0] + "'", head.col);
    }
  }
  try {
    nl.check();
  } catch (const ValidationError& e) {
    throw ParseError(origin + ": " + e.what(), lineno, 1);
  }
  return nl;
}

Netlist load_netlist(const std::filesystem::path& path, const ModelContext& ctx) {
  ModelContext local = ctx;
  if (!local.load_card) {
    const std::filesystem::path dir = path.parent_path();
    local.load_card = [dir](const std::string& ref) {
      std::filesystem::path p(ref);
      if (p.is_relative()) p = dir / p;
      return load_model_card(p);
    };
  }
  return parse_netlist(read_file(path), local, path.filename().string());
}

}  // namespace gcm
