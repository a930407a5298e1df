#include "gcm/model_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gcm/errors.hpp"
#include "gcm/util.hpp"

namespace gcm {

void ModelGrid::validate() const {
  auto check_axis = [](const std::vector<double>& ax, const std::string& label) {
    if (ax.size() < 2)
      throw ValidationError("grid axis '" + label + "' needs at least 2 values");
    for (std::size_t i = 0; i + 1 < ax.size(); ++i)
      if (!(ax[i] < ax[i + 1]))
        throw ValidationError("grid axis '" + label + "' not strictly ascending");
    for (double v : ax)
      if (!(std::isfinite(v) && v > 0.0))
        throw ValidationError("grid axis '" + label + "' values must be positive");
  };
  check_axis(axis1, axis1_label);
  check_axis(axis2, axis2_label);
  if (cards.size() != axis1.size() * axis2.size())
    throw ValidationError("grid card count does not match lattice size");
  for (std::size_t i = 0; i < axis1.size(); ++i)
    for (std::size_t j = 0; j < axis2.size(); ++j) {
      const ModelCard& c = card(i, j);
      c.validate();
      if (std::abs(c.lg - axis1[i]) > 1e-9 || std::abs(c.wfin - axis2[j]) > 1e-9)
        throw ValidationError("card at node (" + std::to_string(i) + "," + std::to_string(j) +
                              ") has (lg, wfin) != its lattice coordinates");
      if (c.polarity != cards.front().polarity)
        throw ValidationError("grid mixes polarities");
    }
}

namespace {

// Index of the cell [ax[c], ax[c+1]] containing q; exact hits on an
// interior node go to the lower cell.
std::size_t cell_of(const std::vector<double>& ax, double q, const std::string& label) {
  if (!(q >= ax.front() && q <= ax.back()))
    throw OutOfHullError(label, q, ax.front(), ax.back());
  auto it = std::lower_bound(ax.begin(), ax.end(), q);  // first >= q
  std::size_t i = static_cast<std::size_t>(it - ax.begin());
  std::size_t c = (i == 0) ? 0 : i - 1;
  if (c > ax.size() - 2) c = ax.size() - 2;
  return c;
}

}  // namespace

GeneralModel locate_and_weigh(const ModelGrid& grid, const DesignPoint& query) {
  grid.validate();
  if (!(std::isfinite(query.lg) && query.lg > 0.0 && std::isfinite(query.wfin) &&
        query.wfin > 0.0))
    throw ValidationError("design point coordinates must be positive and finite");
  const std::size_t c1 = cell_of(grid.axis1, query.lg, grid.axis1_label);
  const std::size_t c2 = cell_of(grid.axis2, query.wfin, grid.axis2_label);

  const std::array<std::pair<std::size_t, std::size_t>, 4> corner_ij = {{
      {c1, c2}, {c1, c2 + 1}, {c1 + 1, c2 + 1}, {c1 + 1, c2}}};

  GeneralModel gm;
  gm.query = query;
  gm.grid = &grid;

  std::array<double, 4> dist{};
  for (int k = 0; k < 4; ++k) {
    const auto [i, j] = corner_ij[k];
    gm.corners[k].node = grid.index(i, j);
    dist[k] = std::hypot(query.lg - grid.axis1[i], query.wfin - grid.axis2[j]);
  }

  int coincident = -1;
  for (int k = 0; k < 4; ++k)
    if (dist[k] < 1e-9) {
      coincident = k;
      break;
    }
  if (coincident >= 0) {
    for (int k = 0; k < 4; ++k) gm.corners[k].weight = (k == coincident) ? 1.0 : 0.0;
    return gm;
  }

  double inv_sum = 0.0;
  std::array<double, 4> inv{};
  for (int k = 0; k < 4; ++k) {
    inv[k] = 1.0 / dist[k];
    inv_sum += inv[k];
  }
  for (int k = 0; k < 4; ++k) gm.corners[k].weight = inv[k] / inv_sum;
  return gm;
}

namespace {

std::array<WeightedNode, 4> sorted_by_node(const GeneralModel& gm) {
  std::array<WeightedNode, 4> ns = gm.corners;
  std::sort(ns.begin(), ns.end(),
            [](const WeightedNode& a, const WeightedNode& b) { return a.node < b.node; });
  return ns;
}

}  // namespace

TerminalCurrents ensemble_currents(const GeneralModel& gm, const BiasPoint& bias, double nfin) {
  if (!gm.grid) throw ValidationError("general model is not bound to a grid");
  TerminalCurrents out;
  for (const WeightedNode& wn : sorted_by_node(gm)) {
    const TerminalCurrents tc = eval_terminal_currents(gm.grid->cards[wn.node], bias, nfin);
    out.id += wn.weight * tc.id;
    out.ig += wn.weight * tc.ig;
    out.is_ += wn.weight * tc.is_;
    out.ib += wn.weight * tc.ib;
  }
  return out;
}

TerminalCharges ensemble_charges(const GeneralModel& gm, const BiasPoint& bias, double nfin) {
  if (!gm.grid) throw ValidationError("general model is not bound to a grid");
  TerminalCharges out;
  for (const WeightedNode& wn : sorted_by_node(gm)) {
    const TerminalCharges tq = eval_terminal_charges(gm.grid->cards[wn.node], bias, nfin);
    out.qg += wn.weight * tq.qg;
    out.qd += wn.weight * tq.qd;
    out.qs += wn.weight * tq.qs;
    out.qb += wn.weight * tq.qb;
  }
  return out;
}

EnsembleDevice::EnsembleDevice(GeneralModel gm) : gm_(std::move(gm)) {
  if (!gm_.grid) throw ValidationError("general model is not bound to a grid");
}

double EnsembleDevice::weff() const {
  double hfin = 0.0;
  for (const WeightedNode& wn : gm_.corners) hfin += wn.weight * gm_.grid->cards[wn.node].hfin;
  return 2.0 * hfin + gm_.query.wfin;
}

Polarity EnsembleDevice::polarity() const {
  return gm_.grid->cards[gm_.corners[0].node].polarity;
}

std::vector<SeamEdge> seam_gap(const ModelGrid& grid, const std::vector<BiasPoint>& bias_set) {
  grid.validate();
  std::vector<SeamEdge> out;
  auto probe = [&](const DesignPoint& a, const DesignPoint& b) {
    const GeneralModel ga = locate_and_weigh(grid, a);
    const GeneralModel gb = locate_and_weigh(grid, b);
    double gap = 0.0;
    for (const BiasPoint& bias : bias_set) {
      const double ia = ensemble_currents(ga, bias, 1.0).id;
      const double ib = ensemble_currents(gb, bias, 1.0).id;
      const double denom = std::max(std::max(std::abs(ia), std::abs(ib)), 1e-12);
      gap = std::max(gap, std::abs(ia - ib) / denom);
    }
    return gap;
  };

  for (std::size_t k = 1; k + 1 < grid.axis1.size(); ++k) {
    const double a = grid.axis1[k];
    const double h = 0.5 * std::min(a - grid.axis1[k - 1], grid.axis1[k + 1] - a) * 1e-6;
    SeamEdge e{1, a, 0.0};
    for (std::size_t j = 0; j + 1 < grid.axis2.size(); ++j) {
      const double w = 0.5 * (grid.axis2[j] + grid.axis2[j + 1]);
      e.max_gap = std::max(e.max_gap, probe({a - h, w}, {a + h, w}));
    }
    out.push_back(e);
  }
  for (std::size_t k = 1; k + 1 < grid.axis2.size(); ++k) {
    const double a = grid.axis2[k];
    const double h = 0.5 * std::min(a - grid.axis2[k - 1], grid.axis2[k + 1] - a) * 1e-6;
    SeamEdge e{2, a, 0.0};
    for (std::size_t i = 0; i + 1 < grid.axis1.size(); ++i) {
      const double l = 0.5 * (grid.axis1[i] + grid.axis1[i + 1]);
      e.max_gap = std::max(e.max_gap, probe({l, a - h}, {l, a + h}));
    }
    out.push_back(e);
  }
  return out;
}

ModelGrid load_grid(const std::filesystem::path& manifest_path) {
  const std::string text = read_file(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();

  ModelGrid grid;
  std::vector<std::string> card_paths;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto parse_values = [&](const std::string& v, int ln) {
    std::vector<double> vals;
    std::istringstream vs(v);
    std::string tok;
    while (vs >> tok) {
      try {
        vals.push_back(parse_double(tok));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), ln);
      }
    }
    return vals;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq != std::string::npos) {
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key == "axis1_label") grid.axis1_label = value;
      else if (key == "axis2_label") grid.axis2_label = value;
      else if (key == "axis1_values") grid.axis1 = parse_values(value, lineno);
      else if (key == "axis2_values") grid.axis2 = parse_values(value, lineno);
      else throw ParseError("unknown grid manifest key '" + key + "'", lineno);
    } else {
      card_paths.push_back(t);
    }
  }
  if (grid.axis1.empty() || grid.axis2.empty())
    throw ValidationError("grid manifest missing axis values: " + manifest_path.string());
  if (card_paths.size() != grid.axis1.size() * grid.axis2.size())
    throw ValidationError("grid manifest lists " + std::to_string(card_paths.size()) +
                          " cards, lattice needs " +
                          std::to_string(grid.axis1.size() * grid.axis2.size()));
  grid.cards.reserve(card_paths.size());
  for (const std::string& rel : card_paths) grid.cards.push_back(load_model_card(base / rel));
  grid.validate();
  return grid;
}

void save_grid(const ModelGrid& grid, const std::filesystem::path& dir,
               const std::string& manifest_name) {
  grid.validate();
  std::filesystem::create_directories(dir / "cards");
  std::string manifest;
  manifest += "axis1_label = " + grid.axis1_label + "\n";
  manifest += "axis1_values =";
  for (double v : grid.axis1) manifest += " " + format_g17(v);
  manifest += "\naxis2_label = " + grid.axis2_label + "\n";
  manifest += "axis2_values =";
  for (double v : grid.axis2) manifest += " " + format_g17(v);
  manifest += "\n# one card per lattice node, row-major, axis1 outer\n";
  for (std::size_t i = 0; i < grid.axis1.size(); ++i)
    for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
      char name[64];
      std::snprintf(name, sizeof name, "cards/node_%02zu_%02zu.card", i, j);
      save_model_card(grid.card(i, j), dir / name);
      manifest += name;
      manifest += '\n';
    }
  write_file(dir / manifest_name, manifest);
}

}  // namespace gcm
