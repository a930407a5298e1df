#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gcm/compact_model.hpp"
#include "gcm/model_grid.hpp"
#include "gcm/stimulus.hpp"

namespace gcm {

// Node ids: ground ("0") is -1; every other node gets a dense id >= 0.
constexpr int kGroundNode = -1;

struct Resistor {
  std::string name;
  int n1 = kGroundNode, n2 = kGroundNode;
  double ohms = 0.0;
};

struct Capacitor {
  std::string name;
  int n1 = kGroundNode, n2 = kGroundNode;
  double farads = 0.0;
};

struct VSource {
  std::string name;
  int np = kGroundNode, nm = kGroundNode;
  Stimulus stim = Stimulus::dc(0.0);
};

// Positive value pushes current from np through the source into nm,
// i.e. `I1 0 vdd dc 1m` injects 1 mA into node vdd.
struct ISource {
  std::string name;
  int np = kGroundNode, nm = kGroundNode;
  Stimulus stim = Stimulus::dc(0.0);
};

struct Transistor {
  std::string name;
  int d = kGroundNode, g = kGroundNode, s = kGroundNode, b = kGroundNode;
  const Device* device = nullptr;  // storage owned by the Netlist
  double nfin = 1.0;
  // Evaluate with every terminal voltage negated and outputs negated:
  // turns an N-calibrated model into its P mirror without a second
  // card set. Set programmatically; not part of the file grammar.
  bool mirror_p = false;
};

struct Netlist {
  std::vector<std::string> node_names;  // index == node id
  std::vector<Resistor> resistors;
  std::vector<Capacitor> capacitors;
  std::vector<VSource> vsources;
  std::vector<ISource> isources;
  std::vector<Transistor> transistors;

  bool has_op = false;
  bool has_tran = false;
  double tstop = 0.0;

  // Backing storage for device references; deque keeps pointers stable.
  std::deque<ModelCard> owned_cards;
  std::deque<CardDevice> card_devices;
  std::deque<EnsembleDevice> ensemble_devices;

  int node_id(const std::string& name);          // interns
  int find_node(const std::string& name) const;  // -2 if absent
  const std::string& node_name(int id) const;
  std::size_t node_count() const { return node_names.size(); }

  // Helpers used by programmatic builders.
  Transistor& add_transistor(const std::string& name, int d, int g, int s, int b,
                             const Device* dev, double nfin, bool mirror_p = false);
  const Device* intern_card(const ModelCard& card);
  const Device* intern_ensemble(GeneralModel gm);

  // Structural checks: unique names, nodes in range, ground reachable.
  void check() const;
};

// Optional model resolution for `M` lines.
struct ModelContext {
  const ModelGrid* grid = nullptr;  // target of the `gcm` model keyword
  // Resolves a card file path (as written in the netlist); default
  // loads it relative to the current working directory.
  std::function<ModelCard(const std::string&)> load_card;
};

Netlist parse_netlist(const std::string& text, const ModelContext& ctx = {},
                      const std::string& origin = "netlist");
Netlist load_netlist(const std::filesystem::path& path, const ModelContext& ctx = {});

}  // namespace gcm
