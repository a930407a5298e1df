#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "gcm/compact_model.hpp"

namespace gcm {

// Query point in design space. axis1/axis2 are nm; what they mean
// (lg/wfin, or lg/diameter) is grid metadata only.
struct DesignPoint {
  double lg = 0.0;    // axis1
  double wfin = 0.0;  // axis2
};

// Rectangular lattice of cards, row-major with axis1 as the outer index.
struct ModelGrid {
  std::string axis1_label = "lg";
  std::string axis2_label = "wfin";
  std::vector<double> axis1;  // ascending, nm
  std::vector<double> axis2;  // ascending, nm
  std::vector<ModelCard> cards;

  std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * axis2.size() + i2; }
  const ModelCard& card(std::size_t i1, std::size_t i2) const { return cards[index(i1, i2)]; }
  void validate() const;
};

struct WeightedNode {
  std::size_t node = 0;  // flat card index
  double weight = 0.0;
};

// A query plus the four enclosing lattice corners with normalized
// inverse-distance weights. Corner order: (lo,lo), (lo,hi), (hi,hi), (hi,lo).
struct GeneralModel {
  DesignPoint query;
  std::array<WeightedNode, 4> corners{};
  const ModelGrid* grid = nullptr;
};

// Cell choice: ties on a shared interior edge resolve to the lower-index
// cell; a query closer than 1e-9 nm to a node collapses to that node.
// Outside the hull: OutOfHullError naming the axis.
GeneralModel locate_and_weigh(const ModelGrid& grid, const DesignPoint& query);

// Weight-sum of the four corner cards, summed in ascending node-index
// order so corner enumeration order can never change the result bits.
TerminalCurrents ensemble_currents(const GeneralModel& gm, const BiasPoint& bias, double nfin);
TerminalCharges ensemble_charges(const GeneralModel& gm, const BiasPoint& bias, double nfin);

class EnsembleDevice final : public Device {
 public:
  explicit EnsembleDevice(GeneralModel gm);
  TerminalCurrents currents(const BiasPoint& bias, double nfin) const override {
    return ensemble_currents(gm_, bias, nfin);
  }
  TerminalCharges charges(const BiasPoint& bias, double nfin) const override {
    return ensemble_charges(gm_, bias, nfin);
  }
  double lg() const override { return gm_.query.lg; }
  double weff() const override;  // 2*hfin(weighted) + query wfin
  double default_nfin() const override { return 1.0; }
  Polarity polarity() const override;
  const GeneralModel& general_model() const { return gm_; }

 private:
  GeneralModel gm_;
};

// Max relative drain-current jump across each interior cell edge,
// probed a half-spacing*1e-6 on both sides at matched design points.
struct SeamEdge {
  int axis = 1;              // 1 or 2
  double coordinate = 0.0;   // nm, the interior lattice line
  double max_gap = 0.0;      // max |dId| / max(|Id|, 1 pA)
};
std::vector<SeamEdge> seam_gap(const ModelGrid& grid, const std::vector<BiasPoint>& bias_set);

// Manifest: axis header lines then one card path per node, row-major.
ModelGrid load_grid(const std::filesystem::path& manifest_path);
void save_grid(const ModelGrid& grid, const std::filesystem::path& dir,
               const std::string& manifest_name = "grid.manifest");

}  // namespace gcm
