#pragma once

#include <filesystem>
#include <string>

namespace gcm {

enum class Polarity { N, P };

// One calibrated device model at one (lg, wfin) design point.
// Lengths in nm, electrical quantities in SI units.
struct ModelCard {
  Polarity polarity = Polarity::N;
  double lg = 18.0;         // nm
  double wfin = 6.0;        // nm
  double hfin = 50.0;       // nm
  double nfin_unit = 1.0;   // fins per drawn device
  double vt0 = 0.30;        // V
  double n_ss = 1.2;        // subthreshold slope factor
  double dibl = 0.04;       // V/V
  double k_gain = 1.0e-4;   // A/V^2 per square
  double theta_sat = 0.3;   // 1/V
  double lambda_clm = 0.05; // 1/V
  double rs = 0.0;          // ohm * fin
  double rd = 0.0;          // ohm * fin
  double cov = 0.0;         // F per fin and side
  double cch_max = 0.0;     // F per fin
  double temp = 298.15;     // K

  // Derived, never stored.
  double weff() const { return 2.0 * hfin + wfin; }

  void validate() const;  // throws ValidationError naming the violated rule
};

// Parses "key = value" lines on top of `base`; omitted keys keep the
// base value, so partial cards are valid.
ModelCard parse_model_card(const std::string& text, const std::string& origin = "model card",
                           const ModelCard& base = ModelCard{});
std::string model_card_text(const ModelCard& card);
ModelCard load_model_card(const std::filesystem::path& path);
void save_model_card(const ModelCard& card, const std::filesystem::path& path);

}  // namespace gcm
