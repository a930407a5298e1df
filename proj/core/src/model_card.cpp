#include "gcm/model_card.hpp"

#include <cmath>
#include <set>

#include "gcm/errors.hpp"
#include "gcm/util.hpp"

namespace gcm {

void ModelCard::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("invalid model card: " + what); };
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) fail(std::string(name) + " not finite");
  };
  finite(lg, "lg");
  finite(wfin, "wfin");
  finite(hfin, "hfin");
  finite(vt0, "vt0");
  finite(n_ss, "n_ss");
  finite(dibl, "dibl");
  finite(k_gain, "k_gain");
  finite(theta_sat, "theta_sat");
  finite(lambda_clm, "lambda_clm");
  finite(rs, "rs");
  finite(rd, "rd");
  finite(cov, "cov");
  finite(cch_max, "cch_max");
  finite(temp, "temp");
  if (!(lg > 0.0)) fail("lg must be > 0");
  if (!(wfin > 0.0)) fail("wfin must be > 0");
  if (!(hfin > 0.0)) fail("hfin must be > 0");
  if (!(nfin_unit >= 1.0)) fail("nfin_unit must be >= 1");
  if (!(n_ss >= 1.0)) fail("n_ss must be >= 1");
  if (!(k_gain > 0.0)) fail("k_gain must be > 0");
  if (!(cov >= 0.0)) fail("cov must be >= 0");
  if (!(cch_max >= 0.0)) fail("cch_max must be >= 0");
  if (!(theta_sat >= 0.0)) fail("theta_sat must be >= 0");
  if (!(dibl >= 0.0)) fail("dibl must be >= 0");
  if (!(lambda_clm >= 0.0)) fail("lambda_clm must be >= 0");
  if (!(rs >= 0.0)) fail("rs must be >= 0");
  if (!(rd >= 0.0)) fail("rd must be >= 0");
  if (!(temp > 0.0)) fail("temp must be > 0");
}

ModelCard parse_model_card(const std::string& text, const std::string& origin,
                           const ModelCard& base) {
  ModelCard card = base;
  std::set<std::string> seen;
  for (const KeyValue& kv : parse_key_value_text(text)) {
    if (!seen.insert(kv.key).second)
      throw ValidationError(origin + ": duplicate key '" + kv.key + "' at line " +
                            std::to_string(kv.line));
    if (kv.key == "polarity") {
      if (kv.value == "N") card.polarity = Polarity::N;
      else if (kv.value == "P") card.polarity = Polarity::P;
      else throw ValidationError(origin + ": polarity must be N or P, got '" + kv.value + "'");
      continue;
    }
    double v;
    try {
      v = parse_double(kv.value);
    } catch (const ValidationError& e) {
      throw ValidationError(origin + ": key '" + kv.key + "': " + e.what());
    }
    if (kv.key == "lg") card.lg = v;
    else if (kv.key == "wfin") card.wfin = v;
    else if (kv.key == "hfin") card.hfin = v;
    else if (kv.key == "nfin_unit") card.nfin_unit = v;
    else if (kv.key == "vt0") card.vt0 = v;
    else if (kv.key == "n_ss") card.n_ss = v;
    else if (kv.key == "dibl") card.dibl = v;
    else if (kv.key == "k_gain") card.k_gain = v;
    else if (kv.key == "theta_sat") card.theta_sat = v;
    else if (kv.key == "lambda_clm") card.lambda_clm = v;
    else if (kv.key == "rs") card.rs = v;
    else if (kv.key == "rd") card.rd = v;
    else if (kv.key == "cov") card.cov = v;
    else if (kv.key == "cch_max") card.cch_max = v;
    else if (kv.key == "temp") card.temp = v;
    else
      throw ValidationError(origin + ": unknown key '" + kv.key + "' at line " +
                            std::to_string(kv.line));
  }
  try {
    card.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return card;
}

std::string model_card_text(const ModelCard& card) {
  std::string s;
  auto put = [&](const char* key, double v) {
    s += key;
    s += " = ";
    s += format_g17(v);
    s += '\n';
  };
  s += "polarity = ";
  s += (card.polarity == Polarity::N) ? "N" : "P";
  s += '\n';
  put("lg", card.lg);
  put("wfin", card.wfin);
  put("hfin", card.hfin);
  put("nfin_unit", card.nfin_unit);
  put("vt0", card.vt0);
  put("n_ss", card.n_ss);
  put("dibl", card.dibl);
  put("k_gain", card.k_gain);
  put("theta_sat", card.theta_sat);
  put("lambda_clm", card.lambda_clm);
  put("rs", card.rs);
  put("rd", card.rd);
  put("cov", card.cov);
  put("cch_max", card.cch_max);
  put("temp", card.temp);
  return s;
}

ModelCard load_model_card(const std::filesystem::path& path) {
  return parse_model_card(read_file(path), path.string());
}

void save_model_card(const ModelCard& card, const std::filesystem::path& path) {
  write_file(path, model_card_text(card));
}

}  // namespace gcm
