#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rational_function.hpp"

namespace nevlab::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "nevlab/1";

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json to_json(const GaussianRational& g) { return g.str(); }

inline GaussianRational gaussian_from_json(const json& j, const std::string& where) {
  if (!j.is_string()) throw FormatError(where + ": expected a gaussian rational string");
  try {
    return GaussianRational::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
}

inline json roots_to_json(const std::vector<RootMultiplicity>& roots) {
  json arr = json::array();
  for (const auto& r : roots) arr.push_back(json::array({r.root.str(), r.multiplicity}));
  return arr;
}

inline json to_json(const FactoredRational& f) {
  return json{{"constant", f.constant().str()}, {"zeros", roots_to_json(f.zeros())}, {"poles", roots_to_json(f.poles())}};
}

inline std::vector<RootMultiplicity> roots_from_json(const json& j, const std::string& key) {
  std::vector<RootMultiplicity> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) throw FormatError(key + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = key + "[" + std::to_string(i) + "]";
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[1].is_number_integer()) {
      throw FormatError(where + ": expected [\"<gr>\", multiplicity]");
    }
    out.push_back({gaussian_from_json(e[0], where), e[1].get<int>()});
  }
  return out;
}

inline FactoredRational factored_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("function spec: expected a JSON object");
  if (!j.contains("constant")) throw FormatError("function spec: missing \"constant\"");
  try {
    return FactoredRational(gaussian_from_json(j.at("constant"), "constant"), roots_from_json(j, "zeros"),
                            roots_from_json(j, "poles"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

/// Parses text, reporting the byte offset of syntax errors.
inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline json polynomial_to_json(const Polynomial& p) {
  json arr = json::array();
  for (const auto& c : p.coefficients()) arr.push_back(c.str());
  return arr;
}

inline json rational_to_json(const RationalFunction& f) {
  return json{{"numerator", polynomial_to_json(f.numerator())}, {"denominator", polynomial_to_json(f.denominator())}};
}

/// Fixed 12-significant-digit rendering used by every CSV artifact.
inline std::string fmt12(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace nevlab::io
