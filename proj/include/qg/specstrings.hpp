#pragma once

#include <string>

#include "qg/dd.hpp"
#include "qg/vertex.hpp"

namespace qg {

/// Coupling grammar: "delta:c=<float>" | "dprime:C=<float>" |
/// "dprimes:D=<float>" | "perm:A=<float>,B=<float>".
/// "dprime:C=0" normalizes to delta:c=0; *warned is set when that happens.
VertexCoupling parse_coupling(const std::string& text, bool* warned = nullptr);

/// Canonical textual form, 12 significant digits.
std::string format_coupling(const VertexCoupling& coupling);

struct ThetaSpec {
  Dd value;
  bool is_ratio = false;
  std::int64_t p = 0, q = 1;  // set when is_ratio
  std::string original;
};

/// Theta grammar: decimal literal | "golden" | "sqrt:<int>" | "ratio:<p>/<q>".
ThetaSpec parse_theta(const std::string& text);

}  // namespace qg
