#pragma once

#include <string>

#include "qg/analysis.hpp"
#include "qg/bands.hpp"

namespace qg {

/// Round to 12 significant digits, the precision of all machine output.
double round12(double v);
std::string fmt12(double v);

/// Spectrum with all interval edges rounded to output precision, so reports
/// computed before and after serialization agree bit for bit.
Spectrum rounded12(const Spectrum& s);

/// {"meta":{"coupling":..,"l1":..,"l2":..,"e_max":..,"solver":{..}},
///  "intervals":[{"kind":"band"|"gap","lo":..,"hi":..}]}
std::string spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const std::string& text);

/// index,kind,lo_energy,hi_energy
std::string spectrum_to_csv(const Spectrum& s);

std::string gap_report_to_json(const GapReport& rep);
std::string gap_report_to_csv(const GapReport& rep);

}  // namespace qg
