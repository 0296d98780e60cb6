#include "qg/spectrum_io.hpp"

#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "qg/specstrings.hpp"

namespace qg {

using ordered_json = nlohmann::ordered_json;

double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Spectrum rounded12(const Spectrum& s) {
  Spectrum out = s;
  for (auto& iv : out.intervals) {
    iv.lo = round12(iv.lo);
    iv.hi = round12(iv.hi);
  }
  out.e_max = round12(out.e_max);
  return out;
}

namespace {

ordered_json solver_to_json(const SolverInfo& s) {
  ordered_json j;
  j["method"] = s.method;
  j["edge_tol_k"] = round12(s.edge_tol_k);
  if (s.resolution > 0) j["resolution"] = s.resolution;
  j["negative_included"] = s.negative_included;
  if (s.approximate) j["approximate"] = true;
  if (!s.notes_k.empty()) {
    ordered_json arr = ordered_json::array();
    for (double k : s.notes_k) arr.push_back(round12(k));
    j["skipped_k"] = arr;
  }
  if (!s.comment.empty()) j["comment"] = s.comment;
  return j;
}

}  // namespace

std::string spectrum_to_json(const Spectrum& s) {
  ordered_json j;
  ordered_json meta;
  meta["coupling"] = s.meta.coupling;
  meta["l1"] = round12(s.meta.l1);
  if (s.meta.l2 > 0.0) meta["l2"] = round12(s.meta.l2);
  meta["e_max"] = round12(s.meta.e_max);
  meta["solver"] = solver_to_json(s.meta.solver);
  j["meta"] = meta;
  ordered_json arr = ordered_json::array();
  for (const auto& iv : s.intervals) {
    ordered_json o;
    o["kind"] = iv.kind == IntervalKind::band ? "band" : "gap";
    o["lo"] = round12(iv.lo);
    o["hi"] = round12(iv.hi);
    arr.push_back(o);
  }
  j["intervals"] = arr;
  return j.dump(2) + "\n";
}

Spectrum spectrum_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Spectrum s;
  const auto& meta = j.at("meta");
  s.meta.coupling = meta.at("coupling").get<std::string>();
  s.meta.l1 = meta.at("l1").get<double>();
  s.meta.l2 = meta.contains("l2") ? meta.at("l2").get<double>() : 0.0;
  s.meta.e_max = meta.at("e_max").get<double>();
  s.e_max = s.meta.e_max;
  if (meta.contains("solver")) {
    const auto& sv = meta.at("solver");
    if (sv.contains("method")) s.meta.solver.method = sv.at("method");
    if (sv.contains("edge_tol_k")) s.meta.solver.edge_tol_k = sv.at("edge_tol_k");
    if (sv.contains("resolution")) s.meta.solver.resolution = sv.at("resolution");
    if (sv.contains("negative_included"))
      s.meta.solver.negative_included = sv.at("negative_included");
    if (sv.contains("approximate")) s.meta.solver.approximate = sv.at("approximate");
  }
  for (const auto& o : j.at("intervals")) {
    SpectralInterval iv;
    iv.kind = o.at("kind").get<std::string>() == "band" ? IntervalKind::band
                                                        : IntervalKind::gap;
    iv.lo = o.at("lo").get<double>();
    iv.hi = o.at("hi").get<double>();
    s.intervals.push_back(iv);
  }
  return s;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "index,kind,lo_energy,hi_energy\n";
  int i = 0;
  for (const auto& iv : s.intervals) {
    out += std::to_string(i++) + ',' +
           (iv.kind == IntervalKind::band ? "band" : "gap") + ',' +
           fmt12(iv.lo) + ',' + fmt12(iv.hi) + '\n';
  }
  return out;
}

std::string gap_report_to_json(const GapReport& rep) {
  ordered_json j;
  ordered_json lat;
  lat["coupling"] = format_coupling(rep.lattice.coupling);
  lat["l1"] = round12(rep.lattice.ell1);
  lat["l2"] = round12(rep.lattice.ell2);
  j["lattice"] = lat;
  j["e_max"] = round12(rep.e_max);
  j["gap_count"] = rep.gap_count;
  ordered_json widths = ordered_json::array();
  for (double w : rep.gap_widths) widths.push_back(round12(w));
  j["gap_widths"] = widths;
  if (rep.first_gap_lo) j["first_gap_lo"] = round12(*rep.first_gap_lo);
  j["edge_quantization_ok"] = rep.edge_quantization_ok;
  j["threshold_sign_ok"] = rep.threshold_sign_ok;
  j["deep_negative_ok"] = rep.deep_negative_ok;
  j["kp_containment_ok"] = rep.kp_containment_ok;
  ordered_json viol = ordered_json::array();
  for (const auto& v : rep.bound_violations) {
    ordered_json o;
    o["lo"] = round12(v.lo);
    o["hi"] = round12(v.hi);
    o["what"] = v.what;
    o["bound"] = round12(v.bound);
    o["value"] = round12(v.value);
    viol.push_back(o);
  }
  j["bound_violations"] = viol;
  return j.dump(2) + "\n";
}

std::string gap_report_to_csv(const GapReport& rep) {
  std::string out = "field,value\n";
  out += "coupling," + format_coupling(rep.lattice.coupling) + '\n';
  out += "l1," + fmt12(rep.lattice.ell1) + '\n';
  out += "l2," + fmt12(rep.lattice.ell2) + '\n';
  out += "e_max," + fmt12(rep.e_max) + '\n';
  out += "gap_count," + std::to_string(rep.gap_count) + '\n';
  if (rep.first_gap_lo) out += "first_gap_lo," + fmt12(*rep.first_gap_lo) + '\n';
  out += std::string("edge_quantization_ok,") +
         (rep.edge_quantization_ok ? "true" : "false") + '\n';
  out += std::string("threshold_sign_ok,") +
         (rep.threshold_sign_ok ? "true" : "false") + '\n';
  out += std::string("deep_negative_ok,") +
         (rep.deep_negative_ok ? "true" : "false") + '\n';
  out += std::string("kp_containment_ok,") +
         (rep.kp_containment_ok ? "true" : "false") + '\n';
  out += "bound_violations," + std::to_string(rep.bound_violations.size()) + '\n';
  return out;
}

}  // namespace qg
