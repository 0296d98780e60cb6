// Command-line front end: scattering amplitudes, lattice band spectra,
// Kronig-Penney specializations, continued-fraction classification and the
// proposition checks, with deterministic CSV/JSON output (12 significant
// digits everywhere).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qg/analysis.hpp"
#include "qg/bands.hpp"
#include "qg/diophantine.hpp"
#include "qg/errors.hpp"
#include "qg/geoscatter.hpp"
#include "qg/spectrum_io.hpp"
#include "qg/specstrings.hpp"
#include "qg/vertex.hpp"

namespace {

using qg::fmt12;
using qg::round12;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void write_output(const std::string& payload, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
    return;
  }
  const std::string tmp = out_path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file " + out_path);
    f << payload;
  }
  std::filesystem::rename(tmp, out_path);
}

std::vector<double> linspace(double lo, double hi, int samples) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  std::vector<double> v;
  v.reserve(samples);
  if (samples == 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < samples; ++i) v.push_back(lo + (hi - lo) * i / (samples - 1));
  return v;
}

qg::VertexCoupling parse_coupling_warned(const std::string& text) {
  bool warned = false;
  qg::VertexCoupling c = qg::parse_coupling(text, &warned);
  if (warned) std::cerr << "warning: dprime:C=0 normalized to delta:c=0\n";
  return c;
}

struct AmplitudeRow {
  double k;
  qg::complexd r, t;
  double defect;
};

std::string rows_to_csv(const std::vector<AmplitudeRow>& rows) {
  std::string out = "k,re_r,im_r,re_t,im_t,unitarity_defect\n";
  for (const auto& p : rows) {
    out += fmt12(p.k) + ',' + fmt12(p.r.real()) + ',' + fmt12(p.r.imag()) + ',' +
           fmt12(p.t.real()) + ',' + fmt12(p.t.imag()) + ',' + fmt12(p.defect) +
           '\n';
  }
  return out;
}

ordered_json rows_to_json(const std::vector<AmplitudeRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : rows) {
    ordered_json o;
    o["k"] = round12(p.k);
    o["re_r"] = round12(p.r.real());
    o["im_r"] = round12(p.r.imag());
    o["re_t"] = round12(p.t.real());
    o["im_t"] = round12(p.t.imag());
    o["unitarity_defect"] = round12(p.defect);
    arr.push_back(o);
  }
  return arr;
}

int run_scatter(const std::string& coupling_text, int n, double kmin, double kmax,
                int samples, const std::string& format, const std::string& out) {
  const qg::VertexCoupling coupling = parse_coupling_warned(coupling_text);
  std::vector<AmplitudeRow> rows;
  for (double k : linspace(kmin, kmax, samples)) {
    const auto s = qg::star_smatrix(coupling, n, k);
    rows.push_back({k, s.r, s.t, qg::unitarity_defect(s)});
  }
  if (format == "json") {
    ordered_json j;
    ordered_json meta;
    meta["command"] = "scatter";
    meta["coupling"] = qg::format_coupling(coupling);
    meta["n"] = n;
    meta["kmin"] = round12(kmin);
    meta["kmax"] = round12(kmax);
    meta["samples"] = samples;
    j["meta"] = meta;
    j["points"] = rows_to_json(rows);
    write_output(j.dump(2) + "\n", out);
  } else {
    write_output(rows_to_csv(rows), out);
  }
  return kExitOk;
}

int run_onion(int n, int N, double ell, double c, double kmin, double kmax,
              int samples, bool limit, double tau, bool tau_given,
              const std::string& format, const std::string& out) {
  const double tau_eff = tau_given ? tau : static_cast<double>(N) * ell;
  std::vector<AmplitudeRow> rows;
  std::vector<double> skipped;
  const qg::OnionGraph g = qg::make_onion(n, N, ell, c);
  for (double k : linspace(kmin, kmax, samples)) {
    try {
      const auto s = limit ? qg::onion_limit_smatrix(n, tau_eff, c, k)
                           : qg::onion_smatrix(g, k);
      rows.push_back({k, s.r, s.t, qg::unitarity_defect(s)});
    } catch (const qg::numerical_error&) {
      skipped.push_back(k);
    }
  }
  if (format == "json") {
    ordered_json j;
    ordered_json meta;
    meta["command"] = "onion";
    meta["n"] = n;
    meta["N"] = N;
    meta["ell"] = round12(ell);
    meta["c"] = round12(c);
    meta["kmin"] = round12(kmin);
    meta["kmax"] = round12(kmax);
    meta["samples"] = samples;
    if (limit) meta["limit_tau"] = round12(tau_eff);
    ordered_json sk = ordered_json::array();
    for (double k : skipped) sk.push_back(round12(k));
    meta["skipped_k"] = sk;
    j["meta"] = meta;
    j["points"] = rows_to_json(rows);
    write_output(j.dump(2) + "\n", out);
  } else {
    write_output(rows_to_csv(rows), out);
  }
  return kExitOk;
}

qg::Spectrum lattice_spectrum(const qg::LatticeSpec& lat, double e_max,
                              int resolution) {
  if (std::holds_alternative<qg::Delta>(lat.coupling))
    return qg::delta_spectrum(lat, e_max);
  if (std::holds_alternative<qg::DeltaPrimeS>(lat.coupling))
    return qg::dps_spectrum(lat, e_max);
  if (std::holds_alternative<qg::DeltaPrime>(lat.coupling))
    return qg::dprime_spectrum(lat, e_max, resolution);
  throw std::invalid_argument(
      "no lattice band condition for the perm coupling family");
}

int run_bands(const std::string& coupling_text, double l1, double l2, double emax,
              bool negative, int resolution, const std::string& format,
              const std::string& out) {
  const qg::LatticeSpec lat =
      qg::make_lattice(l1, l2, parse_coupling_warned(coupling_text));
  qg::Spectrum s = lattice_spectrum(lat, emax, resolution);
  if (!negative) s = qg::clip_to_nonnegative(s);
  write_output(format == "json" ? qg::spectrum_to_json(s) : qg::spectrum_to_csv(s),
               out);
  return kExitOk;
}

int run_kp(const std::string& coupling_text, double ell, double emax,
           const std::string& format, const std::string& out) {
  const qg::Spectrum s =
      qg::kp_spectrum(ell, parse_coupling_warned(coupling_text), emax);
  write_output(format == "json" ? qg::spectrum_to_json(s) : qg::spectrum_to_csv(s),
               out);
  return kExitOk;
}

int run_classify(const std::string& theta_text, int depth,
                 const std::string& format, const std::string& out) {
  const qg::ThetaSpec spec = qg::parse_theta(theta_text);
  qg::ContinuedFraction cf;
  qg::ApproxQuality quality;
  if (spec.is_ratio) {
    // Exact expansion; qualities recomputed along its convergents.
    cf = qg::cf_from_ratio(spec.p, spec.q, depth);
    quality.rational = true;
    quality.min_quality = 0.0;
    quality.convs =
        qg::convergents(cf, 1 + static_cast<int>(cf.quotients.size()));
    for (const auto& c : quality.convs)
      quality.qualities.push_back(
          static_cast<double>(c.q) *
          qg::dist_to_nearest_int(qg::dd_from_int(c.q) * spec.value));
  } else {
    cf = qg::cf_expand(spec.value, depth);
    quality = qg::approx_quality(spec.value, depth);
  }

  if (format == "csv") {
    std::string body = "index,quotient,p,q,quality\n";
    const std::size_t rows = std::min(quality.convs.size(),
                                      cf.quotients.size() + 1);
    for (std::size_t i = 0; i < rows; ++i) {
      const long long a = i == 0 ? cf.a0 : cf.quotients[i - 1];
      body += std::to_string(i) + ',' + std::to_string(a) + ',' +
              std::to_string(quality.convs[i].p) + ',' +
              std::to_string(quality.convs[i].q) + ',' +
              fmt12(quality.qualities[i]) + '\n';
    }
    write_output(body, out);
    return kExitOk;
  }
  ordered_json j;
  j["theta"] = spec.original;
  j["value"] = round12(to_double(spec.value));
  j["a0"] = cf.a0;
  ordered_json qs = ordered_json::array();
  for (auto a : cf.quotients) qs.push_back(a);
  j["quotients"] = qs;
  j["exact"] = cf.exact;
  ordered_json convs = ordered_json::array();
  for (const auto& c : quality.convs) {
    ordered_json o;
    o["p"] = c.p;
    o["q"] = c.q;
    convs.push_back(o);
  }
  j["convergents"] = convs;
  ordered_json qual = ordered_json::array();
  for (double v : quality.qualities) qual.push_back(round12(v));
  j["qualities"] = qual;
  j["min_quality"] = round12(quality.min_quality);
  j["rational"] = quality.rational;
  write_output(j.dump(2) + "\n", out);
  return kExitOk;
}

int run_critical(const std::string& theta_text, double l1, double l2, double emax,
                 const std::string& format, const std::string& out) {
  const qg::ThetaSpec spec = qg::parse_theta(theta_text);
  const double theta = to_double(spec.value);
  const double cc = qg::critical_coupling(theta, l1, l2, emax);
  if (format == "csv") {
    std::string body = "theta,l1,l2,e_max,critical_coupling\n";
    body += spec.original + ',' + fmt12(l1) + ',' + fmt12(l2) + ',' + fmt12(emax) +
            ',' + fmt12(cc) + '\n';
    write_output(body, out);
    return kExitOk;
  }
  ordered_json j;
  j["theta"] = spec.original;
  j["theta_value"] = round12(theta);
  j["l1"] = round12(l1);
  j["l2"] = round12(l2);
  j["e_max"] = round12(emax);
  j["critical_coupling"] = round12(cc);
  write_output(j.dump(2) + "\n", out);
  return kExitOk;
}

int run_verify(const std::string& coupling_text, double l1, double l2, double emax,
               const std::string& from, int resolution, const std::string& format,
               const std::string& out) {
  qg::GapReport rep;
  if (!from.empty()) {
    std::ifstream f(from);
    if (!f) throw std::invalid_argument("cannot read spectrum file " + from);
    std::stringstream ss;
    ss << f.rdbuf();
    const qg::Spectrum s = qg::spectrum_from_json(ss.str());
    if (!(s.meta.l2 > 0.0))
      throw std::invalid_argument("spectrum file lacks lattice spacings");
    const qg::LatticeSpec lat =
        qg::make_lattice(s.meta.l1, s.meta.l2, qg::parse_coupling(s.meta.coupling));
    rep = qg::report_for_spectrum(lat, qg::rounded12(s));
  } else {
    if (coupling_text.empty())
      throw std::invalid_argument("verify needs --coupling or --from");
    const qg::LatticeSpec lat =
        qg::make_lattice(l1, l2, qg::parse_coupling(coupling_text));
    const qg::Spectrum s = lattice_spectrum(lat, emax, resolution);
    // Report on the serialized precision so verify --from round-trips.
    rep = qg::report_for_spectrum(lat, qg::rounded12(s));
  }
  write_output(
      format == "csv" ? qg::gap_report_to_csv(rep) : qg::gap_report_to_json(rep),
      out);
  return kExitOk;
}

int dispatch(const std::vector<std::string>& args);

int run_sweep(const std::string& command, const std::string& param, double from,
              double to, int steps, const std::string& out_dir,
              std::vector<std::string> rest) {
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  static const std::vector<std::string> kCommands{
      "scatter", "onion", "bands", "kp", "classify", "critical", "verify"};
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw std::invalid_argument("sweep cannot run command '" + command + "'");
  std::filesystem::create_directories(out_dir);

  std::string ext = "csv";
  bool has_format = false;
  for (std::size_t i = 0; i + 1 < rest.size(); ++i)
    if (rest[i] == "--format") {
      ext = rest[i + 1];
      has_format = true;
    }
  if (!has_format &&
      (command == "classify" || command == "critical" || command == "verify"))
    ext = "json";

  std::string summary = "index,value,file,exit_code\n";
  int worst = kExitOk;
  for (int i = 0; i < steps; ++i) {
    const double value = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    std::vector<std::string> cell = rest;

    bool applied = false;
    if (param == "c" || param == "C" || param == "D" || param == "A" ||
        param == "B") {
      for (std::size_t j = 0; j + 1 < cell.size(); ++j) {
        if (cell[j] != "--coupling") continue;
        qg::VertexCoupling base = qg::parse_coupling(cell[j + 1]);
        if (param == "A" || param == "B") {
          auto p = std::get<qg::PermInvariant>(base);
          (param == "A" ? p.A : p.B) = value;
          cell[j + 1] = qg::format_coupling(qg::VertexCoupling(p));
        } else if (param == "c") {
          cell[j + 1] = "delta:c=" + fmt12(value);
        } else if (param == "C") {
          cell[j + 1] = "dprime:C=" + fmt12(value);
        } else {
          cell[j + 1] = "dprimes:D=" + fmt12(value);
        }
        applied = true;
      }
    } else {
      const std::string flag = "--" + param;
      for (std::size_t j = 0; j + 1 < cell.size(); ++j)
        if (cell[j] == flag) {
          cell[j + 1] = fmt12(value);
          applied = true;
        }
      if (!applied) {
        cell.push_back(flag);
        cell.push_back(fmt12(value));
        applied = true;
      }
    }
    if (!applied)
      throw std::invalid_argument("sweep parameter '" + param +
                                  "' not found in the command template");

    char name[64];
    std::snprintf(name, sizeof name, "cell_%03d.%s", i, ext.c_str());
    const std::string file = (std::filesystem::path(out_dir) / name).string();
    std::vector<std::string> full{command};
    for (auto& a : cell) full.push_back(a);
    full.push_back("--out");
    full.push_back(file);
    const int code = dispatch(full);
    worst = std::max(worst, code);
    summary += std::to_string(i) + ',' + fmt12(value) + ',' + file + ',' +
               std::to_string(code) + '\n';
  }
  std::cout << summary;
  return worst;
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"quantum-graph vertex couplings, geometric scatterers and "
               "rectangular-lattice band spectra"};
  app.require_subcommand(1);
  // Unmatched arguments bubble up here; they are legal only as the command
  // template following `sweep` and rejected for every other subcommand below.
  app.allow_extras();

  auto* scatter = app.add_subcommand("scatter", "star-vertex S-matrix over a k grid");
  std::string sc_coupling, sc_format = "csv", sc_out;
  int sc_n = 2, sc_samples = 100;
  double sc_kmin = 0.1, sc_kmax = 10.0;
  scatter->add_option("--coupling", sc_coupling)->required();
  scatter->add_option("--n", sc_n)->required();
  scatter->add_option("--kmin", sc_kmin)->required();
  scatter->add_option("--kmax", sc_kmax)->required();
  scatter->add_option("--samples", sc_samples)->required();
  scatter->add_option("--format", sc_format)->check(CLI::IsMember({"csv", "json"}));
  scatter->add_option("--out", sc_out);

  auto* onion = app.add_subcommand("onion", "geometric-scatterer amplitudes");
  int on_n = 3, on_N = 1, on_samples = 100;
  double on_ell = 1.0, on_c = 0.0, on_kmin = 0.1, on_kmax = 10.0, on_tau = 0.0;
  bool on_limit = false;
  std::string on_format = "csv", on_out;
  onion->add_option("--n", on_n)->required();
  onion->add_option("--N", on_N)->required();
  onion->add_option("--ell", on_ell)->required();
  onion->add_option("--c", on_c)->required();
  onion->add_option("--kmin", on_kmin)->required();
  onion->add_option("--kmax", on_kmax)->required();
  onion->add_option("--samples", on_samples)->required();
  onion->add_flag("--limit", on_limit);
  auto* tau_opt = onion->add_option("--tau", on_tau);
  onion->add_option("--format", on_format)->check(CLI::IsMember({"csv", "json"}));
  onion->add_option("--out", on_out);

  auto* bands = app.add_subcommand("bands", "rectangular-lattice band spectrum");
  std::string bd_coupling, bd_format = "csv", bd_out;
  double bd_l1 = 1.0, bd_l2 = 1.0, bd_emax = 100.0;
  bool bd_negative = false;
  int bd_resolution = 512;
  bands->add_option("--coupling", bd_coupling)->required();
  bands->add_option("--l1", bd_l1)->required();
  bands->add_option("--l2", bd_l2)->required();
  bands->add_option("--emax", bd_emax)->required();
  bands->add_flag("--negative", bd_negative);
  bands->add_option("--resolution", bd_resolution);
  bands->add_option("--format", bd_format)->check(CLI::IsMember({"csv", "json"}));
  bands->add_option("--out", bd_out);

  auto* kp = app.add_subcommand("kp", "one-dimensional array spectrum");
  std::string kp_coupling, kp_format = "csv", kp_out;
  double kp_ell = 1.0, kp_emax = 100.0;
  kp->add_option("--coupling", kp_coupling)->required();
  kp->add_option("--ell", kp_ell)->required();
  kp->add_option("--emax", kp_emax)->required();
  kp->add_option("--format", kp_format)->check(CLI::IsMember({"csv", "json"}));
  kp->add_option("--out", kp_out);

  auto* classify = app.add_subcommand("classify", "continued-fraction analysis");
  std::string cl_theta, cl_format = "json", cl_out;
  int cl_depth = 30;
  classify->add_option("--theta", cl_theta)->required();
  classify->add_option("--depth", cl_depth)->required();
  classify->add_option("--format", cl_format)->check(CLI::IsMember({"csv", "json"}));
  classify->add_option("--out", cl_out);

  auto* critical = app.add_subcommand("critical", "critical delta coupling");
  std::string cr_theta, cr_format = "json", cr_out;
  double cr_l1 = 1.0, cr_l2 = 1.0, cr_emax = 0.0;
  critical->add_option("--theta", cr_theta)->required();
  critical->add_option("--l1", cr_l1)->required();
  critical->add_option("--l2", cr_l2)->required();
  critical->add_option("--emax", cr_emax)->required();
  critical->add_option("--format", cr_format)->check(CLI::IsMember({"csv", "json"}));
  critical->add_option("--out", cr_out);

  auto* verify = app.add_subcommand("verify", "check structural statements");
  std::string vf_coupling, vf_from, vf_format = "json", vf_out;
  double vf_l1 = 1.0, vf_l2 = 1.0, vf_emax = 100.0;
  int vf_resolution = 512;
  verify->add_option("--coupling", vf_coupling);
  verify->add_option("--l1", vf_l1);
  verify->add_option("--l2", vf_l2);
  verify->add_option("--emax", vf_emax);
  verify->add_option("--from", vf_from);
  verify->add_option("--resolution", vf_resolution);
  verify->add_option("--format", vf_format)->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--out", vf_out);

  auto* sweep = app.add_subcommand("sweep", "run a command over a parameter range");
  std::string sw_command, sw_param, sw_outdir;
  double sw_from = 0.0, sw_to = 0.0;
  int sw_steps = 1;
  sweep->add_option("--command", sw_command)->required();
  sweep->add_option("--param", sw_param)->required();
  sweep->add_option("--from", sw_from)->required();
  sweep->add_option("--to", sw_to)->required();
  sweep->add_option("--steps", sw_steps)->required();
  sweep->add_option("--out-dir", sw_outdir)->required();
  sweep->allow_extras();

  CLI::App* parsed = nullptr;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    parsed = app.get_subcommands().at(0);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  const std::vector<std::string> extras = app.remaining(true);
  if (parsed != sweep && !extras.empty()) {
    std::cerr << "error: unexpected argument '" << extras.front() << "'\n";
    return kExitUsage;
  }

  try {
    if (parsed == scatter)
      return run_scatter(sc_coupling, sc_n, sc_kmin, sc_kmax, sc_samples,
                         sc_format, sc_out);
    if (parsed == onion)
      return run_onion(on_n, on_N, on_ell, on_c, on_kmin, on_kmax, on_samples,
                       on_limit, on_tau, tau_opt->count() > 0, on_format, on_out);
    if (parsed == bands)
      return run_bands(bd_coupling, bd_l1, bd_l2, bd_emax, bd_negative,
                       bd_resolution, bd_format, bd_out);
    if (parsed == kp) return run_kp(kp_coupling, kp_ell, kp_emax, kp_format, kp_out);
    if (parsed == classify) return run_classify(cl_theta, cl_depth, cl_format, cl_out);
    if (parsed == critical)
      return run_critical(cr_theta, cr_l1, cr_l2, cr_emax, cr_format, cr_out);
    if (parsed == verify)
      return run_verify(vf_coupling, vf_l1, vf_l2, vf_emax, vf_from,
                        vf_resolution, vf_format, vf_out);
    if (parsed == sweep) {
      std::vector<std::string> rest;
      for (const auto& a : extras)
        if (a != "--") rest.push_back(a);
      return run_sweep(sw_command, sw_param, sw_from, sw_to, sw_steps, sw_outdir,
                       rest);
    }
  } catch (const qg::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}
