#include "qg/specstrings.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace qg {

namespace {

double parse_float(const std::string& text, const std::string& token) {
  if (text.empty())
    throw std::invalid_argument("missing value after '" + token + "'");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw std::invalid_argument("bad float '" + text + "' in '" + token + "'");
  return v;
}

// Splits "name=value" with the exact expected name.
double named_value(const std::string& part, const std::string& name,
                   const std::string& whole) {
  const auto eq = part.find('=');
  if (eq == std::string::npos || part.substr(0, eq) != name)
    throw std::invalid_argument("expected '" + name + "=<float>' in '" + whole +
                                "'");
  return parse_float(part.substr(eq + 1), whole);
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

VertexCoupling parse_coupling(const std::string& text, bool* warned) {
  if (warned) *warned = false;
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("coupling '" + text +
                                "' lacks a family prefix like 'delta:'");
  const std::string family = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  if (family == "delta") return make_delta(named_value(rest, "c", text));
  if (family == "dprime") {
    const double C = named_value(rest, "C", text);
    if (C == 0.0 && warned) *warned = true;
    return make_delta_prime(C);
  }
  if (family == "dprimes") return make_delta_prime_s(named_value(rest, "D", text));
  if (family == "perm") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("expected 'perm:A=<float>,B=<float>' in '" +
                                  text + "'");
    const double A = named_value(rest.substr(0, comma), "A", text);
    const double B = named_value(rest.substr(comma + 1), "B", text);
    return make_perm_invariant(A, B);
  }
  throw std::invalid_argument("unknown coupling family '" + family + "'");
}

std::string format_coupling(const VertexCoupling& coupling) {
  if (const auto* d = std::get_if<Delta>(&coupling))
    return "delta:c=" + fmt12(d->c);
  if (const auto* dp = std::get_if<DeltaPrime>(&coupling))
    return "dprime:C=" + fmt12(dp->C);
  if (const auto* ds = std::get_if<DeltaPrimeS>(&coupling))
    return "dprimes:D=" + fmt12(ds->D);
  const auto& p = std::get<PermInvariant>(coupling);
  return "perm:A=" + fmt12(p.A) + ",B=" + fmt12(p.B);
}

ThetaSpec parse_theta(const std::string& text) {
  ThetaSpec spec;
  spec.original = text;
  if (text == "golden") {
    spec.value = dd_golden_mean();
    return spec;
  }
  if (text.rfind("sqrt:", 0) == 0) {
    const long long n = std::atoll(text.c_str() + 5);
    if (n <= 0) throw std::invalid_argument("sqrt argument must be positive");
    spec.value = dd_sqrt(dd_from_int(n));
    return spec;
  }
  if (text.rfind("ratio:", 0) == 0) {
    const std::string body = text.substr(6);
    const auto slash = body.find('/');
    if (slash == std::string::npos)
      throw std::invalid_argument("expected 'ratio:<p>/<q>'");
    const long long p = std::atoll(body.substr(0, slash).c_str());
    const long long q = std::atoll(body.substr(slash + 1).c_str());
    if (p <= 0 || q <= 0)
      throw std::invalid_argument("ratio parts must be positive integers");
    spec.is_ratio = true;
    spec.p = p;
    spec.q = q;
    spec.value = dd_from_int(p) / dd_from_int(q);
    return spec;
  }
  spec.value = dd_parse_decimal(text);
  if (!(spec.value > Dd(0.0)))
    throw std::invalid_argument("theta must be positive");
  return spec;
}

}  // namespace qg
