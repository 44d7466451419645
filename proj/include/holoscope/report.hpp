#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "holoscope/asymptotics.hpp"
#include "holoscope/certificates.hpp"
#include "holoscope/ode.hpp"
#include "holoscope/recurrence.hpp"
#include "holoscope/singularities.hpp"
#include "holoscope/term.hpp"

namespace holoscope::report {

using json = nlohmann::json;  // std::map backed, so keys come out sorted

inline constexpr const char* kToolName = "holoscope";
inline constexpr const char* kToolVersion = "0.3.0";

/// Exact values are strings; floats are objects carrying a double and the
/// extended-precision decimal.
inline json exact(const Rational& q) { return to_string(q); }
inline json exact(const Integer& z) { return z.get_str(); }

inline json real(const Real& x, unsigned digits = precision_digits_from_env()) {
  return json{{"float", x.to_double()}, {"decimal", x.to_string(digits)}};
}

inline json poly(const PolyQ& p, const std::string& var) {
  json c = json::array();
  for (const auto& v : p.coeffs()) c.push_back(exact(v));
  return json{{"coeffs", c}, {"text", p.to_string(var)}};
}

inline json box(const ComplexBox& b) {
  const mpfr_prec_t bits = working_bits();
  return json{{"re", real(Real(b.re, bits))}, {"im", real(Real(b.im, bits))}, {"radius", real(Real(b.radius, bits))}};
}

/// FNV-1a over the decimal values, one per line.
inline std::string digest(const ExactSequence& s) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string& t) {
    for (unsigned char ch : t) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  feed("offset " + std::to_string(s.offset) + "\n");
  for (const auto& v : s.values) feed(to_string(v) + "\n");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

inline json sequence(const ExactSequence& s, std::size_t head = 12) {
  json h = json::array();
  for (std::size_t i = 0; i < std::min(head, s.size()); ++i) h.push_back(exact(s.values[i]));
  bool integral = true;
  for (const auto& v : s.values) integral = integral && v.get_den() == 1;
  return json{{"offset", s.offset},
              {"last_index", s.last_index()},
              {"provenance", to_string(s.provenance)},
              {"digest", digest(s)},
              {"head", h},
              {"all_integers", integral}};
}

inline json recurrence(const Recurrence& r) {
  json c = json::array();
  for (const auto& p : r.coeffs) c.push_back(poly(p, "n"));
  return json{{"order", r.order()}, {"degree", r.degree()}, {"coeffs", c}, {"text", to_string(r)}};
}

inline json ode(const LinearODE& o) {
  json c = json::array();
  for (const auto& p : o.coeffs) c.push_back(poly(p, "z"));
  return json{{"order", o.order()}, {"coeffs", c}, {"inhom", poly(o.inhom, "z")}, {"text", to_string(o)}};
}

inline json singularities(const SingularityReport& rep) {
  json fs = json::array();
  for (const auto& f : rep.factors) {
    json roots = json::array();
    for (const auto& r : f.roots) roots.push_back(box(r.box));
    json exps = json::array();
    const long deg = f.factor.degree();
    for (const auto& e : f.exponents) {
      // a rational exponent occurs once per conjugate root, so its multiplicity
      // in R is deg(f) times the local one; irrational ones keep the R count
      unsigned local = e.multiplicity;
      bool rational = false;
      for (const auto& q : f.rational_exponents) rational = rational || e.box.contains(q, 0);
      if (rational && deg > 0 && e.multiplicity % deg == 0) local = e.multiplicity / static_cast<unsigned>(deg);
      exps.push_back(json{{"box", box(e.box)}, {"rational", rational}, {"log_power_bound", local - 1}});
    }
    json rats = json::array();
    for (const auto& q : f.rational_exponents) rats.push_back(exact(q));
    json entry{{"factor", poly(f.factor, "z")},
               {"multiplicity", f.multiplicity},
               {"certified_irreducible", f.certified_irreducible},
               {"is_origin", f.is_origin},
               {"regular", f.regular},
               {"roots", roots}};
    if (f.regular) {
      entry["exponent_poly"] = poly(f.exponent_poly, "alpha");
      entry["exponents"] = exps;
      entry["rational_exponents"] = rats;
      entry["all_rational"] = f.all_rational;
      entry["has_irrational_exponent"] = f.has_irrational_exponent;
    }
    fs.push_back(entry);
  }
  return json{{"origin_singular", rep.origin_singular}, {"factors", fs}};
}

inline json verdict(const Verdict& v) {
  json t = json::array();
  for (const auto& e : v.trace) t.push_back(json{{"step", e.step}, {"detail", e.detail}});
  return json{{"kind", to_string(v.kind)}, {"trace", t}};
}

inline json estimate(const Estimate& e) {
  json ex = json::array();
  for (const auto& x : e.extrapolants) ex.push_back(real(x));
  return json{{"value", real(e.value)}, {"gauge", real(e.gauge)}, {"extrapolants", ex}};
}

inline json fit(const AsymptoticFit& f, long fitted_through) {
  json g{{"raw", real(f.s_class.raw)}, {"gauge", real(f.s_class.gauge)}};
  g["snapped"] = f.s_class.snapped ? json(exact(*f.s_class.snapped)) : json(nullptr);
  json out{{"s_class", g}, {"fitted_through", fitted_through}};
  if (f.growth) out["growth"] = estimate(*f.growth);
  if (f.theta) out["theta"] = estimate(*f.theta);
  if (!f.note.empty()) out["note"] = f.note;
  return out;
}

inline json cross(const CrossValidation& cv) {
  json out{{"applicable", cv.applicable}, {"consistent", cv.consistent}, {"growth_consistent", cv.growth_consistent},
           {"theta_consistent", cv.theta_consistent}};
  if (!cv.note.empty()) out["note"] = cv.note;
  if (cv.root) out["root"] = box(*cv.root);
  if (cv.applicable) out["factor"] = poly(cv.factor, "z");
  if (cv.predicted_growth) out["predicted_growth"] = real(*cv.predicted_growth);
  if (cv.growth_distance) out["growth_distance"] = real(*cv.growth_distance);
  if (cv.exponent) out["exponent"] = box(*cv.exponent);
  if (cv.predicted_theta) out["predicted_theta"] = real(*cv.predicted_theta);
  if (cv.theta_distance) out["theta_distance"] = real(*cv.theta_distance);
  return out;
}

inline json curve_tail(const std::vector<CurvePoint>& c, std::size_t keep = 8) {
  json out = json::array();
  for (std::size_t i = c.size() > keep ? c.size() - keep : 0; i < c.size(); ++i) out.push_back(json{{"n", c[i].n}, {"value", real(c[i].value)}});
  return out;
}

inline json certificate(const Certificate& c) {
  return json{{"bound", real(c.bound)}, {"tail_slope", real(c.tail_slope)}, {"alarm", c.alarm}, {"curve_tail", curve_tail(c.curve)}};
}

inline json g_certificate(const GCertificate& g) {
  json d = certificate(g.denominators.cert);
  if (!g.denominators.running_lcm.empty()) {
    const Integer& L = g.denominators.running_lcm.back();
    d["final_lcm_digits"] = L.get_str().size();
  }
  return json{{"height", certificate(g.height)},
              {"denominators", d},
              {"holonomic", g.holonomic},
              {"verdict", to_string(g.verdict)},
              {"note", "heuristic at desk scale; conjugate bounds reduce to absolute values since all constants are rational"}};
}

inline json lcm_table(const std::vector<LcmRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(json{{"n", r.n}, {"L", exact(r.L)}, {"log_L_over_n", real(r.normalized_log)}});
  return out;
}

inline json tool() { return json{{"name", kToolName}, {"version", kToolVersion}}; }

}  // namespace holoscope::report
