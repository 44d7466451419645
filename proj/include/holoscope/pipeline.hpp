#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "holoscope/report.hpp"
#include "holoscope/term_parser.hpp"

namespace holoscope {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // I/O and other runtime failures
inline constexpr int kParse = 2;
inline constexpr int kUnbalanced = 3;
inline constexpr int kInfiniteSupport = 4;
inline constexpr int kGuessFailure = 5;
inline constexpr int kSingularStep = 6;
inline constexpr int kObstruction = 10;
inline constexpr int kInconclusive = 11;
}  // namespace exit_code

struct PipelineOptions {
  long n_max = 60;
  long max_order = 6;
  long max_degree = 8;
  unsigned depth = 4;
  long fit_n_max = 1024;  // fits run on the recurrence extension to max(n_max, fit_n_max)
};

struct Outcome {
  report::json report;
  int exit_code = exit_code::kOk;
};

namespace detail {

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline void fail(Outcome& o, const std::string& stage, int code, const std::string& message) {
  o.report["errors"].push_back(report::json{{"stage", stage}, {"code", code}, {"message", message}});
  o.exit_code = code;
}

inline void note_error(Outcome& o, const std::string& stage, const std::string& message) {
  o.report["errors"].push_back(report::json{{"stage", stage}, {"code", nullptr}, {"message", message}});
}

inline void finish(Outcome& o, const Stopwatch& w) {
  o.report["exit_code"] = o.exit_code;
  o.report["timing"] = report::json{{"seconds", w.seconds()}};
}

inline report::json options_json(const PipelineOptions& opt) {
  return report::json{{"n_max", opt.n_max},     {"max_order", opt.max_order}, {"max_degree", opt.max_degree},
                      {"depth", opt.depth},     {"fit_n_max", opt.fit_n_max},
                      {"precision_digits", precision_digits_from_env()}};
}

/// Shared tail of both pipelines: ODE, singularities, verdict, fit,
/// cross-validation, certificates.
inline Verdict analyze_recurrence(Outcome& o, const Recurrence& r, const ExactSequence& s,
                                                 const PipelineOptions& opt) {
  const long d = r.order();
  std::vector<Rational> init(s.values.begin(), s.values.begin() + d);
  LinearODE ode = rec_to_ode(r, init);
  o.report["ode"] = report::ode(ode);
  SingularityReport sing = analyze_singularities(ode);
  o.report["singularities"] = report::singularities(sing);
  Verdict v = obstruction_verdict(ode, s, sing, DerivedRecurrence{r, 0});
  o.report["verdict"] = report::verdict(v);

  const long fit_to = std::max(opt.n_max, opt.fit_n_max);
  try {
    ExactSequence ext = extend_sequence(r, s, fit_to);
    AsymptoticFit f = fit_sequence(to_real(ext), opt.depth);
    o.report["fit"] = report::fit(f, ext.last_index());
    o.report["cross_validation"] = report::cross(cross_validate(f, sing));
  } catch (const SingularStepError& e) {
    note_error(o, "fit", e.what());
  } catch (const FitError& e) {
    note_error(o, "fit", e.what());
  }
  o.report["certificates"] = report::g_certificate(g_certificate(s, true));
  return v;
}

}  // namespace detail

/// parse -> balance/finiteness -> eval -> guess -> ODE -> singularities ->
/// fit -> cross-validation -> certificates.
inline Outcome analyze_term(const std::string& term_text, const std::string& source, const PipelineOptions& opt) {
  detail::Stopwatch w;
  Outcome o;
  o.report = report::json{{"command", "analyze-term"}, {"tool", report::tool()}, {"errors", report::json::array()}};
  o.report["input"] = report::json{{"source", source}, {"text", term_text}, {"options", detail::options_json(opt)}};
  BalancedTerm t;
  try {
    t = parse_term(term_text);
  } catch (const ParseError& e) {
    detail::fail(o, "parse", exit_code::kParse, e.what());
    detail::finish(o, w);
    return o;
  } catch (const PreconditionError& e) {
    detail::fail(o, "parse", exit_code::kParse, e.what());
    detail::finish(o, w);
    return o;
  }
  o.report["term"] = report::json{{"normalized", to_string(t)}, {"summation_variables", t.variables}};
  auto bal = check_balance(t);
  std::vector<std::string> vars{"n"};
  vars.insert(vars.end(), t.variables.begin(), t.variables.end());
  o.report["term"]["balanced"] = bal.balanced;
  if (!bal.balanced) {
    o.report["term"]["residual"] = bal.residual.to_string(vars);
    detail::fail(o, "balance", exit_code::kUnbalanced, "term is not balanced: residual " + bal.residual.to_string(vars));
    detail::finish(o, w);
    return o;
  }
  if (auto dir = recession_direction(t)) {
    o.report["term"]["recession_direction"] = *dir;
    detail::fail(o, "finiteness", exit_code::kInfiniteSupport, "summation support is infinite along the reported direction");
    detail::finish(o, w);
    return o;
  }
  ExactSequence s = eval_sequence(t, opt.n_max);
  o.report["sequence"] = report::sequence(s);

  std::optional<Recurrence> r;
  try {
    r = guess_recurrence(s, opt.max_order, opt.max_degree);
  } catch (const InsufficientDataError& e) {
    detail::fail(o, "guess", exit_code::kGuessFailure, e.what());
  }
  if (!r) {
    if (o.exit_code == exit_code::kOk)
      detail::fail(o, "guess", exit_code::kGuessFailure,
                   "no recurrence of order <= " + std::to_string(opt.max_order) + " and degree <= " + std::to_string(opt.max_degree));
    o.report["certificates"] = report::g_certificate(g_certificate(s, false));
    detail::finish(o, w);
    return o;
  }
  o.report["recurrence"] = report::recurrence(*r);
  o.report["recurrence"]["verified_through"] = s.last_index();
  detail::analyze_recurrence(o, *r, s, opt);
  detail::finish(o, w);
  return o;
}

/// recurrence + initial values -> extension -> ODE -> exponents -> verdict.
/// Exit code 0 / 10 / 11 follows the verdict.
inline Outcome obstruct(const Recurrence& r, const std::vector<Rational>& initial, const std::string& source,
                        const PipelineOptions& opt) {
  detail::Stopwatch w;
  Outcome o;
  o.report = report::json{{"command", "obstruct"}, {"tool", report::tool()}, {"errors", report::json::array()}};
  report::json init = report::json::array();
  for (const auto& v : initial) init.push_back(report::exact(v));
  o.report["input"] = report::json{{"source", source}, {"initials", init}, {"options", detail::options_json(opt)}};
  o.report["recurrence"] = report::recurrence(r);
  if (static_cast<long>(initial.size()) != r.order()) {
    detail::fail(o, "input", exit_code::kParse,
                 "expected " + std::to_string(r.order()) + " initial values, got " + std::to_string(initial.size()));
    detail::finish(o, w);
    return o;
  }
  ExactSequence s;
  try {
    s = extend_sequence(r, initial, opt.n_max);
  } catch (const SingularStepError& e) {
    detail::fail(o, "extend", exit_code::kSingularStep, e.what());
    detail::finish(o, w);
    return o;
  }
  o.report["sequence"] = report::sequence(s);
  auto v = detail::analyze_recurrence(o, r, s, opt);
  switch (v.kind) {
    case VerdictKind::ObstructionIrrationalExponent: o.exit_code = exit_code::kObstruction; break;
    case VerdictKind::ConsistentRationalExponents: o.exit_code = exit_code::kOk; break;
    case VerdictKind::Inconclusive: o.exit_code = exit_code::kInconclusive; break;
  }
  detail::finish(o, w);
  return o;
}

/// Growth, exponent and Gevrey class of a sequence given as exact values.
inline Outcome fit_only(const ExactSequence& s, const std::string& source, unsigned depth) {
  detail::Stopwatch w;
  Outcome o;
  o.report = report::json{{"command", "fit"}, {"tool", report::tool()}, {"errors", report::json::array()}};
  o.report["input"] = report::json{{"source", source}, {"depth", depth}, {"precision_digits", precision_digits_from_env()}};
  o.report["sequence"] = report::sequence(s);
  try {
    o.report["fit"] = report::fit(fit_sequence(to_real(s), depth), s.last_index());
  } catch (const FitError& e) {
    detail::fail(o, "fit", exit_code::kFailure, e.what());
  }
  detail::finish(o, w);
  return o;
}

inline Outcome certify(const ExactSequence& s, const std::string& source, const PipelineOptions& opt) {
  detail::Stopwatch w;
  Outcome o;
  o.report = report::json{{"command", "certify"}, {"tool", report::tool()}, {"errors", report::json::array()}};
  o.report["input"] = report::json{{"source", source}, {"options", detail::options_json(opt)}};
  o.report["sequence"] = report::sequence(s);
  std::optional<Recurrence> r;
  try {
    r = guess_recurrence(s, opt.max_order, opt.max_degree);
  } catch (const InsufficientDataError& e) {
    detail::note_error(o, "guess", e.what());
  }
  if (r) o.report["recurrence"] = report::recurrence(*r);
  o.report["certificates"] = report::g_certificate(g_certificate(s, r.has_value()));
  detail::finish(o, w);
  return o;
}

inline Outcome lcm_table(long n_max) {
  detail::Stopwatch w;
  Outcome o;
  o.report = report::json{{"command", "lcm-table"}, {"tool", report::tool()}, {"errors", report::json::array()}};
  o.report["input"] = report::json{{"n_max", n_max}};
  o.report["table"] = report::lcm_table(lcm_binomial_table(n_max));
  detail::finish(o, w);
  return o;
}

/// Copy of a report without the timing field, for determinism checks.
inline report::json without_timing(report::json j) {
  j.erase("timing");
  return j;
}

}  // namespace holoscope
