// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "holoscope/pipeline.hpp"
#include "random_terms.hpp"
#include "synthetic.hpp"

using namespace holoscope;
using report::json;

namespace {

constexpr mpfr_prec_t kBits = 256;

PolyQ poly(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return PolyQ(std::move(v));
}

const char* kAperyTerm = "sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2";
Recurrence counter() { return Recurrence{{poly({1, 2}), poly({-11, -7}), poly({1, 2})}}; }
std::vector<Rational> counter_init() { return {Rational(0), Rational(1)}; }

std::string data(const std::string& name) { return std::string(HOLOSCOPE_TEST_DATA) + "/" + name; }

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(HOLOSCOPE_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

/// Collects failed sub-checks for one criterion.
class Checks {
 public:
  void operator()(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

Real dist(const Rational& x, const Real& y) { return abs(Real(x, kBits) - y); }

bool all_zero(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

const FactorReport* factor_of(const SingularityReport& rep, const PolyQ& f) {
  for (const auto& fr : rep.factors)
    if (fr.factor == f) return &fr;
  return nullptr;
}

void counterexample(Checks& ok) {
  LinearODE o = rec_to_ode(counter(), counter_init());
  ok(o.order() == 1 && o.leading() == poly({0, 2, -7, 2}), "leading coefficient z(2z^2 - 7z + 2)");
  auto s = extend_sequence(counter(), counter_init(), 120);
  auto res = series_residual(o, s);
  ok(res.size() >= 101 && all_zero(res), "power-series residual vanishes through z^100");

  const Real sq33 = sqrt(Real(33L, kBits));
  const PolyQ q = poly({2, -7, 2});
  auto coarse = singular_points(o, Rational(1, 1000000000000L));
  const FactorReport* fq = factor_of(coarse, q);
  ok(fq && fq->roots.size() == 2, "singular factor 2z^2 - 7z + 2 found");
  if (fq && fq->roots.size() == 2) {
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& b = fq->roots[i].box;
      const Real want = (Real(7L, kBits) + (i == 0 ? -sq33 : sq33)) / Real(4L, kBits);
      ok(b.radius <= Rational(1, 1000000000000L), "root box radius <= 1e-12");
      ok(dist(b.re, want) <= Real(b.radius, kBits) && b.im == 0, "root box contains (7 -+ sqrt 33)/4");
    }
  }

  auto rep = analyze_singularities(o);
  fq = factor_of(rep, q);
  ok(fq && fq->regular && fq->exponents.size() == 2, "two exponents at the pair");
  if (fq && fq->exponents.size() == 2) {
    ok(fq->exponent_poly == poly({-31, 88, 44}), "exponent polynomial 44a^2 + 88a - 31");
    const Real c = Real(5L, kBits) / Real(2L, kBits) * sqrt(Real(3L, kBits) / Real(11L, kBits));
    const Real tol(Rational(1, 100000000000000000000_mpz), kBits);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& b = fq->exponents[i].box;
      const Real want = Real(-1L, kBits) + (i == 0 ? Real(0L, kBits) - c : c);
      ok(dist(b.re, want) <= tol && b.im == 0, "exponent -1 -+ (5/2)sqrt(3/11) to 1e-20");
    }
    ok(!rationality_verdict(fq->exponent_poly).all_rational, "rationality test says irrational");
  }
  auto v = obstruction_verdict(o, s, rep, DerivedRecurrence{counter(), 0});
  ok(v.kind == VerdictKind::ObstructionIrrationalExponent, "verdict ObstructionIrrationalExponent");
  ok(cli("obstruct " + data("counter.rec") + " --initials 0,1").code == exit_code::kObstruction, "CLI exit code 10");
}

void apery(Checks& ok) {
  BalancedTerm t = parse_term(kAperyTerm);
  ExactSequence s = eval_sequence(t, 60);
  const long head[] = {1, 5, 73, 1445, 33001};
  for (long n = 0; n < 5; ++n) ok(s.at(n) == head[n], "a_" + std::to_string(n) + " = " + std::to_string(head[n]));
  bool integral = true;
  for (const auto& v : s.values) integral = integral && v.get_den() == 1;
  ok(integral, "integer values through n = 60");
  auto dc = denominator_certificate(s);
  bool flat = true;
  for (const auto& p : dc.cert.curve) flat = flat && p.value == Real(1L, kBits);
  ok(flat && !dc.cert.alarm, "denominator certificate identically 1");

  auto r = guess_recurrence(s, 6, 8);
  ok(r && r->order() == 2 && r->degree() == 3, "guessed recurrence has order 2, degree 3");
  if (!r) return;
  ok(verify_recurrence(*r, eval_sequence(t, 200)), "recurrence holds on held-out values n <= 200");

  LinearODE o = rec_to_ode(*r, {s.values[0], s.values[1]});
  auto rep = analyze_singularities(o);
  auto ext = extend_sequence(*r, s, 1024);
  auto fit = fit_sequence(to_real(ext), 4);
  auto cv = cross_validate(fit, rep);
  const Real lambda = pow(Real(1L, kBits) + sqrt(Real(2L, kBits)), Real(4L, kBits));
  ok(fit.growth && abs(fit.growth->value - lambda) <= Real(1e-3, kBits), "growth 33.9706 within 1e-3");
  ok(fit.theta && abs(fit.theta->value + Real(1.5, kBits)) <= Real(5e-2, kBits), "theta -1.5 within 5e-2");
  ok(cv.applicable && cv.consistent, "cross-validation consistent with the ODE exponents");
  ok(cv.predicted_theta && abs(*cv.predicted_theta + Real(1.5, kBits)) <= Real(1e-20, kBits), "predicted theta is -3/2");
}

void binomial(Checks& ok) {
  BalancedTerm t = parse_term("sum k: binom(n,k)");
  ExactSequence s = eval_sequence(t, 200);
  bool powers = true;
  for (long n = 0; n <= 200; ++n) powers = powers && s.at(n) == Rational(pow(Integer(2), static_cast<unsigned long>(n)));
  ok(powers, "a_n = 2^n for n <= 200");
  auto r = guess_recurrence(s, 6, 8);
  ok(r && r->order() == 1, "recurrence of order 1");
  if (!r) return;
  LinearODE o = rec_to_ode(*r, {s.values[0]});
  auto rep = analyze_singularities(o);
  std::size_t away = 0;
  for (const auto& f : rep.factors) away += !f.is_origin;
  const FactorReport* f = factor_of(rep, poly({-1, 2}));
  ok(away == 1 && f && f->roots.size() == 1 && f->roots[0].box.contains(Rational(1, 2), 0), "single singularity at 1/2");
  ok(f && f->rational_exponents == std::vector<Rational>{Rational(-1)} && f->all_rational, "exponent -1");
  ok(obstruction_verdict(o, s, rep, DerivedRecurrence{*r, 0}).kind == VerdictKind::ConsistentRationalExponents,
     "verdict ConsistentRationalExponents");
}

void binomial_form_property(Checks& ok) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    BalancedTerm t = fixtures::random_balanced_term(rng, 2, 6);
    BinomialForm b = to_binomial_form(t);
    FactorialCache fac;
    bool same = true;
    for (long n = 0; n <= 10 && same; ++n)
      for (const auto& k : enumerate_support(t, n).points) same = same && eval_binomial_form(b, n, k) == eval_term(t, n, k, fac);
    ok(same, "values preserved for " + to_string(t));

    BalancedTerm mutant = t;
    mutant.factors[0].form.coeff_n += 1;
    bool rejected = !check_balance(mutant).balanced;
    try {
      to_binomial_form(mutant);
      rejected = false;
    } catch (const UnbalancedTermError&) {
    }
    ok(rejected, "unbalanced mutant rejected for " + to_string(t));
  }
}

void lcm_table(Checks& ok) {
  auto rows = lcm_binomial_table(500);
  ok(rows.size() == 500 && rows[3].L == 12, "L_4 = 12");
  Integer L = 1;
  bool bounded = true, divides = true;
  for (const auto& r : rows) {
    L = lcm(L, Integer(r.n));
    divides = divides && L % r.L == 0;
    if (r.n >= 20) bounded = bounded && r.normalized_log < Real(1.1, kBits);
  }
  ok(bounded, "log L_n / n < 1.1 for 20 <= n <= 500");
  ok(divides, "L_n divides lcm(1..n) for n <= 500");
}

void calibration(Checks& ok) {
  for (Rational lambda : {Rational(1, 2), Rational(2), Rational(10)})
    for (Rational theta : {Rational(-3, 2), Rational(0), Rational(5, 2)}) {
      auto s = fixtures::power_sequence(lambda, theta, 500, kBits);
      auto g = fit_growth(s, 4);
      auto th = fit_exponent(s, g.value, 4);
      std::ostringstream name;
      name << "lambda " << lambda << ", theta " << theta;
      ok(dist(lambda, g.value) < Real(1e-8, kBits), name.str() + ": lambda to 1e-8");
      ok(dist(theta, th.value) < Real(1e-4, kBits), name.str() + ": theta to 1e-4");
    }
  auto cs = to_real(extend_sequence(counter(), counter_init(), 2000), kBits);
  auto g = fit_growth(cs, 4);
  auto th = fit_exponent(cs, g.value, 4);
  const Real want = Real(5L, kBits) * sqrt(Real(33L, kBits)) / Real(22L, kBits);
  ok(abs(th.value - want) < Real(1e-2, kBits), "counterexample theta 5 sqrt(33)/22 within 1e-2");
}

void certificates(Checks& ok) {
  auto cs = extend_sequence(counter(), counter_init(), 200);
  ok(Integer(cs.at(5).get_den()) == 7, "den(a_5) = 7");
  auto dc = denominator_certificate(cs);
  bool chain = true;
  for (std::size_t i = 1; i < dc.running_lcm.size(); ++i) chain = chain && dc.running_lcm[i] % dc.running_lcm[i - 1] == 0;
  ok(chain, "running lcm is a divisibility chain");
  bool rising = true;
  for (long n = 40; n <= 200; n += 20) rising = rising && dc.cert.curve[n - 1].value > dc.cert.curve[n - 21].value;
  ok(rising, "denominator curve increases across every 20-step block through n = 200");
  ok(dc.running_lcm.back() > dc.running_lcm[100], "lcm keeps growing past n = 100");
  ok(dc.cert.alarm, "alarm raised");
  ok(g_certificate(cs, true).verdict == GVerdict::DenominatorGrowthAlarm, "G verdict denominator-growth-alarm");

  auto ap = denominator_certificate(eval_sequence(parse_term(kAperyTerm), 60));
  bool flat = true;
  for (const auto& p : ap.cert.curve) flat = flat && p.value == Real(1L, kBits);
  ok(flat && !ap.cert.alarm, "Apery denominator curve flat at 1, no alarm");
}

void determinism(Checks& ok) {
  PipelineOptions opt;
  auto apery_seq = eval_sequence(parse_term(kAperyTerm), 200);
  auto counter_seq = extend_sequence(counter(), counter_init(), 200);
  PipelineOptions obs = opt;
  obs.n_max = 200;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> runs{
      {"obstruct", [&] { return obstruct(counter(), counter_init(), "counter.rec", obs); }},
      {"analyze-term apery", [&] { return analyze_term(kAperyTerm, "apery.term", opt); }},
      {"analyze-term binomial", [&] { return analyze_term("sum k: binom(n,k)", "binomial.term", opt); }},
      {"fit", [&] { return fit_only(apery_seq, "apery.seq", 4); }},
      {"certify", [&] { return certify(counter_seq, "counter.seq", opt); }},
      {"lcm-table", [&] { return holoscope::lcm_table(500); }},
  };
  for (const auto& [name, run] : runs)
    ok(without_timing(run().report).dump() == without_timing(run().report).dump(), "in-process repeat of " + name);

  for (const std::string& args : {"obstruct " + data("counter.rec") + " --initials 0,1 --nmax 200",
                                  "analyze-term " + data("apery.term"), "analyze-term " + data("binomial.term"),
                                  "fit " + data("apery.seq"), "certify " + data("apery.seq"), std::string("lcm-table --nmax 500")}) {
    CliRun a = cli(args), b = cli(args);
    bool same = false;
    try {
      same = without_timing(json::parse(a.out)).dump() == without_timing(json::parse(b.out)).dump() && a.code == b.code;
    } catch (const json::exception&) {
    }
    ok(same, "CLI repeat of " + args);
  }
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0 means no limit
  void (*body)(Checks&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "counterexample pipeline", 10, counterexample},
      {2, "Apery pipeline", 60, apery},
      {3, "binomial smoke pipeline", 5, binomial},
      {4, "binomial-form property suite", 0, binomial_form_property},
      {5, "lcm of binomials table", 30, lcm_table},
      {6, "asymptotics calibration", 0, calibration},
      {7, "arithmetic certificates", 0, certificates},
      {8, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(checks);
    } catch (const std::exception& e) {
      checks(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0) checks(secs < c.limit_seconds, "runtime under " + std::to_string(static_cast<int>(c.limit_seconds)) + " s");
    const bool pass = checks.failures().empty();
    failed += !pass;
    std::printf("criterion %d: %s  %s (%.2f s)\n", c.id, pass ? "PASS" : "FAIL", c.title, secs);
    for (const auto& f : checks.failures()) std::printf("    failed: %s\n", f.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
