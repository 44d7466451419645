#include <gtest/gtest.h>

#include <sstream>

#include "holoscope/recurrence.hpp"
#include "holoscope/term_parser.hpp"

using namespace holoscope;

namespace {

PolyQ poly(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return PolyQ(std::move(v));
}

Recurrence counter() { return Recurrence{{poly({1, 2}), poly({-11, -7}), poly({1, 2})}}; }

ExactSequence powers_of_two(long n_max) {
  ExactSequence s{0, {}, Provenance::External};
  for (long n = 0; n <= n_max; ++n) s.values.emplace_back(pow(Integer(2), static_cast<unsigned long>(n)));
  return s;
}

const char* kApery = "sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2";

}  // namespace

TEST(ExtendSequence, CounterexampleValues) {
  auto s = extend_sequence(counter(), {Rational(0), Rational(1)}, 7);
  ASSERT_EQ(s.size(), 8u);
  EXPECT_EQ(s.at(2), 11);
  EXPECT_EQ(s.at(3), 65);
  EXPECT_EQ(s.at(4), 314);
  EXPECT_EQ(s.at(5), Rational(9593, 7));
  EXPECT_EQ(s.at(6), Rational(118115, 21));
  EXPECT_EQ(s.provenance, Provenance::RecurrenceExtension);
}

TEST(ExtendSequence, GeometricAndSingularStep) {
  Recurrence geo{{poly({-2}), poly({1})}};
  EXPECT_EQ(extend_sequence(geo, {Rational(1)}, 30).values, powers_of_two(30).values);
  Recurrence sing{{poly({1}), poly({-5, 1})}};
  try {
    extend_sequence(sing, {Rational(1)}, 10);
    FAIL();
  } catch (const SingularStepError& e) {
    EXPECT_EQ(e.n(), 5);
  }
  EXPECT_THROW(extend_sequence(geo, std::vector<Rational>{}, 3), PreconditionError);
}

TEST(VerifyRecurrence, Examples) {
  auto s = extend_sequence(counter(), {Rational(0), Rational(1)}, 50);
  EXPECT_TRUE(verify_recurrence(counter(), s));
  auto apery = eval_sequence(parse_term(kApery), 10);
  EXPECT_FALSE(verify_recurrence(counter(), apery));
  // the failure is already at n = 0: 1*73 - 11*5 + 1*1 = 19
  EXPECT_EQ(counter().apply(0, {apery.at(0), apery.at(1), apery.at(2)}), 19);
  EXPECT_THROW(verify_recurrence(counter(), apery.prefix(2)), PreconditionError);
}

TEST(GuessRecurrence, PowersOfTwo) {
  auto r = guess_recurrence(powers_of_two(30), 6, 8);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, (Recurrence{{poly({-2}), poly({1})}}));
}

TEST(GuessRecurrence, RecoversTheCounterexampleRecurrence) {
  auto s = extend_sequence(counter(), {Rational(0), Rational(1)}, 60);
  auto r = guess_recurrence(s, 6, 8);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, counter());
}

TEST(GuessRecurrence, AperyOrderTwoDegreeThree) {
  BalancedTerm t = parse_term(kApery);
  auto r = guess_recurrence(eval_sequence(t, 40), 6, 8);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->order(), 2);
  EXPECT_EQ(r->degree(), 3);
  // (n+2)^3 a_{n+2} - (2n+3)(17n^2+51n+39) a_{n+1} + (n+1)^3 a_n = 0
  EXPECT_EQ(r->coeffs[2], pow(poly({2, 1}), 3));
  EXPECT_EQ(r->coeffs[0], pow(poly({1, 1}), 3));
  EXPECT_TRUE(verify_recurrence(*r, eval_sequence(t, 200)));
}

TEST(GuessRecurrence, InsufficientDataNamesTheLength) {
  try {
    guess_recurrence(powers_of_two(5), 2, 2);
    FAIL();
  } catch (const InsufficientDataError& e) {
    EXPECT_EQ(e.required(), guess_data_required(1, 0));
  }
}

TEST(GuessRecurrence, NoneWhenNothingSurvives) {
  // a_n = n! + 2^n needs order 2; restrict to order 1
  ExactSequence s{0, {}, Provenance::External};
  Integer f = 1;
  for (long n = 0; n <= 40; ++n) {
    if (n > 0) f *= n;
    s.values.emplace_back(f + pow(Integer(2), static_cast<unsigned long>(n)));
  }
  EXPECT_FALSE(guess_recurrence(s, 1, 4).has_value());
  EXPECT_TRUE(guess_recurrence(s, 2, 4).has_value());
}

TEST(GuessRecurrence, PropertiesRoundTripScalingGuardAndMinimality) {
  std::vector<ExactSequence> cases{
      extend_sequence(counter(), {Rational(0), Rational(1)}, 60),
      eval_sequence(parse_term(kApery), 45),
      eval_sequence(parse_term("sum k: binom(n,k)^2"), 40),
      eval_sequence(parse_term("sum k: binom(n,k) * binom(n+k,k)"), 40),
  };
  for (const auto& s : cases) {
    auto r = guess_recurrence(s, 4, 6);
    ASSERT_TRUE(r);
    // round trip
    std::vector<Rational> init(s.values.begin(), s.values.begin() + r->order());
    EXPECT_EQ(extend_sequence(*r, init, s.last_index()).values, s.values);
    // scaling invariance
    EXPECT_EQ(guess_recurrence(s.scaled(Rational(-7, 3)), 4, 6), r);
    // guard band: the last 10 shifts were not used in the fit but verify
    EXPECT_TRUE(verify_recurrence(*r, s));
    // minimality in the order
    if (r->order() > 1) {
      EXPECT_FALSE(guess_recurrence(s, r->order() - 1, 6).has_value());
    }
  }
}

TEST(RecurrenceFile, ReadWrite) {
  std::istringstream in("# counterexample\norder 2\nP_0: 1 2\nP_1: -11 -7\nP_2: 1 2\n");
  Recurrence r = read_recurrence(in);
  EXPECT_EQ(r, counter());
  std::ostringstream out;
  write_recurrence(out, r);
  std::istringstream back(out.str());
  EXPECT_EQ(read_recurrence(back), r);
  std::istringstream missing("order 2\nP_0: 1\nP_2: 1\n");
  EXPECT_THROW(read_recurrence(missing), Error);
  std::istringstream bad("order 1\nP_0: x\nP_1: 1\n");
  EXPECT_THROW(read_recurrence(bad), Error);
}
