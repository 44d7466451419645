#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "holoscope/term_parser.hpp"
#include "random_terms.hpp"

using namespace holoscope;

namespace {

const char* kApery = "sum k: (n+k)!^2 * k!^-4 * (n-k)!^-2";

LinearForm form(long cn, std::vector<long> ck, long c0 = 0) { return {cn, std::move(ck), c0}; }

/// Brute-force support over a wide box; the oracle for enumerate_support.
std::vector<std::vector<long>> brute_support(const BalancedTerm& t, long n, long box = 40) {
  std::vector<std::vector<long>> pts;
  const std::size_t r = t.arity();
  std::vector<long> k(r, -box);
  if (r == 0) {
    bool ok = true;
    for (const auto& f : t.factors) ok = ok && f.form(n, k) >= 0;
    if (ok) pts.push_back(k);
    return pts;
  }
  for (;;) {
    bool ok = true;
    for (const auto& f : t.factors) ok = ok && f.form(n, k) >= 0;
    if (ok) pts.push_back(k);
    std::size_t i = r;
    while (i-- > 0) {
      if (k[i] < box) {
        ++k[i];
        break;
      }
      k[i] = -box;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return pts;
}

}  // namespace

TEST(ParseTerm, AperyTerm) {
  BalancedTerm t = parse_term(kApery);
  ASSERT_EQ(t.variables, std::vector<std::string>{"k"});
  ASSERT_EQ(t.factors.size(), 8u);
  std::vector<int> signs;
  for (const auto& f : t.factors) signs.push_back(f.sign);
  EXPECT_EQ(signs, (std::vector<int>{1, 1, -1, -1, -1, -1, -1, -1}));
  EXPECT_EQ(t.factors[0].form, form(1, {1}));
  EXPECT_EQ(t.factors[2].form, form(0, {1}));
  EXPECT_EQ(t.factors[6].form, form(1, {-1}));
  EXPECT_EQ(t.c0, 1);
}

TEST(ParseTerm, BinomialDesugars) {
  BalancedTerm t = parse_term("sum k: binom(n,k)");
  ASSERT_EQ(t.factors.size(), 3u);
  EXPECT_EQ(t.factors[0].form, form(1, {0}));
  EXPECT_EQ(t.factors[0].sign, 1);
  EXPECT_EQ(t.factors[1].form, form(0, {1}));
  EXPECT_EQ(t.factors[1].sign, -1);
  EXPECT_EQ(t.factors[2].form, form(1, {-1}));
  EXPECT_EQ(t.factors[2].sign, -1);
}

TEST(ParseTerm, UnclosedParenthesisIsReportedWhereItOpens) {
  try {
    parse_term("sum k: (n+k!");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 8);
  }
}

TEST(ParseTerm, ConstantsCommentsAndMultilineInput) {
  BalancedTerm t = parse_term(
      "# two summation variables\n"
      "sum k, j:\n"
      "  (-1)^k * 3/2^n * 2^j   # constants\n"
      "  * (2n - k + 1)! / (k)! / (2*n - 2k + 1 - j)! / j!^1\n");
  EXPECT_EQ(t.c0, Rational(3, 2));
  EXPECT_EQ(t.c, (std::vector<Rational>{Rational(-1), Rational(2)}));
  ASSERT_EQ(t.factors.size(), 4u);
  EXPECT_EQ(t.factors[0].form, form(2, {-1, 0}, 1));
  EXPECT_EQ(t.factors[2].form, form(2, {-2, -1}, 1));
  EXPECT_EQ(t.factors[2].sign, -1);
  EXPECT_TRUE(check_balance(t).balanced);
}

TEST(ParseTerm, ErrorKinds) {
  auto kind_of = [](const char* src) {
    try {
      parse_term(src);
    } catch (const ParseError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << src;
    return ParseError::Kind::Syntax;
  };
  EXPECT_EQ(kind_of("sum k: (n+m)!"), ParseError::Kind::UnknownVariable);
  EXPECT_EQ(kind_of("sum k: (n/2)! * k!^-1"), ParseError::Kind::NonIntegerCoefficient);
  EXPECT_EQ(kind_of("sum k: (n*k)!"), ParseError::Kind::NonLinear);
  EXPECT_EQ(kind_of("sum k: 3 * k!"), ParseError::Kind::Syntax);
  EXPECT_EQ(kind_of("sum n: n!"), ParseError::Kind::Syntax);
  EXPECT_EQ(kind_of("sum k: k! $"), ParseError::Kind::Syntax);
  EXPECT_EQ(kind_of("k!"), ParseError::Kind::Syntax);
  try {
    parse_term("sum k:\n  k! * \n  (n+q)!");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 6);
  }
}

TEST(CheckBalance, Examples) {
  auto apery = check_balance(parse_term(kApery));
  EXPECT_TRUE(apery.balanced);
  EXPECT_TRUE(apery.residual.is_zero());

  auto unbalanced = check_balance(parse_term("sum k: n! * k!^-1"));
  EXPECT_FALSE(unbalanced.balanced);
  EXPECT_EQ(unbalanced.residual, form(1, {-1}));
  EXPECT_EQ(unbalanced.residual.to_string({"k"}), "n - k");

  EXPECT_TRUE(check_balance(parse_term("sum k: binom(n,k)")).balanced);
}

TEST(CheckBalance, DependsOnlyOnTheSignedSum) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    BalancedTerm t = fixtures::random_balanced_term(rng);
    auto base = check_balance(t);
    // Mutate so the term is generally unbalanced, then compare residuals.
    t.factors[0].form.coeff_n += 1;
    auto r0 = check_balance(t).residual;
    BalancedTerm perm = t;
    std::shuffle(perm.factors.begin(), perm.factors.end(), rng);
    EXPECT_EQ(check_balance(perm).residual, r0);
    // Split factor 0 into B and A - B with the same sign.
    BalancedTerm split = t;
    LinearForm b = LinearForm::zero(t.arity());
    b.coeff_n = 1;
    b.constant = -2;
    FactorialFactor f0 = split.factors[0];
    split.factors[0].form = f0.form - b;
    split.factors.push_back({b, f0.sign});
    EXPECT_EQ(check_balance(split).residual, r0);
    EXPECT_TRUE(base.balanced);
  }
}

TEST(CheckFiniteness, Examples) {
  EXPECT_TRUE(check_finiteness(parse_term(kApery)));
  BalancedTerm unbounded = parse_term("sum k: (n+k)! * k!^-1 * n!^-1");
  EXPECT_FALSE(check_finiteness(unbounded));
  auto d = recession_direction(unbounded);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(*d, std::vector<long>{1});

  BalancedTerm r0;
  r0.factors.push_back({LinearForm{1, {}, 0}, 1});
  r0.factors.push_back({LinearForm{1, {}, 0}, -1});
  EXPECT_TRUE(check_finiteness(r0));
}

TEST(CheckFiniteness, WitnessLiesInTheRecessionCone) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> coef(-3, 3);
  int infinite = 0;
  for (int trial = 0; trial < 300; ++trial) {
    BalancedTerm t;
    t.variables = {"k", "j"};
    t.c = {1, 1};
    for (int f = 0; f < 3; ++f) t.factors.push_back({LinearForm{coef(rng), {coef(rng), coef(rng)}, coef(rng)}, 1});
    auto d = recession_direction(t);
    if (!d) {
      // Oracle: brute force over a wide box finds the same slice, away from
      // the box boundary.
      for (long n : {0L, 3L}) {
        auto pts = brute_support(t, n, 120);
        for (const auto& k : pts) {
          EXPECT_LT(std::labs(k[0]), 120);
          EXPECT_LT(std::labs(k[1]), 120);
        }
        EXPECT_EQ(enumerate_support(t, n).points, pts);
      }
      continue;
    }
    ++infinite;
    EXPECT_TRUE((*d)[0] != 0 || (*d)[1] != 0);
    for (const auto& f : t.factors) EXPECT_GE(f.form.coeff_k[0] * (*d)[0] + f.form.coeff_k[1] * (*d)[1], 0);
  }
  EXPECT_GT(infinite, 10);
}

TEST(EnumerateSupport, Examples) {
  BalancedTerm t = parse_term(kApery);
  EXPECT_EQ(enumerate_support(t, 2).points, (std::vector<std::vector<long>>{{0}, {1}, {2}}));
  EXPECT_EQ(enumerate_support(t, 0).points, (std::vector<std::vector<long>>{{0}}));
  BalancedTerm empty = parse_term("sum k: (k - n - 1)! * (2n - k)!^-1 * (2k-3n-1)!");
  EXPECT_TRUE(enumerate_support(empty, 0).points.empty());
  EXPECT_THROW(enumerate_support(parse_term("sum k: (n+k)! * k!^-1 * n!^-1"), 3), InfiniteSupportError);
}

TEST(EnumerateSupport, MatchesBruteForceOnRandomTerms) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 80; ++trial) {
    BalancedTerm t = fixtures::random_balanced_term(rng);
    for (long n = 0; n <= 6; ++n) {
      auto slice = enumerate_support(t, n);
      EXPECT_EQ(slice.points, brute_support(t, n));
      for (const auto& k : slice.points)
        for (const auto& f : t.factors) EXPECT_GE(f.form(n, k), 0);
    }
  }
}

TEST(ToBinomialForm, AperyAtOneOne) {
  BalancedTerm t = parse_term(kApery);
  BinomialForm b = to_binomial_form(t);
  int num = 0, den = 0;
  for (const auto& bin : b.binomials) (bin.sign > 0 ? num : den)++;
  EXPECT_EQ(num, 5);  // binom(4,1) binom(3,1) binom(2,1) binom(1,1) binom(0,0)
  EXPECT_EQ(den, 1);  // binom(4,2)
  EXPECT_EQ(eval_binomial_form(b, 1, {1}), 4);
  EXPECT_EQ(eval_term(t, 1, {1}), 4);
}

TEST(ToBinomialForm, BinomialIsAlreadyBinomial) {
  BinomialForm b = to_binomial_form(parse_term("sum k: binom(n,k)"));
  ASSERT_EQ(b.binomials.size(), 1u);
  EXPECT_EQ(b.binomials[0].top, form(1, {0}));
  EXPECT_EQ(b.binomials[0].bottom, form(0, {1}));
  EXPECT_EQ(b.binomials[0].sign, 1);
}

TEST(ToBinomialForm, RejectsUnbalanced) {
  EXPECT_THROW(to_binomial_form(parse_term("sum k: n! * k!^-1")), UnbalancedTermError);
}

TEST(ToBinomialForm, PreservesValuesOnRandomTerms) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    BalancedTerm t = fixtures::random_balanced_term(rng);
    BinomialForm b = to_binomial_form(t);
    FactorialCache fac;
    for (long n = 0; n <= 12; ++n)
      for (const auto& k : enumerate_support(t, n).points) ASSERT_EQ(eval_binomial_form(b, n, k), eval_term(t, n, k, fac)) << to_string(t);
  }
}

TEST(EvalTerm, Examples) {
  BalancedTerm t = parse_term(kApery);
  EXPECT_EQ(eval_term(t, 1, {1}), 4);
  EXPECT_EQ(eval_term(t, 2, {1}), 36);
  EXPECT_THROW(eval_term(t, 1, {2}), PreconditionError);
  BalancedTerm c = parse_term("sum k: 3/2^n * (-2)^k * (n-k)! * (n-k)!^-1");
  // all factorial arguments zero at (0, 0)
  EXPECT_EQ(eval_term(c, 0, {0}), 1);
  EXPECT_EQ(eval_term(c, 2, {2}), 9);
  EXPECT_EQ(eval_term(c, 3, {1}), Rational(27, 8) * Rational(-2));
}
