#include <gtest/gtest.h>

#include <random>

#include "lrineq/ineq.hpp"
#include "oracles.hpp"

using namespace lrineq;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

SubspaceFamily with_zero_p(const SubspaceFamily& f) {
  auto members = f.members();
  members.push_back(Subspace::zero(f.modulus(), f.ambient_dim()));
  auto vars = f.variables();
  vars.push_back("P");
  return SubspaceFamily(vars, members);
}

}  // namespace

TEST(Canonicalize, Examples) {
  auto a_given_a = canonicalize(parse_inequality("1 * H(A|A) >= 0", std::vector<std::string>{"A", "B"}));
  EXPECT_TRUE(a_given_a.empty());

  auto mi = canonicalize(parse_inequality("variables: A B\nI(A;B) >= 0"));
  EXPECT_EQ(mi.coeffs().size(), 3u);
  EXPECT_EQ(mi.coefficient(0b01), 1);
  EXPECT_EQ(mi.coefficient(0b10), 1);
  EXPECT_EQ(mi.coefficient(0b11), -1);
}

TEST(Canonicalize, ConditionalMutualInfo) {
  auto e = canonicalize(parse_inequality("variables: X Y Z\n2 * I(X;Y|Z) >= 0"));
  EXPECT_EQ(e.coefficient(0b101), 2);
  EXPECT_EQ(e.coefficient(0b110), 2);
  EXPECT_EQ(e.coefficient(0b111), -2);
  EXPECT_EQ(e.coefficient(0b100), -2);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_inequality("variables: A B\nH(Q) >= 0"), std::invalid_argument);
  EXPECT_THROW(parse_inequality("variables: A B\nH(A >= 0"), std::invalid_argument);
  EXPECT_THROW(parse_inequality("variables: A B\nH(A)"), std::invalid_argument);
  EXPECT_THROW(parse_inequality("H(A) >= 0"), std::invalid_argument);
}

TEST(Parse, RoundTrip) {
  for (const auto& terms : {thm_div_terms(2), thm_nondiv_terms(3), tight_div_terms(2), tight_nondiv_terms(2)}) {
    auto again = parse_inequality(to_text(terms));
    EXPECT_EQ(to_text(again), to_text(terms));
    EXPECT_EQ(canonicalize(again), canonicalize(terms));
  }
  auto e = thm_div(2);
  EXPECT_EQ(canonicalize(parse_inequality(to_text(e))), e);
}

TEST(Canonicalize, DualPathOnRandomFamilies) {
  std::mt19937_64 rng(21);
  for (const auto& terms : {thm_div_terms(2), thm_nondiv_terms(2), tight_div_terms(2), tight_nondiv_terms(2)}) {
    auto e = canonicalize(terms);
    for (int t = 0; t < 100; ++t) {
      auto f = random_family(terms.variables, PrimeModulus(2), 4, rng);
      EXPECT_EQ(e.evaluate(f), evaluate_terms(terms, f));
    }
  }
}

TEST(Evaluate, Examples) {
  PrimeModulus f(3);
  std::vector<Subspace> zeros(7, Subspace::zero(f, 3));
  EXPECT_EQ(thm_div(2).evaluate(SubspaceFamily(ln_variables(2), zeros)), 0);
  EXPECT_EQ(thm_div(2).evaluate(ln_family(2, 3)), -1);
  EXPECT_EQ(thm_nondiv(2).evaluate(ln_family(2, 2)), q(-1, 3));
  EXPECT_THROW(thm_div(2).evaluate(SubspaceFamily({"A_1"}, {Subspace::zero(f, 3)})), std::invalid_argument);
}

TEST(Theorems, TermCoefficients) {
  auto t = thm_div_terms(2);
  detail::LnMasks k{2};
  bool found = false;
  for (const auto& term : t.terms) {
    if (term.measure == Measure::I(k.a_all(), k.c())) {
      EXPECT_EQ(term.coeff, 2);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(t.variables, ln_variables(2));
  EXPECT_THROW(thm_div(1), std::invalid_argument);
  EXPECT_THROW(thm_nondiv(0), std::invalid_argument);
}

TEST(LnFamily, Examples) {
  auto f22 = ln_family(2, 2);
  detail::LnMasks k{2};
  EXPECT_EQ(f22.entropy(k.b_all()), 2u);
  EXPECT_EQ(f22.mutual_info(k.a_all(), k.c()), 1u);
  for (const auto& term : thm_div_terms(2).terms) {
    if (term.measure == Measure::H(k.b_all()) || term.measure == Measure::I(k.a_all(), k.c())) continue;
    TermList one{ln_variables(2), {{1, term.measure}}};
    EXPECT_EQ(evaluate_terms(one, f22), 0);
  }
  EXPECT_EQ(ln_family(2, 3).entropy(k.b_all()), 3u);
  detail::LnMasks k3{3};
  EXPECT_EQ(ln_family(3, 3).entropy(k3.b_all()), 3u);
  EXPECT_EQ(ln_family(3, 2).entropy(k3.b_all()), 4u);
  EXPECT_THROW(ln_family(2, 4), std::invalid_argument);
  EXPECT_THROW(ln_family(2, 3, 2), std::invalid_argument);
}

TEST(Property, RenamingInvariance) {
  std::mt19937_64 rng(22);
  auto e = thm_nondiv(2);
  const std::vector<std::string> renamed{"u", "v", "w", "x", "y", "z", "c"};
  auto r = e.renamed(renamed);
  for (int t = 0; t < 100; ++t) {
    auto f = random_family(e.variables(), PrimeModulus(3), 3, rng);
    // Same subspaces under the new names, listed in reverse order.
    std::vector<std::string> names(renamed.rbegin(), renamed.rend());
    std::vector<Subspace> members(f.members().rbegin(), f.members().rend());
    SubspaceFamily g(names, members);
    EXPECT_EQ(r.evaluate(g), e.evaluate(f));
  }
}

TEST(Verify, Examples) {
  auto clean = verify(thm_div(2), 2, 4, 10000, 1);
  EXPECT_EQ(clean.trials, 10000u);
  EXPECT_TRUE(clean.clean());

  auto dirty = verify(thm_div(2), 3, 3, 50, 1);
  EXPECT_GE(dirty.violations.size(), 1u);
  EXPECT_EQ(dirty.violations.front().trial, -1);
  EXPECT_EQ(dirty.violations.front().value, -1);
  EXPECT_TRUE(violations_reproduce(thm_div(2), dirty));

  EXPECT_TRUE(verify(thm_nondiv(2), 5, 4, 10000, 2).clean());
}

TEST(Verify, NondivCounterexampleInjected) {
  auto r = verify(thm_nondiv(2), 2, 4, 10, 3);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front().value, q(-1, 3));
  EXPECT_TRUE(violations_reproduce(thm_nondiv(2), r));
}

TEST(Verify, DeterministicAcrossWorkers) {
  VerifyOptions one, three;
  three.workers = 3;
  auto a = verify(thm_div(3), 2, 5, 600, 99, one);
  auto b = verify(thm_div(3), 2, 5, 600, 99, three);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.violations.size(), b.violations.size());
  EXPECT_EQ(*a.min_value, *b.min_value);
}

TEST(BoundedDim, Examples) {
  EXPECT_TRUE(bounded_dim_check(TheoremKind::Div, 2, 3, 2000, 4).clean());
  EXPECT_TRUE(bounded_dim_check(TheoremKind::NonDiv, 2, 2, 2000, 5).clean());
  EXPECT_TRUE(bounded_dim_check(TheoremKind::Div, 3, 2, 2000, 6).clean());
  EXPECT_THROW(bounded_dim_check(TheoremKind::Div, 2, 3, 10, 1, 3), std::invalid_argument);
}

TEST(Projection, Dichotomy) {
  auto div = projection_check(2, 2, 300, 7);
  EXPECT_TRUE(div.mismatches.empty());
  EXPECT_GT(div.measured[2], 0u);
  EXPECT_EQ(div.measured.count(3), 0u);

  auto nondiv = projection_check(2, 3, 300, 8);
  EXPECT_TRUE(nondiv.mismatches.empty());
  EXPECT_GT(nondiv.measured[3], 0u);
  EXPECT_EQ(nondiv.measured.count(2), 0u);

  EXPECT_GT(div.degenerate, 0u);
  EXPECT_EQ(div.measured[0], div.degenerate);
  EXPECT_TRUE(div.clean());
  EXPECT_TRUE(nondiv.clean());
}

// With P = 0 the tight form's left side contains H(B_[n+1]) plus nonnegative
// terms over the same right side, so it is never larger than the theorem.
TEST(Tight, ZeroPImpliesTheorem) {
  std::mt19937_64 rng(31);
  auto tight = tight_div(2);
  auto thm = thm_div(2);
  for (int t = 0; t < 300; ++t) {
    auto f = random_family(ln_variables(2), PrimeModulus(2), 4, rng);
    auto tv = tight.evaluate(with_zero_p(f));
    auto v = thm.evaluate(f);
    EXPECT_LE(tv, v);
    if (tv >= 0) {
      EXPECT_GE(v, 0);
    }
  }
}

TEST(Tight, Validity) {
  EXPECT_TRUE(verify(tight_div(2), 2, 4, 3000, 41).clean());
  EXPECT_TRUE(verify(tight_nondiv(2), 3, 4, 3000, 42).clean());
}

TEST(Tight, NondivViolatedByL2OverGF2) {
  EXPECT_LT(tight_nondiv(2).evaluate(ln_family(2, 2, std::nullopt, true)), 0);
  EXPECT_LT(tight_div(2).evaluate(ln_family(2, 3, std::nullopt, true)), 0);
}

TEST(Exhaustive, DivOverGF2Plane) {
  auto r = oracle::exhaustive_gf2_lines(thm_div(2), 2);
  EXPECT_EQ(r.families, 16384u);
  EXPECT_EQ(r.violations, 0u);
}

TEST(Oracle, Gf2Rank) {
  EXPECT_EQ(oracle::gf2_rank({}), 0);
  EXPECT_EQ(oracle::gf2_rank({0b011, 0b101, 0b110}), 2);
  EXPECT_EQ(oracle::gf2_rank({0b001, 0b010, 0b100, 0b111}), 3);
}
