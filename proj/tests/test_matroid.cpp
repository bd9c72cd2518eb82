#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "lrineq/matroid.hpp"

using namespace lrineq;

namespace {

// Some nontrivial combination of the selected columns vanishes (brute force
// over all coefficient vectors).
bool dependent_brute(const FpMatrix& m, SubsetMask s) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < m.cols(); ++i)
    if (s >> i & 1) cols.push_back(i);
  const auto p = m.modulus().value();
  std::vector<std::uint32_t> c(cols.size(), 0);
  for (;;) {
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == p) c[k++] = 0;
    if (k == c.size()) return false;
    bool zero = true;
    for (std::size_t r = 0; r < m.rows() && zero; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < cols.size(); ++j) acc += std::uint64_t{c[j]} * m(r, cols[j]);
      zero = acc % p == 0;
    }
    if (zero) return true;
  }
}

std::vector<SubsetMask> circuits_brute(const FpMatrix& m) {
  std::vector<SubsetMask> out;
  const SubsetMask all = (SubsetMask{1} << m.cols()) - 1;
  for (SubsetMask s = 1; s <= all; ++s) {
    if (!dependent_brute(m, s)) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < m.cols() && minimal; ++i)
      if ((s >> i & 1) && dependent_brute(m, s & ~(SubsetMask{1} << i))) minimal = false;
    if (minimal) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(LnMatrix, Columns) {
  auto m = ln_matrix(2, 2);
  EXPECT_EQ(m(0, 3), 0u);
  EXPECT_EQ(m(1, 3), 1u);
  EXPECT_EQ(m(2, 3), 1u);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(m(r, 6), 1u);
  auto big = ln_matrix(3, 5);
  EXPECT_EQ(big.rows(), 4u);
  EXPECT_EQ(big.cols(), 9u);
  EXPECT_THROW(ln_matrix(1, 2), std::invalid_argument);
  EXPECT_THROW(ln_matrix(2, 6), std::invalid_argument);
}

TEST(Rank, Examples) {
  auto m = VectorMatroid::from_ln(2, 2);
  EXPECT_EQ(m.rank(SubsetMask{0}), 0u);
  EXPECT_EQ(m.rank(), 3u);
  EXPECT_EQ(m.rank(m.ground()), 3u);
  EXPECT_EQ(m.rank(std::vector<std::string>{"B_1", "B_2", "B_3"}), 2u);
  EXPECT_EQ(VectorMatroid::from_ln(2, 3).rank(std::vector<std::string>{"B_1", "B_2", "B_3"}), 3u);
  EXPECT_THROW(m.rank(std::vector<std::string>{"D"}), std::invalid_argument);
}

TEST(Circuits, FreeMatroid) {
  PrimeModulus f(5);
  VectorMatroid m({"x", "y", "z"}, FpMatrix::identity(f, 3));
  EXPECT_TRUE(circuits(m).circuits.empty());
  EXPECT_EQ(coloops(m), m.ground());
}

TEST(Circuits, L2Members) {
  auto m2 = VectorMatroid::from_ln(2, 2);
  auto m3 = VectorMatroid::from_ln(2, 3);
  auto b = m2.mask_of({"B_1", "B_2", "B_3"});
  auto bc = m2.mask_of({"B_1", "B_2", "B_3", "C"});
  EXPECT_TRUE(circuits(m2).contains(b));
  EXPECT_TRUE(circuits(m3).contains(bc));
  EXPECT_FALSE(circuits(m3).contains(b));
}

TEST(Circuits, MatchBruteForce) {
  for (std::uint64_t p : {2u, 3u, 5u}) {
    auto m = VectorMatroid::from_ln(2, p);
    auto expect = circuits_brute(m.matrix());
    CircuitSet e{m.labels(), expect};
    e.normalize();
    EXPECT_EQ(circuits(m).circuits, e.circuits) << "p=" << p;
  }
}

TEST(Circuits, Minimality) {
  for (int n : {2, 3}) {
    for (std::uint64_t p : {2u, 3u, 5u}) {
      auto m = VectorMatroid::from_ln(n, p);
      for (auto c : circuits(m).circuits) {
        EXPECT_TRUE(dependent_brute(m.matrix(), c));
        for (std::size_t i = 0; i < m.size(); ++i)
          if (c >> i & 1) {
            EXPECT_FALSE(dependent_brute(m.matrix(), c & ~(SubsetMask{1} << i)));
          }
      }
    }
  }
}

TEST(Circuits, CapEnforced) {
  auto m = VectorMatroid::from_ln(3, 2);
  EXPECT_THROW(circuits(m, 8), std::invalid_argument);
}

TEST(Coloops, NoneInLn) {
  for (int n : {2, 3})
    for (std::uint64_t p : {2u, 3u, 5u}) EXPECT_EQ(coloops(VectorMatroid::from_ln(n, p)), 0u);
}

TEST(Delete, Basics) {
  auto m = VectorMatroid::from_ln(2, 3);
  auto same = m.delete_elements(SubsetMask{0});
  EXPECT_EQ(same.labels(), m.labels());
  EXPECT_EQ(to_text(same.matrix()), to_text(m.matrix()));
  auto d = m.delete_elements(std::vector<std::string>{"C"});
  EXPECT_EQ(d.size(), 6u);
  EXPECT_THROW(d.index_of("C"), std::invalid_argument);
  EXPECT_EQ(d.rank(), 3u);
  EXPECT_THROW(m.delete_elements(std::vector<std::string>{"Z"}), std::invalid_argument);
}

TEST(Property, RankAxioms) {
  std::mt19937_64 rng(12);
  for (std::uint64_t p : {2u, 3u, 7u}) {
    auto m = VectorMatroid::from_ln(3, p);
    EXPECT_EQ(m.rank(), 4u);
    std::uniform_int_distribution<SubsetMask> pick(0, m.ground());
    for (int t = 0; t < 300; ++t) {
      auto x = pick(rng), y = pick(rng);
      auto rx = m.rank(x);
      EXPECT_LE(rx, static_cast<std::size_t>(std::popcount(x)));
      EXPECT_LE(rx, m.rank(x | y));
      EXPECT_LE(m.rank(x | y) + m.rank(x & y), rx + m.rank(y));
    }
  }
}

TEST(Classes, Shape) {
  auto a = class_A(2);
  auto b = class_B(2);
  EXPECT_EQ(a.circuits.size(), 8u);
  EXPECT_EQ(b.circuits.size(), 8u);
  VectorMatroid m = VectorMatroid::from_ln(2, 2);
  EXPECT_TRUE(a.contains(m.mask_of({"A_1", "B_1", "C"})));
  EXPECT_TRUE(a.contains(m.mask_of({"B_1", "B_2", "B_3"})));
  EXPECT_TRUE(b.contains(m.mask_of({"B_1", "B_2", "B_3", "C"})));
  EXPECT_FALSE(b.contains(m.mask_of({"B_1", "B_2", "B_3"})));
  EXPECT_TRUE(a.contains(m.mask_of({"A_2", "A_3", "B_1"})));
  EXPECT_EQ(class_A(6).circuits.size(), 16u);
}

TEST(Classes, VerifyN2) {
  auto r = verify_classes(2, {2, 3, 5, 7});
  ASSERT_EQ(r.size(), 4u);
  EXPECT_TRUE(r[0].divides);
  EXPECT_TRUE(r[0].class_A_ok);
  EXPECT_FALSE(r[0].class_B_ok);
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_FALSE(r[i].divides);
    EXPECT_TRUE(r[i].class_B_ok);
    EXPECT_FALSE(r[i].class_A_ok);
  }
  for (const auto& c : r) {
    EXPECT_TRUE(c.expected_ok());
    EXPECT_EQ(c.rank, 3u);
  }
}

TEST(Classes, VerifyN6) {
  for (const auto& c : verify_classes(6, {2, 3, 5, 7})) {
    EXPECT_TRUE(c.expected_ok()) << "p=" << c.prime;
    EXPECT_EQ(c.divides, c.prime == 2 || c.prime == 3);
    EXPECT_EQ(c.rank, 7u);
  }
}

TEST(ClassPrimes, Selection) {
  EXPECT_EQ(class_primes(2, true), (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(class_primes(6, true), (std::vector<std::uint64_t>{2, 3}));
  auto nd = class_primes(2, false);
  ASSERT_FALSE(nd.empty());
  EXPECT_EQ(nd.front(), 3u);
  for (auto p : nd) EXPECT_NE(2 % p, 0u);
}

TEST(ClassRankOracle, DependentAndIndependent) {
  ClassRankOracle div(2, class_primes(2, true));
  VectorMatroid m = VectorMatroid::from_ln(2, 2);
  auto b = m.mask_of({"B_1", "B_2", "B_3"});
  EXPECT_TRUE(div.dependent_in_all(b));
  EXPECT_EQ(div.max_rank(b), 2u);
  EXPECT_TRUE(div.independent_in_all(m.mask_of({"A_1"})));
  ClassRankOracle nondiv(2, class_primes(2, false));
  EXPECT_TRUE(nondiv.independent_in_all(b));
  EXPECT_THROW(ClassRankOracle(2, {}), std::invalid_argument);
}
