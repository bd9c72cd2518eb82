#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "lrineq/netcode.hpp"

using namespace lrineq;

namespace {

using Names = std::vector<std::string>;

Demand demand(const IndexCodingNetwork& n, const std::string& want, const Names& given) {
  Demand d{n.index_of(want), {}};
  for (const auto& g : given) d.given.push_back(n.index_of(g));
  std::sort(d.given.begin(), d.given.end());
  return d;
}

// Fixpoint of the decode-one-step rule over name sets.
std::set<std::string> closure_fixpoint(const IndexCodingNetwork& n, std::set<std::string> z) {
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& d : n.demands()) {
      bool inside = std::all_of(d.given.begin(), d.given.end(),
                                [&](std::size_t g) { return z.count(n.sources()[g]) > 0; });
      if (inside && z.insert(n.sources()[d.want]).second) grew = true;
    }
  }
  return z;
}

std::size_t r_cl_brute(const IndexCodingNetwork& n) {
  std::size_t best = n.size();
  for (SubsetMask t = 0; t <= n.all_mask(); ++t) {
    auto names = n.names_of(t);
    if (closure_fixpoint(n, {names.begin(), names.end()}).size() == n.size())
      best = std::min<std::size_t>(best, std::popcount(t));
  }
  return best;
}

// x_want lies in the span of the broadcast rows and the side-info coordinates.
bool decodable(const FpMatrix& enc, const Demand& d) {
  const auto& mod = enc.modulus();
  FpMatrix obs = enc;
  std::vector<FpMatrix::Scalar> unit(enc.cols(), 0);
  for (auto g : d.given) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[g] = 1;
    obs.append_row(unit);
  }
  auto base = rank(obs);
  std::fill(unit.begin(), unit.end(), 0);
  unit[d.want] = 1;
  obs.append_row(unit);
  (void)mod;
  return rank(obs) == base;
}

IndexCodingNetwork single_source() { return IndexCodingNetwork({"s"}, {}); }

}  // namespace

TEST(Network, FromCircuitsCounts) {
  auto a = network_A(2);
  EXPECT_EQ(a.size(), 7u);
  EXPECT_EQ(a.demands().size(), 25u);
  EXPECT_TRUE(a.has_demand(demand(a, "C", {"A_1", "A_2", "A_3"})));
  EXPECT_TRUE(a.has_demand(demand(a, "B_1", {"B_2", "B_3"})));
  EXPECT_FALSE(a.has_demand(demand(a, "B_1", {"B_2", "B_3", "C"})));
  auto b = network_B(2);
  EXPECT_EQ(b.demands().size(), 26u);
  EXPECT_TRUE(b.has_demand(demand(b, "B_1", {"B_2", "B_3", "C"})));
}

TEST(Network, SingleCircuit) {
  CircuitSet cs{{"x", "y"}, {0b11}};
  auto n = network_from_circuits(cs);
  EXPECT_EQ(n.demands().size(), 2u);
  EXPECT_TRUE(n.has_demand(demand(n, "x", {"y"})));
  EXPECT_TRUE(n.has_demand(demand(n, "y", {"x"})));
  CircuitSet bad{{"x", "y"}, {0b111}};
  EXPECT_THROW(network_from_circuits(bad), std::invalid_argument);
}

TEST(Network, Validation) {
  EXPECT_THROW(IndexCodingNetwork({}, {}), std::invalid_argument);
  EXPECT_THROW(IndexCodingNetwork({"a", "a"}, {}), std::invalid_argument);
  EXPECT_THROW(IndexCodingNetwork({"a", "b"}, {{0, {0}}}), std::invalid_argument);
  EXPECT_THROW(IndexCodingNetwork({"a", "b"}, {{2, {}}}), std::invalid_argument);
  auto dup = IndexCodingNetwork({"a", "b"}, {{0, {1}}, {0, {1, 1}}});
  EXPECT_EQ(dup.demands().size(), 1u);
}

TEST(Closure, Examples) {
  auto a = network_A(2);
  EXPECT_EQ(closure(a, SubsetMask{0}), 0u);
  auto z = a.mask_of_names({"A_1", "A_2", "A_3"});
  EXPECT_EQ(closure(a, z), a.all_mask());
  auto pair = a.mask_of_names({"A_1", "A_2"});
  auto with_b3 = pair | a.mask_of_names({"B_3"});
  EXPECT_EQ(closure(a, pair), with_b3);
  EXPECT_EQ(iterated_closure(a, pair), with_b3);
  EXPECT_EQ(r_cl(a), 3u);
  EXPECT_EQ(r_cl(a), r_cl_brute(a));
  EXPECT_EQ(r_cl(network_B(2)), 3u);
  EXPECT_EQ(r_cl(network_B(2)), r_cl_brute(network_B(2)));
  EXPECT_THROW(closure(a, Names{"Q"}), std::invalid_argument);
}

TEST(Property, ClosureMonotoneInflationary) {
  std::mt19937_64 rng(3);
  for (const auto& n : {network_A(2), network_B(2), network_A(3)}) {
    std::uniform_int_distribution<SubsetMask> pick(0, n.all_mask());
    for (int t = 0; t < 500; ++t) {
      auto z = pick(rng), extra = pick(rng);
      auto cz = closure(n, z);
      EXPECT_EQ(cz & z, z);
      EXPECT_EQ(closure(n, z | extra) & cz, cz);
      auto names = n.names_of(z);
      EXPECT_EQ(iterated_closure(n, z), n.mask_of_names([&] {
        auto s = closure_fixpoint(n, {names.begin(), names.end()});
        return Names(s.begin(), s.end());
      }()));
    }
  }
}

TEST(LexProduct, Counts) {
  auto a = network_A(2);
  auto p = lex_product(a, a);
  EXPECT_EQ(p.size(), 49u);
  EXPECT_EQ(p.demands().size(), 625u);
}

TEST(LexProduct, SideInfoFormulaSpotChecks) {
  auto a = network_A(2), b = network_B(2);
  auto p = lex_product(a, b);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pa(0, a.demands().size() - 1), pb(0, b.demands().size() - 1);
  for (int t = 0; t < 100; ++t) {
    const auto& d1 = a.demands()[pa(rng)];
    const auto& d2 = b.demands()[pb(rng)];
    const auto& s1 = a.sources()[d1.want];
    Names given;
    for (auto y : d1.given)
      for (const auto& s2 : b.sources()) given.push_back(pair_name(a.sources()[y], s2));
    for (auto y : d2.given) given.push_back(pair_name(s1, b.sources()[y]));
    EXPECT_TRUE(p.has_demand(demand(p, pair_name(s1, b.sources()[d2.want]), given)));
  }
}

TEST(LexProduct, SingleSourceIdentity) {
  auto a = network_A(2);
  auto right = lex_product(a, single_source());
  auto left = lex_product(single_source(), a);
  EXPECT_EQ(right.size(), a.size());
  EXPECT_EQ(left.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(right.sources()[i], pair_name(a.sources()[i], "s"));
    EXPECT_EQ(left.sources()[i], pair_name("s", a.sources()[i]));
  }
  EXPECT_TRUE(right.demands().empty());
  EXPECT_EQ(lex_power(a, 1).demands().size(), a.demands().size());
}

TEST(Code, FromRepresentationA2) {
  auto net = network_A(2);
  auto code = solution_from_representation(VectorMatroid::from_ln(2, 2), net);
  EXPECT_EQ(code.block_length(), 1u);
  EXPECT_EQ(code.broadcast_length(), 4u);
  for (const auto& d : net.demands()) EXPECT_TRUE(decodable(code.encoder(), d));
  auto v = simulate(code, net);
  EXPECT_TRUE(v.exhaustive);
  EXPECT_EQ(v.tuples_checked, 128u);
  EXPECT_TRUE(v.passed());
}

TEST(Code, FromRepresentationB2) {
  auto net = network_B(2);
  auto code = solution_from_representation(VectorMatroid::from_ln(2, 3), net);
  EXPECT_EQ(code.broadcast_length(), 4u);
  auto v = simulate(code, net);
  EXPECT_EQ(v.tuples_checked, 2187u);
  EXPECT_TRUE(v.passed());
}

TEST(Code, WrongCharacteristicRejected) {
  EXPECT_THROW(solution_from_representation(VectorMatroid::from_ln(2, 3), network_A(2)), std::invalid_argument);
  EXPECT_THROW(solution_from_representation(VectorMatroid::from_ln(2, 2), network_B(2)), std::invalid_argument);
}

TEST(Code, FreeMatroidZeroDemands) {
  PrimeModulus f(3);
  VectorMatroid m({"x", "y"}, FpMatrix::identity(f, 2));
  IndexCodingNetwork net({"x", "y"}, {});
  auto code = solution_from_representation(m, net);
  EXPECT_EQ(code.broadcast_length(), 0u);
  auto v = simulate(code, net);
  EXPECT_TRUE(v.passed());
}

TEST(Code, ExtendWithMessage) {
  auto nb = network_B(2), na = network_A(2);
  auto base = solution_from_representation(VectorMatroid::from_ln(2, 3), nb);
  auto ext = extend_with_message(base, nb, "C");
  EXPECT_EQ(ext.broadcast_length(), 5u);
  EXPECT_TRUE(simulate(ext, nb).passed());
  auto for_a = retarget(ext, na);
  auto v = simulate(for_a, na);
  EXPECT_EQ(v.tuples_checked, 2187u);
  EXPECT_TRUE(v.passed());
  auto twice = extend_with_message(ext, nb, "C");
  EXPECT_EQ(twice.broadcast_length(), 6u);
  EXPECT_TRUE(simulate(retarget(twice, na), na).passed());
  EXPECT_THROW(extend_with_message(base, 9), std::invalid_argument);
}

TEST(Code, TruncatedFails) {
  auto net = network_A(2);
  auto code = solution_from_representation(VectorMatroid::from_ln(2, 2), net);
  auto cut = truncate(code, net, 3);
  auto v = simulate(cut, net);
  EXPECT_FALSE(v.passed());
  ASSERT_TRUE(v.witness.has_value());
  auto w = *v.witness;
  EXPECT_NE(w.decoded[0], w.message[net.demands()[w.demand].want]);
}

TEST(Code, RepetitionAndIdentityCompose) {
  PrimeModulus f(5);
  auto one = single_source();
  LinearIndexCode id(1, 1, FpMatrix::identity(f, 1), {});
  auto c = compose_lex(id, id);
  EXPECT_EQ(c.broadcast_length(), 1u);
  EXPECT_EQ(c.encoder()(0, 0), 1u);
  auto rep = repetition(id, 3);
  EXPECT_EQ(rep.block_length(), 3u);
  EXPECT_EQ(to_text(rep.encoder()), to_text(FpMatrix::identity(f, 3)));
  (void)one;
}

TEST(Code, ComposeMismatches) {
  LinearIndexCode a(1, 1, FpMatrix::identity(PrimeModulus(2), 1), {});
  LinearIndexCode b(1, 1, FpMatrix::identity(PrimeModulus(3), 1), {});
  EXPECT_THROW(compose_lex(a, b), std::invalid_argument);
  LinearIndexCode wide(1, 1, FpMatrix(PrimeModulus(2), 2, 1), {});
  EXPECT_THROW(compose_lex(a, wide), std::invalid_argument);
}

TEST(Code, ComposeDistinctNetworks) {
  auto na = network_A(2);
  auto ca = solution_from_representation(VectorMatroid::from_ln(2, 2), na);
  CircuitSet pair{{"x", "y"}, {0b11}};
  auto small = network_from_circuits(pair);
  LinearIndexCode cs(1, 2, FpMatrix::from_rows(PrimeModulus(2), 2, {{1, 1}}), {});
  auto cs_full = retarget(cs, small);
  ASSERT_TRUE(simulate(cs_full, small).passed());
  auto prod = lex_product(small, na);
  auto code = compose_lex(repetition(cs_full, ca.broadcast_length()), ca);
  EXPECT_EQ(code.broadcast_length(), 4u);
  auto v = simulate(code, prod);
  EXPECT_TRUE(v.exhaustive);
  EXPECT_TRUE(v.passed());
}

TEST(Code, PowerCode) {
  auto net = network_A(2);
  auto code = solution_from_representation(VectorMatroid::from_ln(2, 2), net);
  auto p1 = power_code(code, 1);
  EXPECT_EQ(to_text(p1.encoder()), to_text(code.encoder()));
  auto p2 = power_code(code, 2);
  EXPECT_EQ(p2.block_length(), 1u);
  EXPECT_EQ(p2.broadcast_length(), 16u);
  auto sq = lex_power(net, 2);
  SimulationOptions opt;
  opt.trials = 2000;
  opt.seed = 17;
  auto v = simulate(p2, sq, opt);
  EXPECT_FALSE(v.exhaustive);
  EXPECT_EQ(v.tuples_checked, 2000u);
  EXPECT_TRUE(v.passed());
  for (std::size_t i = 0; i < sq.demands().size(); i += 37) EXPECT_TRUE(decodable(p2.encoder(), sq.demands()[i]));
}

TEST(Simulate, VacuousAndShape) {
  LinearIndexCode id(1, 1, FpMatrix::identity(PrimeModulus(2), 1), {});
  EXPECT_TRUE(simulate(id, single_source()).passed());
  EXPECT_TRUE(simulate(id, network_A(2)).shape_mismatch);
  auto net = network_A(2);
  LinearIndexCode bare(1, 7, FpMatrix(PrimeModulus(2), 4, 7), {});
  auto v = simulate(bare, net);
  EXPECT_EQ(v.missing_decoders.size(), 25u);
  EXPECT_FALSE(v.passed());
}

TEST(Simulate, WorkerCountInvariant) {
  auto net = network_A(2);
  auto cut = truncate(solution_from_representation(VectorMatroid::from_ln(2, 2), net), net, 2);
  SimulationOptions one, three;
  three.workers = 3;
  auto a = simulate(cut, net, one), b = simulate(cut, net, three);
  EXPECT_EQ(a.failing_tuples, b.failing_tuples);
  EXPECT_EQ(a.witness->tuple, b.witness->tuple);
}

TEST(EntropyPoint, Values) {
  auto net = network_A(2);
  auto code = solution_from_representation(VectorMatroid::from_ln(2, 2), net);
  auto z = entropy_point(code);
  EXPECT_EQ(z.size(), 128u);
  EXPECT_EQ(z[0], 4);
  EXPECT_EQ(z[net.all_mask()], 7);
  for (SubsetMask y = 0; y < 128; ++y) EXPECT_LE(z[y], 7);
}

TEST(Capacity, Report) {
  auto r = capacity_report(2, 1);
  EXPECT_EQ(r.at("case_i.lower"), make_rational(4, 5));
  EXPECT_EQ(r.at("case_ii.lower"), make_rational(4, 5));
  EXPECT_EQ(r.at("case_i.upper"), make_rational(204, 205));
  EXPECT_EQ(r.at("case_ii.upper"), make_rational(92, 93));
  EXPECT_EQ(r.at("rate_bound"), make_rational(1, 4));
  EXPECT_EQ(r.at("case_i.lp_bound"), make_rational(205, 51));
  EXPECT_EQ(r.at("case_ii.lp_bound"), make_rational(93, 23));
  auto r2 = capacity_report(3, 2);
  EXPECT_EQ(r2.at("case_i.lower"), make_rational(25, 36));
  EXPECT_EQ(r2.at("block_length"), 25);
  EXPECT_THROW(r.at("nope"), std::out_of_range);
  EXPECT_THROW(capacity_report(2, 0), std::invalid_argument);
}
