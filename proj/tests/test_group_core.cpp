#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nullseq/group_core.hpp"
#include "support.hpp"

using namespace nullseq;

namespace {

std::vector<std::uint64_t> firsts(const std::vector<Element>& v) {
  std::vector<std::uint64_t> out;
  for (const auto& e : v) out.push_back(e.first);
  return out;
}

}  // namespace

TEST(PartialSums, EmptyOrdering) {
  const auto g = GroupConfig::cyclic(7);
  const auto ps = partial_sums({}, g);
  ASSERT_EQ(ps.sums.size(), 1u);
  EXPECT_TRUE(ps.sums[0].is_zero());
}

TEST(PartialSums, CyclicSeven) {
  const auto g = GroupConfig::cyclic(7);
  EXPECT_EQ(firsts(partial_sums({{1, 0}, {2, 0}, {3, 0}}, g).sums), (std::vector<std::uint64_t>{0, 1, 3, 6}));
}

TEST(PartialSums, ProductGroup) {
  const auto g = GroupConfig::prime_product(5, 2);
  const auto ps = partial_sums({{1, 0}, {1, 1}}, g);
  EXPECT_EQ(ps.sums, (std::vector<Element>{{0, 0}, {1, 0}, {2, 1}}));
}

TEST(PartialSums, OutOfRange) {
  const auto g = GroupConfig::prime_product(5, 2);
  try {
    partial_sums({{5, 0}}, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
}

TEST(PartialSums, DifferencesReconstructOrdering) {
  const auto g = GroupConfig::prime_product(7, 3);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Ordering ord;
    for (int i = 0; i < 6; ++i) ord.push_back({rng() % 7, rng() % 3});
    const auto ys = partial_sums(ord, g).sums;
    for (std::size_t i = 1; i < ys.size(); ++i) EXPECT_EQ(add(g, ys[i - 1], ord[i - 1]), ys[i]);
  }
}

TEST(GroupConfigTest, Validation) {
  EXPECT_THROW(GroupConfig::prime_product(4, 3), Error);
  EXPECT_THROW(GroupConfig::prime_product(3, 3), Error);
  EXPECT_EQ(GroupConfig::prime_product(11, 2).order(), 22u);
  EXPECT_THROW(GroupConfig::symbolic(2).first_modulus(), Error);
}

TEST(SubsetSpecTest, RejectsBadSubsets) {
  const auto g = GroupConfig::cyclic(5);
  EXPECT_THROW(SubsetSpec::cyclic(g, {0, 1}), Error);
  EXPECT_THROW(SubsetSpec::cyclic(g, {1, 1}), Error);
  EXPECT_THROW(SubsetSpec::cyclic(g, {5}), Error);
  EXPECT_EQ(SubsetSpec::cyclic(g, {1, 2}).size(), 2u);
}

TEST(Classify, Examples) {
  const auto g5 = GroupConfig::cyclic(5);
  EXPECT_EQ(classify_sequencing(SubsetSpec::cyclic(g5, {1, 2}), {{1, 0}, {2, 0}}, g5), Sequencing::linear);
  EXPECT_EQ(classify_sequencing(SubsetSpec::cyclic(g5, {1, 4}), {{1, 0}, {4, 0}}, g5), Sequencing::rotational);
}

TEST(Classify, ZFourHandEnumeration) {
  // S = {1,2,3} in Z_4 sums to 2, so no ordering can be rotational.
  const auto g = GroupConfig::cyclic(4);
  const auto s = SubsetSpec::cyclic(g, {1, 3, 2});
  EXPECT_EQ(classify_sequencing(s, {{1, 0}, {3, 0}, {2, 0}}, g), Sequencing::none);   // 0,1,0,2
  EXPECT_EQ(classify_sequencing(s, {{1, 0}, {2, 0}, {3, 0}}, g), Sequencing::linear); // 0,1,3,2
  std::vector<std::uint64_t> perm{1, 2, 3};
  do {
    Ordering ord;
    for (auto x : perm) ord.push_back({x, 0});
    const auto expected = testsupport::classify_mod(perm, 4);
    const auto got = classify_sequencing(s, ord, g);
    EXPECT_EQ(static_cast<int>(got), static_cast<int>(expected));
    EXPECT_NE(got, Sequencing::rotational);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Classify, NotAnArrangement) {
  const auto g = GroupConfig::cyclic(5);
  EXPECT_THROW(classify_sequencing(SubsetSpec::cyclic(g, {1, 2}), {{1, 0}, {3, 0}}, g), Error);
}

TEST(Classify, NeverBothLinearAndRotational) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const std::uint64_t n = 3 + rng() % 8;
    const unsigned k = 1 + static_cast<unsigned>(rng() % std::min<std::uint64_t>(n - 1, 5));
    std::vector<std::uint64_t> pool(n - 1);
    std::iota(pool.begin(), pool.end(), 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::uint64_t> s(pool.begin(), pool.begin() + k);
    std::sort(s.begin(), s.end());
    const auto g = GroupConfig::cyclic(n);
    const auto subset = SubsetSpec::cyclic(g, s);
    std::set<Sequencing> seen;
    do {
      Ordering ord;
      for (auto x : s) ord.push_back({x, 0});
      seen.insert(classify_sequencing(subset, ord, g));
    } while (std::next_permutation(s.begin(), s.end()));
    EXPECT_FALSE(seen.count(Sequencing::linear) && seen.count(Sequencing::rotational));
  }
}

TEST(TypeOf, Examples) {
  const auto g = GroupConfig::symbolic(2);
  const auto s = SubsetSpec::make(g, {{1, 0}, {2, 0}, {3, 0}, {1, 1}, {2, 1}});
  EXPECT_EQ(type_of(s, 2).counts, (std::vector<unsigned>{3, 2}));

  std::vector<Element> all0;
  for (std::uint64_t i = 1; i <= 10; ++i) all0.push_back({i, 0});
  EXPECT_EQ(type_of(SubsetSpec::make(g, all0), 2).counts, (std::vector<unsigned>{10, 0}));

  const auto g3 = GroupConfig::symbolic(3);
  EXPECT_EQ(type_of(SubsetSpec::make(g3, {{1, 1}, {2, 1}}), 3).counts, (std::vector<unsigned>{0, 2, 0}));
}

TEST(TypeOf, InvariantUnderPermutationAndFirstCoordinates) {
  const auto g = GroupConfig::prime_product(11, 3);
  std::vector<Element> e{{1, 0}, {2, 1}, {3, 1}, {4, 2}, {0, 1}};
  const auto base = type_of(SubsetSpec::make(g, e), 3);
  std::reverse(e.begin(), e.end());
  EXPECT_EQ(type_of(SubsetSpec::make(g, e), 3), base);
  for (auto& x : e) x.first = (x.first + 5) % 11;
  EXPECT_EQ(type_of(SubsetSpec::make(g, e), 3), base);
}

TEST(EnumerateTypes, Examples) {
  auto names = [](unsigned k, std::uint64_t t) {
    std::vector<std::string> out;
    for (const auto& e : enumerate_types(k, t)) out.push_back(e.type.to_string());
    return out;
  };
  EXPECT_EQ(names(2, 2), (std::vector<std::string>{"2,0", "1,1", "0,2"}));
  EXPECT_EQ(names(3, 1), (std::vector<std::string>{"3"}));
  const auto ten = names(10, 2);
  ASSERT_EQ(ten.size(), 11u);
  EXPECT_EQ(ten.front(), "10,0");
  EXPECT_EQ(ten.back(), "0,10");
}

TEST(EnumerateTypes, CountIsStarsAndBars) {
  for (unsigned k = 1; k <= 8; ++k)
    for (std::uint64_t t = 1; t <= 5; ++t)
      EXPECT_EQ(enumerate_types(k, t).size(), testsupport::choose(k + t - 1, t - 1)) << k << "," << t;
}

TEST(EnumerateTypes, UnitOrbitRepresentatives) {
  // Z_2 has no nontrivial unit, so every type represents itself.
  for (const auto& e : enumerate_types(6, 2)) EXPECT_TRUE(e.is_representative());
  // Z_5: (1,2,0,0,0) and its image under 2 -> (1,0,2,0,0) share a representative.
  const TypeVector a{{1, 2, 0, 0, 0}}, b{{1, 0, 2, 0, 0}};
  EXPECT_EQ(canonical_type(a), canonical_type(b));
  std::size_t reps = type_representatives(3, 5).size();
  EXPECT_LT(reps, enumerate_types(3, 5).size());
  for (const auto& e : enumerate_types(3, 5)) EXPECT_EQ(canonical_type(e.canonical), e.canonical);
}
