#include <gtest/gtest.h>

#include <set>

#include "nullseq/nss_builder.hpp"
#include "nullseq/quotient_search.hpp"
#include "support.hpp"

using namespace nullseq;

namespace {

QuotientSequencing ex32() { return validate_quotient({0, 1, 0, 0, 1}, TypeVector{{3, 2}}); }
QuotientSequencing ex52() { return validate_quotient({0, 0, 1, 0, 0, 0, 1}, TypeVector{{5, 2}}); }

std::set<std::pair<unsigned, unsigned>> windows(const FactorList& fl) {
  std::set<std::pair<unsigned, unsigned>> out;
  for (const auto& f : fl.factors)
    if (f.kind == FactorKind::window) out.emplace(f.i, f.j);
  return out;
}

std::set<std::tuple<int, unsigned, unsigned>> pairs(const FactorList& fl) {
  std::set<std::tuple<int, unsigned, unsigned>> out;
  for (const auto& f : fl.factors) out.emplace(static_cast<int>(f.kind), f.i, f.j);
  return out;
}

}  // namespace

TEST(BuildP, ExampleThreeTwo) {
  const auto fl = build_p(ex32());
  EXPECT_EQ(fl.degree(), 6u);
  // Multiplication-loop order: pairs (1,3), (1,4), (2,5) then (3,4).
  EXPECT_EQ(fl.to_string(), "(x3-x1)(x4-x1)(x5-x2)(x2+x3+x4+x5)(x4-x3)(x3+x4)");
  EXPECT_EQ(windows(fl), (std::set<std::pair<unsigned, unsigned>>{{1, 5}, {2, 4}}));
}

TEST(BuildP, PrimeCaseThree) {
  const auto fl = build_p(validate_quotient({0, 0, 0}, TypeVector{{3}}));
  EXPECT_EQ(fl.degree(), 5u);
  EXPECT_EQ(windows(fl), (std::set<std::pair<unsigned, unsigned>>{{0, 2}, {1, 3}}));
}

TEST(BuildP, ExampleFiveTwo) { EXPECT_EQ(build_p(ex52()).degree(), 17u); }

TEST(BuildP, PrimeCaseDegrees) {
  EXPECT_EQ(build_p(validate_quotient(std::vector<unsigned>(11, 0), TypeVector{{11}})).degree(), 109u);
  EXPECT_EQ(build_p(validate_quotient(std::vector<unsigned>(12, 0), TypeVector{{12}})).degree(), 131u);
  EXPECT_EQ(build_p(validate_quotient({0, 0, 0, 0, 0, 1, 0, 0, 0, 0}, TypeVector{{9, 1}})).degree(), 52u);
}

TEST(BuildP, PrimeCaseIsAllPairs) {
  // With t = 1 every difference pair and every non-adjacent window appears.
  for (unsigned k = 2; k <= 9; ++k) {
    const auto fl = build_p(validate_quotient(std::vector<unsigned>(k, 0), TypeVector{{k}}));
    EXPECT_EQ(fl.degree(), k * (k - 1) / 2 + (k + 1) * k / 2 - k - 1);
  }
}

TEST(BuildP, FactorsAreWellFormed) {
  for (std::uint64_t t = 1; t <= 4; ++t)
    for (const auto& e : enumerate_types(6, t))
      for (const auto& a : testsupport::arrangements(e.type.counts)) {
        const auto qs = validate_quotient(a, e.type);
        for (const auto& f : build_p(qs).factors) {
          ASSERT_LT(f.i, f.j);
          if (f.kind == FactorKind::difference) {
            EXPECT_EQ(qs.at(f.i), qs.at(f.j));
          } else {
            EXPECT_EQ(qs.b[f.i], qs.b[f.j]);
            EXPECT_GT(f.j, f.i + 1);
            EXPECT_FALSE(f.i == 0 && f.j == 6);
            EXPECT_EQ(f.vars.size(), f.j - f.i);
          }
        }
      }
}

TEST(BuildQ, PrimeCaseFour) {
  const auto qs = validate_quotient({0, 0, 0, 0}, TypeVector{{4}});
  EXPECT_EQ(windows(build_p(qs)),
            (std::set<std::pair<unsigned, unsigned>>{{0, 2}, {1, 3}, {2, 4}, {0, 3}, {1, 4}}));
  EXPECT_EQ(windows(build_q(qs)), (std::set<std::pair<unsigned, unsigned>>{{0, 3}, {1, 4}}));
}

TEST(BuildQ, ExampleThreeTwo) {
  EXPECT_EQ(windows(build_q(ex32())), (std::set<std::pair<unsigned, unsigned>>{{1, 5}}));
}

TEST(BuildQ, TwoElementPrimeCase) {
  EXPECT_EQ(build_q(validate_quotient({0, 0}, TypeVector{{2}})).to_string(), "(x2-x1)");
}

TEST(BuildQ, SubsetOfP) {
  for (std::uint64_t t = 1; t <= 3; ++t)
    for (const auto& e : enumerate_types(6, t))
      for (const auto& a : testsupport::arrangements(e.type.counts)) {
        const auto qs = validate_quotient(a, e.type);
        const auto p = pairs(build_p(qs)), q = pairs(build_q(qs));
        EXPECT_TRUE(std::includes(p.begin(), p.end(), q.begin(), q.end()));
        EXPECT_EQ(build_q(qs).degree(), testsupport::definition_degree(a, t, true));
      }
}

TEST(BoundingMonomialTest, Examples) {
  EXPECT_EQ(bounding_monomial(TypeVector{{3, 2}}, ex32()).exponents, (std::vector<unsigned>{2, 1, 2, 2, 1}));
  EXPECT_EQ(bounding_monomial(TypeVector{{3, 2}}, ex32()).total_degree(), 8u);
  EXPECT_EQ(bounding_monomial(TypeVector{{5, 2}}, ex52()).total_degree(), 22u);
  const auto bm = bounding_monomial(TypeVector{{5, 2}}, ex52(), FixedAssignment::of({3, 6}));
  EXPECT_EQ(bm.exponents, (std::vector<unsigned>{3, 3, 0, 3, 3, 0, 0}));
  EXPECT_EQ(bm.total_degree(), 12u);
}

TEST(BoundingMonomialTest, Errors) {
  try {
    bounding_monomial(TypeVector{{4, 1}}, ex32());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::type_mismatch);
  }
  EXPECT_THROW(bounding_monomial(TypeVector{{5, 2}}, ex52(), FixedAssignment::of({3, 4})), Error);
}

TEST(ApplyFixes, ExampleFiveTwo) {
  const auto fl = apply_fixes(build_p(ex52()), FixedAssignment::of({3, 6}));
  EXPECT_EQ(fl.degree(), 12u);
  bool seen = false;
  for (const auto& f : fl.factors) {
    if (f.kind != FactorKind::window || f.i != 1 || f.j != 7) continue;
    seen = true;
    EXPECT_EQ(f.vars, (std::vector<unsigned>{2, 4, 5, 7}));
    EXPECT_EQ(f.dropped_vars, (std::vector<unsigned>{3, 6}));
    EXPECT_TRUE(f.offset_dropped);
  }
  EXPECT_TRUE(seen);
  for (const auto& f : fl.factors)
    for (auto v : f.vars) EXPECT_TRUE(v != 3 && v != 6);
}

TEST(ApplyFixes, EmptyIsIdentity) {
  const auto fl = build_p(ex52());
  const auto same = apply_fixes(fl, {});
  EXPECT_EQ(same.factors, fl.factors);
}

TEST(ApplyFixes, AdjacencyRejected) {
  try {
    apply_fixes(build_p(ex52()), FixedAssignment::of({3, 4}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_fixing);
  }
  EXPECT_THROW(apply_fixes(build_p(ex52()), FixedAssignment::of({8})), Error);
}

TEST(ApplyFixes, NeverGrowsAndKeepsEndpoints) {
  const auto fl = build_p(ex52());
  for (unsigned a = 1; a <= 7; ++a)
    for (unsigned b = a + 2; b <= 7; ++b) {
      const auto red = apply_fixes(fl, FixedAssignment::of({a, b}));
      EXPECT_LE(red.degree(), fl.degree());
      for (const auto& f : red.factors) {
        bool found = false;
        for (const auto& g : fl.factors) found |= g.kind == f.kind && g.i == f.i && g.j == f.j;
        EXPECT_TRUE(found);
      }
    }
}

TEST(ChooseFixes, FiveTwoIsValid) {
  const TypeVector lambda{{5, 2}};
  const auto qs = ex52();
  const auto fl = build_p(qs);
  const auto fixes = choose_fixes(fl, lambda, qs);
  EXPECT_FALSE(fixes.empty());
  for (std::size_t i = 1; i < fixes.positions.size(); ++i)
    EXPECT_GT(fixes.positions[i], fixes.positions[i - 1] + 1);
  const auto red = apply_fixes(fl, fixes);
  EXPECT_LE(red.degree(), bounding_monomial(lambda, qs, fixes).total_degree());
  EXPECT_LT(red.degree(), fl.degree());
  // Each fix removes at least one factor.
  for (std::size_t n = 1; n <= fixes.positions.size(); ++n) {
    const auto prefix = FixedAssignment::of({fixes.positions.begin(), fixes.positions.begin() + n});
    const auto shorter = FixedAssignment::of({fixes.positions.begin(), fixes.positions.begin() + n - 1});
    EXPECT_LT(apply_fixes(fl, prefix).degree(), apply_fixes(fl, shorter).degree());
  }
}

TEST(ChooseFixes, TenZeroAllowsAtMostOne) {
  const TypeVector lambda{{10, 0}};
  const auto qs = validate_quotient(std::vector<unsigned>(10, 0), lambda);
  EXPECT_LE(choose_fixes(build_p(qs), lambda, qs).positions.size(), 1u);
}

TEST(ChooseFixes, ZeroSlackGivesEmpty) {
  // Every quotient sequencing with deg(p_a) equal to the bounding degree.
  unsigned cases = 0;
  for (std::uint64_t t = 2; t <= 3; ++t)
    for (const auto& e : enumerate_types(6, t))
      for (const auto& a : testsupport::arrangements(e.type.counts)) {
        const auto qs = validate_quotient(a, e.type);
        const auto fl = build_p(qs);
        if (fl.degree() != bound_degree(e.type)) continue;
        ++cases;
        EXPECT_TRUE(choose_fixes(fl, e.type, qs).empty()) << e.type.to_string();
      }
  EXPECT_GT(cases, 0u);
}

TEST(Degree, ClosedFormMatchesSmallCases) {
  for (std::uint64_t t = 1; t <= 4; ++t)
    for (const auto& e : enumerate_types(6, t))
      for (const auto& a : testsupport::arrangements(e.type.counts)) {
        const auto qs = validate_quotient(a, e.type);
        EXPECT_EQ(degree(build_p(qs)), closed_form_degree(e.type, qs));
        EXPECT_EQ(degree(build_p(qs)), testsupport::definition_degree(a, t));
        EXPECT_EQ(degree(build_q(qs)), closed_form_degree(e.type, qs, true));
      }
}

TEST(FixedAssignmentTest, ParseAndPrint) {
  EXPECT_EQ(FixedAssignment::parse("6,3").to_string(), "3,6");
  EXPECT_TRUE(FixedAssignment::parse("").empty());
}
