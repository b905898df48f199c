#include <gtest/gtest.h>

#include "applicability_cases.hpp"
#include "nullseq/applicability.hpp"

using namespace nullseq;

namespace {

const CoverageItem* find_item(const ApplicabilityReport& rep, const std::string& source, unsigned item,
                              std::uint64_t t) {
  for (const auto& it : rep.items)
    if (it.source == source && it.item == item && it.t == t) return &it;
  return nullptr;
}

}  // namespace

TEST(Applicability, ThresholdPrimesAreFoundByTrialDivision) {
  EXPECT_EQ(testsupport::half_factorial(11), 19958400);
  EXPECT_EQ(testsupport::prime_above_threshold(11), 19958443);
  EXPECT_FALSE(testsupport::trial_prime(19958401));
  EXPECT_TRUE(is_prime(19958443));
}

TEST(Applicability, TruthTable) {
  const auto cases = testsupport::applicability_cases();
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) {
    SCOPED_TRACE(c.name);
    std::optional<SubsetFacts> facts;
    if (c.subset) facts = SubsetFacts{*c.subset};
    const auto rep = applicability(c.n, c.k, facts);
    EXPECT_EQ(rep.verdict, c.verdict) << to_string(rep.verdict);
    EXPECT_EQ(rep.threshold, testsupport::half_factorial(c.k));
    const auto* it = find_item(rep, c.source, c.item, c.t);
    ASSERT_NE(it, nullptr);
    EXPECT_EQ(it->status, c.status) << to_string(it->status) << " " << it->caveat;
    EXPECT_EQ(it->m * it->t, c.n);
  }
}

TEST(Applicability, ConditionalRowsCarryCaveats) {
  const mpz_class n = 2 * testsupport::prime_above_threshold(14);
  const auto rep = applicability(n, 14);
  const auto* it = find_item(rep, "threshold", 4, 2);
  ASSERT_NE(it, nullptr);
  EXPECT_EQ(it->status, Coverage::conditional);
  EXPECT_NE(it->caveat.find("subgroup of order m"), std::string::npos);
  const auto rep15 = applicability(2 * testsupport::prime_above_threshold(15), 15);
  const auto* it15 = find_item(rep15, "threshold", 5, 2);
  ASSERT_NE(it15, nullptr);
  EXPECT_NE(it15->caveat.find("0, 1, 2 or 15"), std::string::npos);
  for (const auto& item : rep15.items) EXPECT_EQ(item.caveat.find(';'), std::string::npos);
}

TEST(Applicability, UnsplitCofactorGivesUnknown) {
  const mpz_class p("1000000007"), q("998244353");
  const mpz_class n = 3 * p * q;
  FactorizeOptions weak;
  weak.rho_iterations = 1;
  const auto rep = applicability(n, 11, std::nullopt, weak);
  EXPECT_EQ(rep.verdict, Verdict::unknown);
  const auto* it = find_item(rep, "threshold", 1, 3);
  ASSERT_NE(it, nullptr);
  EXPECT_EQ(it->status, Coverage::unknown);
  // With the default budget both primes are found and exceed 11!/2.
  EXPECT_EQ(applicability(n, 11).verdict, Verdict::unconditional);
}

TEST(Applicability, SmallKNeedsNoSplit) {
  for (unsigned k = 1; k <= 9; ++k) EXPECT_EQ(applicability(1000, k).verdict, Verdict::unconditional);
  EXPECT_EQ(applicability(11, 10).verdict, Verdict::unconditional);
  const auto rep = applicability(1000, 10);
  EXPECT_EQ(rep.verdict, Verdict::not_covered);
}

TEST(Applicability, KnownResultsForSmallN) {
  EXPECT_EQ(applicability(21, 15).verdict, Verdict::unconditional);
  EXPECT_EQ(applicability(23, 15).verdict, Verdict::conditional);
  EXPECT_EQ(applicability(16, 15).verdict, Verdict::unconditional);  // k = n - 1
  std::vector<mpz_class> s;
  for (unsigned long x = 1; x <= 14; ++x) s.push_back(x);
  EXPECT_EQ(applicability(40, 38).verdict, Verdict::conditional);  // k = n - 2 needs a nonzero sum
  // 1 + ... + 14 = 105 = 9 mod 16.
  EXPECT_EQ(applicability(16, 14, SubsetFacts{s}).verdict, Verdict::unconditional);
}

TEST(Applicability, Errors) {
  EXPECT_THROW(applicability(1, 1), Error);
  EXPECT_THROW(applicability(10, 0), Error);
  EXPECT_THROW(applicability(10, 10), Error);
  EXPECT_THROW(applicability(10, 2, SubsetFacts{{1}}), Error);
  EXPECT_THROW(applicability(10, 2, SubsetFacts{{1, 1}}), Error);
  EXPECT_THROW(applicability(10, 2, SubsetFacts{{0, 1}}), Error);
  EXPECT_THROW(applicability(10, 2, SubsetFacts{{1, 10}}), Error);
}

TEST(Applicability, StringsRoundTrip) {
  for (auto v : {Verdict::unconditional, Verdict::conditional, Verdict::not_covered, Verdict::unknown})
    EXPECT_EQ(parse_verdict(to_string(v)), v);
  for (auto c : {Coverage::covered, Coverage::conditional, Coverage::rejected, Coverage::unknown})
    EXPECT_EQ(parse_coverage(to_string(c)), c);
  EXPECT_EQ(to_string(Verdict::not_covered), "not-covered");
  EXPECT_THROW(parse_verdict("maybe"), Error);
}
