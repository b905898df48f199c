#pragma once

// Hand-built truth table for the applicability checker. The large primes are
// found here by trial division just above k!/2, independently of the
// library's factoring code.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "nullseq/applicability.hpp"

namespace testsupport {

inline mpz_class half_factorial(unsigned k) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f / 2;
}

inline bool trial_prime(const mpz_class& n) {
  if (n < 2) return false;
  for (mpz_class d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Smallest prime strictly above k!/2.
inline mpz_class prime_above_threshold(unsigned k) {
  mpz_class p = half_factorial(k) + 1;
  while (!trial_prime(p)) ++p;
  return p;
}

struct ApplicabilityCase {
  std::string name;
  mpz_class n;
  unsigned k = 0;
  std::optional<std::vector<mpz_class>> subset;
  nullseq::Verdict verdict;
  // One item that must be present with the given status.
  std::string source;
  unsigned item = 0;
  std::uint64_t t = 1;
  nullseq::Coverage status;
};

/// Subset of size `inside + outside` with `inside` multiples of t (the
/// subgroup of order n/t) and `outside` non-multiples, all small.
inline std::vector<mpz_class> mixed_subset(std::uint64_t t, unsigned inside, unsigned outside) {
  std::vector<mpz_class> out;
  for (unsigned i = 1; i <= inside; ++i) out.push_back(mpz_class(static_cast<unsigned long>(t * i)));
  for (unsigned long x = 1; outside > 0; ++x)
    if (x % t != 0) {
      out.push_back(x);
      --outside;
    }
  return out;
}

inline std::vector<ApplicabilityCase> applicability_cases() {
  using nullseq::Coverage;
  using nullseq::Verdict;
  const mpz_class p10 = prime_above_threshold(10), p11 = prime_above_threshold(11),
                  p12 = prime_above_threshold(12), p13 = prime_above_threshold(13),
                  p14 = prime_above_threshold(14), p15 = prime_above_threshold(15);
  // 11!/2 + 1 = 149 * 133949: composite with factors far below the threshold.
  const mpz_class composite11 = half_factorial(11) + 1;
  std::vector<mpz_class> zero_sum24;
  for (unsigned long i = 1; i <= 6; ++i) {
    zero_sum24.push_back(i);
    zero_sum24.push_back(24 - i);
  }

  return {
      {"small k is always covered", 30, 9, std::nullopt, Verdict::unconditional, "known", 1, 1, Coverage::covered},
      {"k=10 prime n", 11, 10, std::nullopt, Verdict::unconditional, "known", 2, 1, Coverage::covered},
      {"k=10 split with t=2", 2 * p10, 10, std::nullopt, Verdict::unconditional, "threshold", 1, 2,
       Coverage::covered},
      {"k=10 cofactor 7 is outside the table", 7 * p10, 10, std::nullopt, Verdict::not_covered, "threshold", 1, 1,
       Coverage::rejected},
      {"k=11 split with t=3", 3 * p11, 11, std::nullopt, Verdict::unconditional, "threshold", 1, 3,
       Coverage::covered},
      {"k=11 split with t=5", 5 * p11, 11, std::nullopt, Verdict::unconditional, "prime-order", 1, 5,
       Coverage::covered},
      {"m with a prime factor below k!/2", 3 * composite11, 11, std::nullopt, Verdict::not_covered, "threshold", 1,
       3, Coverage::rejected},
      {"k=12 split with t=4", 4 * p12, 12, std::nullopt, Verdict::unconditional, "threshold", 2, 4,
       Coverage::covered},
      {"k=12 with t=5 is outside the table", 5 * p12, 12, std::nullopt, Verdict::not_covered, "threshold", 0, 5,
       Coverage::rejected},
      {"k=12 zero-sum condition for n=24", 24, 12, std::nullopt, Verdict::conditional, "known", 7, 1,
       Coverage::conditional},
      {"k=12 zero-sum subset of Z_24", 24, 12, zero_sum24, Verdict::unconditional, "known", 7, 1,
       Coverage::covered},
      {"k=13 caveat without a subset", 3 * p13, 13, std::nullopt, Verdict::conditional, "threshold", 3, 3,
       Coverage::conditional},
      {"k=13 subset leaves the subgroup", 2 * p13, 13, mixed_subset(2, 12, 1), Verdict::unconditional,
       "threshold", 3, 2, Coverage::covered},
      {"k=13 with t=5 is outside the table", 5 * p13, 13, std::nullopt, Verdict::not_covered, "threshold", 0, 5,
       Coverage::rejected},
      {"k=14 caveat without a subset", 2 * p14, 14, std::nullopt, Verdict::conditional, "threshold", 4, 2,
       Coverage::conditional},
      {"k=14 subset inside the subgroup", 2 * p14, 14, mixed_subset(2, 14, 0), Verdict::not_covered, "threshold",
       4, 2, Coverage::rejected},
      {"k=14 subset with one element outside", 2 * p14, 14, mixed_subset(2, 13, 1), Verdict::unconditional,
       "threshold", 4, 2, Coverage::covered},
      {"k=15 caveat without a subset", 2 * p15, 15, std::nullopt, Verdict::conditional, "threshold", 5, 2,
       Coverage::conditional},
      {"k=15 exactly two inside the subgroup", 2 * p15, 15, mixed_subset(2, 2, 13), Verdict::not_covered,
       "threshold", 5, 2, Coverage::rejected},
      {"k=15 three inside the subgroup", 2 * p15, 15, mixed_subset(2, 3, 12), Verdict::unconditional, "threshold",
       5, 2, Coverage::covered},
  };
}

}  // namespace testsupport
