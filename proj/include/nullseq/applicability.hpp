#pragma once

// Which (n, k) pairs the known theorems cover in Z_n. Combines the
// prime-factor threshold theorem (n = m t, every prime factor of m above
// k!/2), its prime-order special case (n = p t) and the classical results
// for small k and small n.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/factorize.hpp"

namespace nullseq {

enum class Coverage { covered, conditional, rejected, unknown };

inline std::string_view to_string(Coverage c) {
  switch (c) {
    case Coverage::covered: return "covered";
    case Coverage::conditional: return "conditional";
    case Coverage::rejected: return "rejected";
    case Coverage::unknown: return "unknown";
  }
  return "unknown";
}

inline Coverage parse_coverage(std::string_view s) {
  for (auto c : {Coverage::covered, Coverage::conditional, Coverage::rejected, Coverage::unknown})
    if (to_string(c) == s) return c;
  throw Error(ErrorKind::invalid_input, "bad coverage '" + std::string(s) + "'");
}

enum class Verdict { unconditional, conditional, not_covered, unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::unconditional: return "unconditional";
    case Verdict::conditional: return "conditional";
    case Verdict::not_covered: return "not-covered";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

inline Verdict parse_verdict(std::string_view s) {
  for (auto v : {Verdict::unconditional, Verdict::conditional, Verdict::not_covered, Verdict::unknown})
    if (to_string(v) == s) return v;
  throw Error(ErrorKind::invalid_input, "bad verdict '" + std::string(s) + "'");
}

/// One way the pair (n, k) might be covered. `source` is "threshold" (the
/// k!/2 theorem for a split n = m t), "prime-order" (same rows with m prime)
/// or "known" (results that need no split; m = n, t = 1 there).
struct CoverageItem {
  std::string source;
  unsigned item = 0;
  mpz_class m;
  std::uint64_t t = 1;
  Coverage status = Coverage::rejected;
  std::string caveat;  // condition, or why the item does not apply

  friend bool operator==(const CoverageItem&, const CoverageItem&) = default;
};

struct ApplicabilityReport {
  mpz_class n;
  unsigned k = 0;
  mpz_class threshold;  // k!/2
  Verdict verdict = Verdict::not_covered;
  std::vector<CoverageItem> items;
  bool subset_given = false;

  friend bool operator==(const ApplicabilityReport&, const ApplicabilityReport&) = default;
};

/// Optional concrete subset of Z_n used to settle conditional caveats.
struct SubsetFacts {
  std::vector<mpz_class> elements;
};

namespace detail {

inline mpz_class half_factorial(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return k >= 2 ? mpz_class(f / 2) : mpz_class(f);
}

/// Row of the (k, t) table shared by the threshold and prime-order theorems.
/// 0 when the pair is not in the table.
inline unsigned table_row(unsigned k, std::uint64_t t) {
  if (k <= 11 && t <= 5) return 1;
  if (k == 12 && t <= 4) return 2;
  if (k == 13 && (t == 2 || t == 3)) return 3;
  if (k == 14 && t == 2) return 4;
  if (k == 15 && t == 2) return 5;
  return 0;
}

inline std::string row_caveat(unsigned row) {
  switch (row) {
    case 3:
    case 4: return "S must contain an element outside the subgroup of order m";
    case 5: return "S must not contain exactly 0, 1, 2 or 15 elements of the subgroup of order m";
    default: return "";
  }
}

/// Settles a row caveat from the number of elements of S inside the
/// subgroup of order m (the multiples of t).
inline Coverage settle_row(unsigned row, unsigned k, const std::optional<unsigned>& inside) {
  if (row <= 2) return Coverage::covered;
  if (!inside) return Coverage::conditional;
  if (row == 3 || row == 4) return *inside < k ? Coverage::covered : Coverage::rejected;
  const unsigned c = *inside;
  return (c == 0 || c == 1 || c == 2 || c == 15) ? Coverage::rejected : Coverage::covered;
}

}  // namespace detail

inline ApplicabilityReport applicability(const mpz_class& n, unsigned k,
                                         const std::optional<SubsetFacts>& subset = std::nullopt,
                                         const FactorizeOptions& fopts = {}) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "n must be at least 2");
  if (k < 1) throw Error(ErrorKind::invalid_input, "k must be at least 1");
  if (n - 1 < k) throw Error(ErrorKind::invalid_input, "k exceeds n - 1");

  ApplicabilityReport rep;
  rep.n = n;
  rep.k = k;
  rep.threshold = detail::half_factorial(k);
  rep.subset_given = subset.has_value();

  std::optional<mpz_class> sum;
  if (subset) {
    if (subset->elements.size() != k)
      throw Error(ErrorKind::invalid_input, "subset has " + std::to_string(subset->elements.size()) +
                                                " elements, expected " + std::to_string(k));
    auto sorted = subset->elements;
    for (const auto& e : sorted)
      if (e <= 0 || e >= n) throw Error(ErrorKind::invalid_input, "subset element outside Z_n \\ {0}");
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorKind::invalid_input, "repeated subset element");
    mpz_class s = 0;
    for (const auto& e : sorted) s += e;
    sum = mpz_class(s % n);
  }

  const auto nf = factorize(n, fopts);
  const bool n_prime = nf.complete() && nf.primes.size() == 1 && nf.primes[0].exponent == 1;

  // Classical results; each applies to the whole group Z_n.
  auto known = [&](unsigned item, bool applies, std::string cond, std::optional<bool> cond_holds,
                   std::string why) {
    CoverageItem it{"known", item, n, 1, Coverage::rejected, ""};
    if (!applies) {
      it.caveat = std::move(why);
    } else if (cond.empty()) {
      it.status = Coverage::covered;
    } else if (!cond_holds) {
      it.status = Coverage::conditional;
      it.caveat = std::move(cond);
    } else {
      it.status = *cond_holds ? Coverage::covered : Coverage::rejected;
      it.caveat = std::move(cond);
    }
    rep.items.push_back(std::move(it));
  };
  const std::optional<bool> sum_zero = sum ? std::optional<bool>(*sum == 0) : std::nullopt;
  const std::optional<bool> sum_nonzero = sum ? std::optional<bool>(*sum != 0) : std::nullopt;
  known(1, k <= 9, "", std::nullopt, "needs k <= 9");
  if (k == 10) known(2, n_prime, "", std::nullopt, "needs n prime");
  if (n == k + 3) known(3, n_prime, "sum of S nonzero", sum_nonzero, "needs n prime");
  if (n == k + 2) known(4, true, "sum of S nonzero", sum_nonzero, "");
  if (n == k + 1) known(5, true, "", std::nullopt, "");
  if (n <= 21) known(6, true, "", std::nullopt, "");
  else if (n <= 23) known(6, true, "sum of S zero", sum_zero, "");
  if (n <= 25) known(7, true, "sum of S zero", sum_zero, "");

  // Splits n = m t with t <= 5.
  for (std::uint64_t t = 1; t <= 5; ++t) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), t) == 0) continue;
    const mpz_class m = n / t;
    const unsigned row = detail::table_row(k, t);
    std::optional<unsigned> inside;
    if (subset) {
      unsigned c = 0;
      for (const auto& e : subset->elements)
        if (mpz_divisible_ui_p(e.get_mpz_t(), t)) ++c;
      inside = c;
    }

    CoverageItem thr{"threshold", row, m, t, Coverage::rejected, ""};
    CoverageItem pri{"prime-order", row, m, t, Coverage::rejected, ""};
    if (row == 0) {
      thr.caveat = pri.caveat = "(k,t) not in the table";
      rep.items.push_back(thr);
      rep.items.push_back(pri);
      continue;
    }

    const auto mf = m == 1 ? Factorization{1, {}, std::nullopt, false} : factorize(m, fopts);
    const auto settled = detail::settle_row(row, k, inside);
    auto with_caveat = [&](CoverageItem& it) {
      it.status = settled;
      if (row >= 3) it.caveat = detail::row_caveat(row);
    };

    // Threshold theorem: every prime factor of m exceeds k!/2.
    bool small_factor = false;
    for (const auto& pp : mf.primes)
      if (pp.prime <= rep.threshold) small_factor = true;
    if (small_factor) {
      thr.caveat = "m has a prime factor <= " + rep.threshold.get_str();
    } else if (mf.cofactor) {
      thr.status = Coverage::unknown;
      thr.caveat = "unsplit cofactor " + mf.cofactor->get_str();
    } else {
      with_caveat(thr);
    }

    // Prime-order theorem: m itself prime and coprime to t.
    const bool m_prime = mf.complete() && mf.primes.size() == 1 && mf.primes[0].exponent == 1;
    if (!mf.complete()) {
      pri.status = Coverage::unknown;
      pri.caveat = "unsplit cofactor " + mf.cofactor->get_str();
    } else if (!m_prime) {
      pri.caveat = "m is not prime";
    } else if (mpz_divisible_ui_p(m.get_mpz_t(), t) != 0 && t > 1) {
      pri.caveat = "m and t are not coprime";
    } else {
      with_caveat(pri);
    }
    rep.items.push_back(std::move(thr));
    rep.items.push_back(std::move(pri));
  }

  bool any_covered = false, any_conditional = false, any_unknown = false;
  for (const auto& it : rep.items) {
    any_covered |= it.status == Coverage::covered;
    any_conditional |= it.status == Coverage::conditional;
    any_unknown |= it.status == Coverage::unknown;
  }
  rep.verdict = any_covered       ? Verdict::unconditional
                : any_conditional ? Verdict::conditional
                : any_unknown     ? Verdict::unknown
                                  : Verdict::not_covered;
  return rep;
}

}  // namespace nullseq
