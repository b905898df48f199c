#pragma once

// Quotient sequencings of a type's projected multiset over Z_t, and the
// search that picks the ones inducing the smallest polynomial degree.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/group_core.hpp"

namespace nullseq {

struct QuotientSequencing {
  std::uint64_t t = 1;
  std::vector<unsigned> a;  // a_1..a_k stored at a[0..k-1]
  std::vector<unsigned> b;  // b_0..b_k
  std::optional<unsigned> r;  // nullopt: any prime > k
  unsigned max_multiplicity = 0;

  std::size_t k() const { return a.size(); }

  /// a-value of 1-based position i.
  unsigned at(std::size_t i) const { return a[i - 1]; }

  std::string a_string() const {
    std::string out;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(a[i]);
    }
    return out;
  }

  friend bool operator==(const QuotientSequencing& x, const QuotientSequencing& y) {
    return x.t == y.t && x.a == y.a;
  }
};

inline std::vector<unsigned> quotient_partial_sums(const std::vector<unsigned>& a, std::uint64_t t) {
  std::vector<unsigned> b(a.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) b[i + 1] = static_cast<unsigned>((b[i] + a[i]) % t);
  return b;
}

inline unsigned max_multiplicity(const std::vector<unsigned>& b, std::uint64_t t) {
  std::vector<unsigned> hits(t, 0);
  for (auto v : b) ++hits[v];
  return *std::max_element(hits.begin(), hits.end());
}

inline std::vector<unsigned> parse_sequence(std::string_view text) {
  std::vector<unsigned> out;
  if (text.empty()) return out;
  return TypeVector::parse(text).counts;
}

inline QuotientSequencing validate_quotient(std::vector<unsigned> a, const TypeVector& lambda,
                                            std::optional<unsigned> r = std::nullopt) {
  const std::uint64_t t = lambda.modulus();
  if (t == 0) throw Error(ErrorKind::invalid_input, "empty type vector");
  std::vector<unsigned> seen(t, 0);
  for (auto v : a) {
    if (v >= t) throw Error(ErrorKind::type_mismatch, "value " + std::to_string(v) + " not in Z_t");
    ++seen[v];
  }
  if (seen != lambda.counts)
    throw Error(ErrorKind::type_mismatch, "arrangement does not match type (" + lambda.to_string() + ")");
  QuotientSequencing qs;
  qs.t = t;
  qs.b = quotient_partial_sums(a, t);
  qs.a = std::move(a);
  qs.r = r;
  qs.max_multiplicity = max_multiplicity(qs.b, t);
  if (r && qs.max_multiplicity > *r)
    throw Error(ErrorKind::not_a_quotient_sequencing,
                "a residue occurs " + std::to_string(qs.max_multiplicity) + " times in b, bound is " +
                    std::to_string(*r));
  return qs;
}

/// Number of window pairs (i, j) with b_i = b_j, j > i + 1 (j > i + 2 when
/// `skip_short`), (i, j) != (0, k).
inline unsigned window_pair_count(const std::vector<unsigned>& b, bool skip_short = false) {
  const std::size_t k = b.size() - 1;
  const std::size_t gap = skip_short ? 3 : 2;
  unsigned n = 0;
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = i + gap; j <= k; ++j)
      if (b[i] == b[j] && !(i == 0 && j == k)) ++n;
  return n;
}

inline unsigned difference_pair_count(const TypeVector& lambda) {
  unsigned n = 0;
  for (auto c : lambda.counts) n += c * (c - (c > 0 ? 1 : 0)) / 2;
  return n;
}

/// deg(p_a) (or deg(q_a)) without building the factor list.
inline unsigned closed_form_degree(const TypeVector& lambda, const QuotientSequencing& qs,
                                   bool q_variant = false) {
  return difference_pair_count(lambda) + window_pair_count(qs.b, q_variant);
}

/// Degree of the bounding monomial when nothing is fixed: sum of l(l-1).
inline unsigned bound_degree(const TypeVector& lambda) {
  unsigned n = 0;
  for (auto c : lambda.counts) n += c * (c > 0 ? c - 1 : 0);
  return n;
}

enum class QuotientObjective { min_degree, min_max_multiplicity };

struct ScoredSequencing {
  QuotientSequencing qs;
  unsigned degree = 0;
  unsigned bound_degree = 0;

  /// Non-Vanishing feasibility before any fixing.
  bool feasible() const { return degree <= bound_degree; }
};

struct QuotientSearchResult {
  std::vector<ScoredSequencing> ranked;
  bool exhaustive = true;
  std::uint64_t examined = 0;
};

struct QuotientSearchOptions {
  QuotientObjective objective = QuotientObjective::min_degree;
  std::size_t limit = 8;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0x5eed;
};

/// Number of distinct arrangements of the multiset, saturating at uint64 max.
inline std::uint64_t multinomial(const TypeVector& lambda) {
  // Build as a product of binomials C(n, c) to keep intermediates exact.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  unsigned n = 0;
  for (auto c : lambda.counts) {
    for (unsigned i = 1; i <= c; ++i) {
      ++n;
      // result *= n / i, exact because result * C(n, i) grouping stays integral
      const unsigned __int128 next = static_cast<unsigned __int128>(result) * n / i;
      if (next > kMax) return kMax;
      result = static_cast<std::uint64_t>(next);
    }
  }
  return result;
}

namespace detail {

using QuotientKey = std::tuple<unsigned, unsigned, std::vector<unsigned>>;

inline QuotientKey score_key(QuotientObjective obj, unsigned degree, unsigned mult,
                             const std::vector<unsigned>& a) {
  if (obj == QuotientObjective::min_degree) return {degree, mult, a};
  return {mult, degree, a};
}

class TopK {
 public:
  TopK(std::size_t limit, QuotientObjective obj) : limit_(limit), obj_(obj) {}

  void offer(const std::vector<unsigned>& a, unsigned degree, unsigned mult) {
    auto key = score_key(obj_, degree, mult, a);
    if (best_.size() >= limit_ && !(key < *std::prev(best_.end()))) return;
    best_.insert(std::move(key));
    if (best_.size() > limit_) best_.erase(std::prev(best_.end()));
  }

  const std::set<QuotientKey>& items() const { return best_; }

 private:
  std::size_t limit_;
  QuotientObjective obj_;
  std::set<QuotientKey> best_;
};

}  // namespace detail

inline QuotientSearchResult search_quotient(const TypeVector& lambda,
                                            const QuotientSearchOptions& opts = {}) {
  if (lambda.modulus() == 0) throw Error(ErrorKind::invalid_input, "empty type vector");
  if (opts.limit == 0) throw Error(ErrorKind::invalid_input, "limit must be positive");
  const std::uint64_t t = lambda.modulus();
  const unsigned diff = difference_pair_count(lambda);

  std::vector<unsigned> a;
  for (std::size_t v = 0; v < t; ++v) a.insert(a.end(), lambda.counts[v], static_cast<unsigned>(v));

  QuotientSearchResult result;
  detail::TopK top(opts.limit, opts.objective);
  auto evaluate = [&](const std::vector<unsigned>& arr) {
    const auto b = quotient_partial_sums(arr, t);
    ++result.examined;
    return std::pair{diff + window_pair_count(b), max_multiplicity(b, t)};
  };

  if (multinomial(lambda) <= opts.budget) {
    do {
      const auto [deg, mult] = evaluate(a);
      top.offer(a, deg, mult);
    } while (std::next_permutation(a.begin(), a.end()));
  } else {
    // Randomized restarts with pairwise-swap hill climbing.
    result.exhaustive = false;
    std::mt19937_64 rng(opts.seed);
    auto better = [&](std::pair<unsigned, unsigned> x, std::pair<unsigned, unsigned> y) {
      if (opts.objective == QuotientObjective::min_degree) return x < y;
      return std::pair{x.second, x.first} < std::pair{y.second, y.first};
    };
    while (result.examined < opts.budget) {
      std::shuffle(a.begin(), a.end(), rng);
      auto cur = evaluate(a);
      bool improved = true;
      while (improved && result.examined < opts.budget) {
        improved = false;
        for (std::size_t i = 0; i < a.size() && !improved; ++i)
          for (std::size_t j = i + 1; j < a.size() && !improved; ++j) {
            if (a[i] == a[j]) continue;
            std::swap(a[i], a[j]);
            const auto cand = evaluate(a);
            if (better(cand, cur)) {
              cur = cand;
              improved = true;
            } else {
              std::swap(a[i], a[j]);
            }
          }
      }
      top.offer(a, cur.first, cur.second);
    }
  }

  const unsigned bdeg = bound_degree(lambda);
  for (const auto& key : top.items()) {
    const auto& arr = std::get<2>(key);
    auto qs = validate_quotient(arr, lambda);
    const unsigned deg = opts.objective == QuotientObjective::min_degree ? std::get<0>(key)
                                                                          : std::get<1>(key);
    result.ranked.push_back({std::move(qs), deg, bdeg});
  }
  return result;
}

}  // namespace nullseq
