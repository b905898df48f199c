#pragma once

// Brute-force ground truth: backtracking search for sequencings of explicit
// subsets, exhaustive or sampled scans of Z_n, and direct checks of what a
// coefficient certificate promises for a concrete prime.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/factorize.hpp"
#include "nullseq/group_core.hpp"
#include "nullseq/quotient_search.hpp"

namespace nullseq {

inline constexpr std::size_t kMaxOracleSize = 20;

struct SearchStats {
  std::uint64_t nodes = 0;  // prefixes visited, the empty prefix included
};

namespace detail {

/// Depth-first search over orderings of a subset. Elements are tried in
/// ascending order; a prefix is abandoned as soon as a partial sum repeats,
/// except that a zero-sum subset may close back onto y_0 at the last step.
class SequencingSearch {
 public:
  SequencingSearch(const SubsetSpec& subset, const GroupConfig& g,
                   const std::vector<unsigned>* projection)
      : g_(g), p_(g.first_modulus()), elems_(subset.elements), projection_(projection) {
    if (elems_.size() > kMaxOracleSize)
      throw Error(ErrorKind::too_large, "subset of size " + std::to_string(elems_.size()) +
                                            " exceeds the oracle limit " + std::to_string(kMaxOracleSize));
    if (projection_ && projection_->size() != elems_.size())
      throw Error(ErrorKind::invalid_input, "projection length differs from subset size");
    std::sort(elems_.begin(), elems_.end());
    total_ = element_sum(subset, g);
    used_.assign(elems_.size(), 0);
    seen_.assign(p_ * g.t, 0);
    order_.reserve(elems_.size());
  }

  std::optional<Ordering> run(SearchStats* stats) {
    seen_[0] = 1;
    const bool found = dfs(Element{0, 0});
    if (stats) stats->nodes += nodes_;
    if (!found) return std::nullopt;
    return order_;
  }

 private:
  std::size_t index(const Element& e) const { return e.first * g_.t + e.second; }

  bool dfs(const Element& sum) {
    ++nodes_;
    const std::size_t depth = order_.size();
    if (depth == elems_.size()) return true;
    const bool last = depth + 1 == elems_.size();
    for (std::size_t n = 0; n < elems_.size(); ++n) {
      if (used_[n]) continue;
      const auto& x = elems_[n];
      if (projection_ && x.second != (*projection_)[depth]) continue;
      const Element next = add(g_, sum, x);
      const std::size_t idx = index(next);
      const bool closes = last && total_.is_zero();  // then next is y_0
      if (seen_[idx] && !closes) continue;
      used_[n] = 1;
      order_.push_back(x);
      if (!closes) seen_[idx] = 1;
      if (dfs(next)) return true;
      if (!closes) seen_[idx] = 0;
      order_.pop_back();
      used_[n] = 0;
    }
    return false;
  }

  GroupConfig g_;
  std::uint64_t p_;
  std::vector<Element> elems_;
  const std::vector<unsigned>* projection_;
  Element total_;
  std::vector<char> used_;
  std::vector<char> seen_;
  Ordering order_;
  std::uint64_t nodes_ = 0;
};

/// C(n, r), saturating at uint64 max.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

/// Advances a strictly increasing combination drawn from [lo, hi]. Returns
/// false once the last combination has been passed.
inline bool next_combination(std::vector<std::uint64_t>& c, std::uint64_t lo, std::uint64_t hi) {
  const std::size_t r = c.size();
  for (std::size_t i = r; i-- > 0;) {
    if (c[i] < hi - (r - 1 - i)) {
      ++c[i];
      for (std::size_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  (void)lo;
  return false;
}

inline void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// First sequencing in DFS order: linear when the sum is nonzero, rotational
/// when it is zero. Nullopt once the whole tree has been exhausted.
inline std::optional<Ordering> find_sequencing(const SubsetSpec& subset, const GroupConfig& g,
                                               SearchStats* stats = nullptr) {
  return detail::SequencingSearch(subset, g, nullptr).run(stats);
}

/// Same search restricted to orderings whose i-th element projects to a[i].
inline std::optional<Ordering> find_sequencing_with_projection(const SubsetSpec& subset,
                                                               const GroupConfig& g,
                                                               const std::vector<unsigned>& a,
                                                               SearchStats* stats = nullptr) {
  return detail::SequencingSearch(subset, g, &a).run(stats);
}

/// Smallest image of a sorted subset of Z_n under multiplication by units.
inline std::vector<std::uint64_t> canonical_subset(const std::vector<std::uint64_t>& residues,
                                                   std::uint64_t n) {
  auto best = residues;
  std::sort(best.begin(), best.end());
  std::vector<std::uint64_t> img(residues.size());
  for (std::uint64_t u = 2; u < n; ++u) {
    if (std::gcd(u, n) != 1) continue;
    for (std::size_t i = 0; i < residues.size(); ++i)
      img[i] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(residues[i]) * u % n);
    std::sort(img.begin(), img.end());
    if (img < best) best = img;
  }
  return best;
}

struct ScanMode {
  enum Kind { exhaustive, sample } kind = exhaustive;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;

  static ScanMode full() { return {}; }
  static ScanMode sampled(std::uint64_t count, std::uint64_t seed) { return {sample, count, seed}; }
};

struct ScanOptions {
  bool reduce_symmetry = true;
  unsigned workers = 1;
  std::uint64_t budget = 50'000'000;  // searches performed
};

struct ScanReport {
  std::uint64_t n = 0;
  unsigned k = 0;
  ScanMode mode;
  bool reduce_symmetry = true;
  std::uint64_t subsets = 0;   // subsets covered (sampled draws in sample mode)
  std::uint64_t searches = 0;  // DFS runs actually performed
  std::vector<std::vector<std::uint64_t>> failures;  // sorted
  bool complete = true;

  friend bool operator==(const ScanReport& x, const ScanReport& y) {
    return x.n == y.n && x.k == y.k && x.mode.kind == y.mode.kind && x.mode.count == y.mode.count &&
           x.mode.seed == y.mode.seed && x.reduce_symmetry == y.reduce_symmetry &&
           x.subsets == y.subsets && x.searches == y.searches && x.failures == y.failures &&
           x.complete == y.complete;
  }
};

/// Checks every (or a random sample of) k-subset of Z_n \ {0} with
/// find_sequencing. Any failure would be a counterexample to the conjecture.
inline ScanReport scan_group(std::uint64_t n, unsigned k, const ScanMode& mode = {},
                             const ScanOptions& opts = {}) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "n must be at least 2");
  if (k > n - 1) throw Error(ErrorKind::invalid_input, "k exceeds n - 1");
  if (k > kMaxOracleSize) throw Error(ErrorKind::too_large, "k exceeds the oracle limit");
  const auto g = GroupConfig::cyclic(n);

  ScanReport report;
  report.n = n;
  report.k = k;
  report.mode = mode;
  report.reduce_symmetry = opts.reduce_symmetry;

  std::mutex mu;
  std::atomic<std::uint64_t> searches{0};
  std::atomic<bool> stop{false};

  // Returns false when the budget is exhausted.
  auto check = [&](const std::vector<std::uint64_t>& subset) {
    if (opts.reduce_symmetry && canonical_subset(subset, n) != subset) return true;
    if (searches.fetch_add(1) >= opts.budget) {
      searches.fetch_sub(1);
      stop = true;
      return false;
    }
    if (!find_sequencing(SubsetSpec::cyclic(g, subset), g)) {
      std::lock_guard lock(mu);
      report.failures.push_back(subset);
    }
    return true;
  };

  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::exception_ptr> errors(workers);

  if (mode.kind == ScanMode::exhaustive) {
    if (k == 0) {
      report.subsets = 1;
      report.searches = 1;
      return report;
    }
    // Tasks are fixed prefixes of length min(k, 2); workers pull them in order.
    std::vector<std::vector<std::uint64_t>> tasks;
    const std::size_t plen = std::min<unsigned>(k, 2);
    std::vector<std::uint64_t> pre(plen);
    std::iota(pre.begin(), pre.end(), 1);
    do {
      if (pre.back() + (k - plen) <= n - 1) tasks.push_back(pre);
    } while (detail::next_combination(pre, 1, n - 1));

    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> covered{0};
    auto work = [&](std::size_t w) {
      try {
        for (std::size_t ti; !stop && (ti = next.fetch_add(1)) < tasks.size();) {
          const auto& prefix = tasks[ti];
          const std::size_t rest = k - prefix.size();
          std::vector<std::uint64_t> tail(rest);
          std::iota(tail.begin(), tail.end(), prefix.back() + 1);
          std::vector<std::uint64_t> subset(prefix);
          subset.resize(k);
          do {
            std::copy(tail.begin(), tail.end(), subset.begin() + static_cast<long>(prefix.size()));
            if (!check(subset)) return;
            covered.fetch_add(1);
          } while (rest > 0 && detail::next_combination(tail, prefix.back() + 1, n - 1));
        }
      } catch (...) {
        errors[w] = std::current_exception();
        stop = true;
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    detail::rethrow_first(errors);
    report.subsets = covered;
  } else {
    // Draws are generated up front so the sample does not depend on workers.
    std::mt19937_64 rng(mode.seed);
    std::vector<std::uint64_t> pool(n - 1);
    std::iota(pool.begin(), pool.end(), 1);
    std::vector<std::vector<std::uint64_t>> draws;
    draws.reserve(mode.count);
    for (std::uint64_t s = 0; s < mode.count; ++s) {
      for (unsigned i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      std::vector<std::uint64_t> subset(pool.begin(), pool.begin() + k);
      std::sort(subset.begin(), subset.end());
      if (opts.reduce_symmetry) subset = canonical_subset(subset, n);
      draws.push_back(std::move(subset));
    }
    // Sampled draws are always searched; symmetry only canonicalises them.
    ScanOptions inner = opts;
    inner.reduce_symmetry = false;
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> covered{0};
    auto work = [&](std::size_t w) {
      try {
        for (std::size_t i; !stop && (i = next.fetch_add(1)) < draws.size();) {
          if (searches.fetch_add(1) >= inner.budget) {
            stop = true;
            searches.fetch_sub(1);
            return;
          }
          if (!find_sequencing(SubsetSpec::cyclic(g, draws[i]), g)) {
            std::lock_guard lock(mu);
            report.failures.push_back(draws[i]);
          }
          covered.fetch_add(1);
        }
      } catch (...) {
        errors[w] = std::current_exception();
        stop = true;
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    detail::rethrow_first(errors);
    report.subsets = covered;
  }

  report.searches = searches;
  report.complete = !stop;
  std::sort(report.failures.begin(), report.failures.end());
  report.failures.erase(std::unique(report.failures.begin(), report.failures.end()),
                        report.failures.end());
  return report;
}

struct VerifyOptions {
  std::uint64_t budget = 20'000'000;  // subsets
  unsigned workers = 1;
  std::size_t keep_failures = 32;
};

struct VerifyReport {
  std::uint64_t p = 0;
  std::uint64_t t = 1;
  TypeVector lambda;
  std::vector<unsigned> a;
  std::uint64_t subsets = 0;
  std::uint64_t failure_count = 0;
  std::vector<std::vector<Element>> failures;  // first few, sorted

  bool passed() const { return failure_count == 0; }

  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

/// Checks every subset of Z_p x Z_t \ {(0,0)} of type lambda for a sequencing
/// whose projection onto Z_t is exactly qs.a.
inline VerifyReport verify_nonvanishing_conclusion(std::uint64_t p, std::uint64_t t,
                                                   const TypeVector& lambda,
                                                   const QuotientSequencing& qs,
                                                   const VerifyOptions& opts = {}) {
  const auto g = GroupConfig::prime_product(p, t);
  if (lambda.modulus() != t || qs.t != t)
    throw Error(ErrorKind::type_mismatch, "type and quotient sequencing must live in Z_" + std::to_string(t));
  validate_quotient(qs.a, lambda);
  if (lambda.total() > kMaxOracleSize) throw Error(ErrorKind::too_large, "type too large for the oracle");

  // Per coset: every admissible choice of lambda_v first coordinates.
  std::vector<std::vector<std::vector<std::uint64_t>>> choices(t);
  std::uint64_t total = 1;
  for (std::uint64_t v = 0; v < t; ++v) {
    const std::uint64_t lo = v == 0 ? 1 : 0;  // (0,0) is excluded
    const std::uint64_t size = p - lo;
    if (lambda[v] > size)
      throw Error(ErrorKind::infeasible, "coset " + std::to_string(v) + " has only " + std::to_string(size) +
                                             " usable elements for " + std::to_string(lambda[v]) + " slots");
    const std::uint64_t count = detail::binomial(size, lambda[v]);
    if (count > opts.budget || total > opts.budget / std::max<std::uint64_t>(count, 1))
      throw Error(ErrorKind::too_large, "more than " + std::to_string(opts.budget) + " subsets of this type");
    total *= count;
    auto& list = choices[v];
    list.reserve(count);
    std::vector<std::uint64_t> c(lambda[v]);
    std::iota(c.begin(), c.end(), lo);
    do {
      list.push_back(c);
    } while (!c.empty() && detail::next_combination(c, lo, p - 1));
  }

  VerifyReport report;
  report.p = p;
  report.t = t;
  report.lambda = lambda;
  report.a = qs.a;
  report.subsets = total;

  std::mutex mu;
  std::atomic<std::uint64_t> next{0};
  constexpr std::uint64_t kChunk = 256;
  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      std::vector<Element> elems;
      for (std::uint64_t start; (start = next.fetch_add(kChunk)) < total;) {
        const std::uint64_t stop = std::min(total, start + kChunk);
        for (std::uint64_t idx = start; idx < stop; ++idx) {
          elems.clear();
          std::uint64_t rest = idx;
          for (std::uint64_t v = 0; v < t; ++v) {
            const auto& list = choices[v];
            const auto& pick = list[rest % list.size()];
            rest /= list.size();
            for (auto f : pick) elems.push_back({f, v});
          }
          SubsetSpec s{elems};
          if (!find_sequencing_with_projection(s, g, qs.a)) {
            std::sort(elems.begin(), elems.end());
            std::lock_guard lock(mu);
            ++report.failure_count;
            report.failures.push_back(elems);
          }
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }
  detail::rethrow_first(errors);
  std::sort(report.failures.begin(), report.failures.end());
  if (report.failures.size() > opts.keep_failures) report.failures.resize(opts.keep_failures);
  return report;
}

}  // namespace nullseq
