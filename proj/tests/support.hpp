#pragma once

// Small brute-force helpers the tests compare the library against. They
// share no code with the library beyond the plain data types.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "nullseq/nss_builder.hpp"

namespace testsupport {

/// Coefficient of `mono` in the product of the factors, by choosing one
/// variable per factor. Memoised on (factor index, remaining exponents).
inline mpz_class brute_coefficient(const nullseq::FactorList& fl, const std::vector<unsigned>& mono) {
  std::map<std::pair<std::size_t, std::vector<unsigned>>, mpz_class> memo;
  auto rec = [&](auto&& self, std::size_t idx, std::vector<unsigned>& left) -> mpz_class {
    if (idx == fl.factors.size()) {
      for (auto e : left)
        if (e) return 0;
      return 1;
    }
    const auto key = std::make_pair(idx, left);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    mpz_class sum = 0;
    const auto& f = fl.factors[idx];
    for (auto v : f.vars) {
      if (left[v - 1] == 0) continue;
      --left[v - 1];
      const mpz_class sub = self(self, idx + 1, left);
      ++left[v - 1];
      const bool minus = f.kind == nullseq::FactorKind::difference && v == f.i;
      sum += minus ? mpz_class(-sub) : sub;
    }
    memo.emplace(key, sum);
    return sum;
  };
  auto left = mono;
  return rec(rec, 0, left);
}

/// Partial sums of an ordering in Z_n, computed directly.
inline std::vector<std::uint64_t> sums_mod(const std::vector<std::uint64_t>& order, std::uint64_t n) {
  std::vector<std::uint64_t> y{0};
  for (auto x : order) y.push_back((y.back() + x) % n);
  return y;
}

enum class Kind { linear, rotational, none };

inline Kind classify_mod(const std::vector<std::uint64_t>& order, std::uint64_t n) {
  const auto y = sums_mod(order, n);
  auto distinct = [](std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (distinct(y)) return Kind::linear;
  if (y.back() == 0 && distinct({y.begin(), y.end() - 1})) return Kind::rotational;
  return Kind::none;
}

inline bool slow_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline mpz_class factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

/// Degree of p_a counted straight from the definition.
inline unsigned definition_degree(const std::vector<unsigned>& a, std::uint64_t t, bool q_variant = false) {
  const std::size_t k = a.size();
  std::vector<unsigned> b(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) b[i + 1] = static_cast<unsigned>((b[i] + a[i]) % t);
  unsigned d = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (a[i] == a[j]) ++d;
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = i + 1; j <= k; ++j) {
      if (b[i] != b[j] || j == i + 1 || (i == 0 && j == k)) continue;
      if (q_variant && j == i + 2) continue;
      ++d;
    }
  return d;
}

/// Every distinct arrangement of the multiset with counts lambda.
inline std::vector<std::vector<unsigned>> arrangements(const std::vector<unsigned>& lambda) {
  std::vector<unsigned> a;
  for (unsigned v = 0; v < lambda.size(); ++v) a.insert(a.end(), lambda[v], v);
  std::vector<std::vector<unsigned>> out;
  do {
    out.push_back(a);
  } while (std::next_permutation(a.begin(), a.end()));
  return out;
}

}  // namespace testsupport
