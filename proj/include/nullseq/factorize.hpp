#pragma once

// Integer factorization for certificate coefficients: trial division,
// Pollard-Brent rho and Miller-Rabin over GMP integers.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nullseq/error.hpp"

namespace nullseq {

enum class Primality { composite, prime, probable_prime };

namespace detail {

// Miller-Rabin with these bases is deterministic below this value.
inline const mpz_class& deterministic_mr_limit() {
  static const mpz_class limit("3317044064679887385961981");
  return limit;
}

inline constexpr std::array<unsigned, 13> kMrBases = {2,  3,  5,  7,  11, 13, 17,
                                                      19, 23, 29, 31, 37, 41};

inline bool miller_rabin_round(const mpz_class& n, const mpz_class& d, unsigned s,
                               unsigned base) {
  mpz_class a = base;
  if (a % n == 0) return true;
  mpz_class x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const mpz_class n1 = n - 1;
  if (x == 1 || x == n1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n1) return true;
  }
  return false;
}

}  // namespace detail

inline Primality primality(const mpz_class& n) {
  if (n < 2) return Primality::composite;
  for (unsigned p : detail::kMrBases) {
    if (n == p) return Primality::prime;
    if (n % p == 0) return Primality::composite;
  }
  mpz_class d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  for (unsigned base : detail::kMrBases) {
    if (!detail::miller_rabin_round(n, d, s, base)) return Primality::composite;
  }
  if (n < detail::deterministic_mr_limit()) return Primality::prime;
  // Beyond the deterministic range fall back to GMP's BPSW-based test.
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0 ? Primality::probable_prime
                                                   : Primality::composite;
}

inline bool is_prime(std::uint64_t n) {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
  return primality(m) != Primality::composite;
}

struct PrimePower {
  mpz_class prime;
  unsigned exponent = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Signed factorization. `cofactor` holds a composite remainder that could
/// not be split within the budget; `probable` is set when a listed prime is
/// only a probable prime.
struct Factorization {
  int sign = 1;
  std::vector<PrimePower> primes;
  std::optional<mpz_class> cofactor;
  bool probable = false;

  mpz_class value() const {
    mpz_class v = sign;
    for (const auto& pp : primes) {
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
      v *= pw;
    }
    if (cofactor) v *= *cofactor;
    return v;
  }

  bool complete() const { return !cofactor.has_value(); }

  // "+2^3*5", "-1", "+7*C<1234567>"
  std::string to_string() const {
    std::string out = sign < 0 ? "-" : "+";
    if (primes.empty() && !cofactor) return out + "1";
    bool first = true;
    for (const auto& pp : primes) {
      if (!first) out += '*';
      first = false;
      out += pp.prime.get_str();
      if (pp.exponent != 1) out += "^" + std::to_string(pp.exponent);
    }
    if (cofactor) {
      if (!first) out += '*';
      out += "C<" + cofactor->get_str() + ">";
    }
    return out;
  }

  static Factorization parse(std::string_view text) {
    if (text.empty() || (text[0] != '+' && text[0] != '-'))
      throw Error(ErrorKind::invalid_input, "factorization must start with a sign");
    Factorization f;
    f.sign = text[0] == '-' ? -1 : 1;
    text.remove_prefix(1);
    if (text == "1") return f;
    while (!text.empty()) {
      const auto star = text.find('*');
      std::string_view item = text.substr(0, star);
      text = star == std::string_view::npos ? std::string_view{} : text.substr(star + 1);
      if (item.starts_with("C<") && item.ends_with(">")) {
        f.cofactor = mpz_class(std::string(item.substr(2, item.size() - 3)));
        continue;
      }
      PrimePower pp;
      const auto caret = item.find('^');
      try {
        pp.prime = mpz_class(std::string(item.substr(0, caret)));
        if (caret != std::string_view::npos)
          pp.exponent = static_cast<unsigned>(std::stoul(std::string(item.substr(caret + 1))));
      } catch (const std::exception&) {
        throw Error(ErrorKind::invalid_input, "bad factorization item '" + std::string(item) + "'");
      }
      f.primes.push_back(pp);
    }
    return f;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct FactorizeOptions {
  std::uint64_t trial_limit = 1'000'000;
  std::uint64_t rho_iterations = 5'000'000;  // per split attempt
};

namespace detail {

// Brent's cycle finding variant of Pollard rho. Returns a nontrivial factor
// or 0 when the iteration budget runs out.
inline mpz_class pollard_brent(const mpz_class& n, std::uint64_t budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned c = 1; c < 20; ++c) {
    mpz_class y = 2, x, ys, q = 1, g = 1;
    std::uint64_t r = 1, spent = 0;
    constexpr std::uint64_t m = 128;
    auto f = [&](const mpz_class& v) { return mpz_class((v * v + c) % n); };
    while (g == 1 && spent < budget) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t done = 0;
      while (done < r && g == 1) {
        ys = y;
        const std::uint64_t lim = std::min(m, r - done);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          mpz_class diff = x - y;
          q = (q * abs(diff)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        done += lim;
      }
      spent += r;
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the saved state.
      do {
        ys = f(ys);
        mpz_class diff = abs(mpz_class(x - ys));
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
    if (spent >= budget) break;
  }
  return 0;
}

inline void split_into(const mpz_class& n, const FactorizeOptions& opts,
                       std::vector<mpz_class>& primes, std::vector<mpz_class>& stuck,
                       bool& probable) {
  if (n == 1) return;
  switch (primality(n)) {
    case Primality::prime: primes.push_back(n); return;
    case Primality::probable_prime:
      probable = true;
      primes.push_back(n);
      return;
    case Primality::composite: break;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    split_into(root, opts, primes, stuck, probable);
    split_into(root, opts, primes, stuck, probable);
    return;
  }
  const mpz_class d = pollard_brent(n, opts.rho_iterations);
  if (d == 0) {
    stuck.push_back(n);
    return;
  }
  split_into(d, opts, primes, stuck, probable);
  split_into(mpz_class(n / d), opts, primes, stuck, probable);
}

}  // namespace detail

inline Factorization factorize(const mpz_class& n, const FactorizeOptions& opts = {}) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "cannot factorize zero");
  Factorization f;
  f.sign = sgn(n) < 0 ? -1 : 1;
  mpz_class rest = abs(n);

  std::vector<mpz_class> found;
  auto strip = [&](unsigned long p) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      found.emplace_back(p);
    }
  };
  strip(2);
  for (unsigned long p = 3; p <= opts.trial_limit && rest > 1; p += 2) {
    if (p * p > rest) break;
    strip(p);
  }

  std::vector<mpz_class> stuck;
  detail::split_into(rest, opts, found, stuck, f.probable);

  std::sort(found.begin(), found.end());
  for (const auto& p : found) {
    if (!f.primes.empty() && f.primes.back().prime == p)
      ++f.primes.back().exponent;
    else
      f.primes.push_back({p, 1});
  }
  if (!stuck.empty()) {
    mpz_class c = 1;
    for (const auto& s : stuck) c *= s;
    f.cofactor = c;
  }
  return f;
}

inline mpz_class largest_prime_factor(const mpz_class& n) {
  const auto f = factorize(n);
  return f.primes.empty() ? mpz_class(1) : f.primes.back().prime;
}

inline mpz_class to_mpz(std::uint64_t v) {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return m;
}

}  // namespace nullseq
