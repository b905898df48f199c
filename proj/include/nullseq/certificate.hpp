#pragma once

// Turns computed coefficients into per-type sequenceability certificates and
// assembles the per-(k, t) case reports.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/factorize.hpp"
#include "nullseq/group_core.hpp"
#include "nullseq/nss_builder.hpp"
#include "nullseq/poly_engine.hpp"
#include "nullseq/quotient_search.hpp"

namespace nullseq {

struct CertificateEntry {
  ExponentVector monomial;
  mpz_class coefficient;
  Factorization factorization;
};

/// Proof record for one type: every subset of Z_p x Z_t of this type has a
/// sequencing projecting onto `qs` whenever p satisfies validity_condition().
struct Certificate {
  TypeVector lambda;
  QuotientSequencing qs;
  FixedAssignment fixes;
  unsigned degree = 0;
  BoundingMonomial bound;
  std::vector<CertificateEntry> entries;
  std::vector<mpz_class> exceptional_primes;
  bool trivial = false;  // k <= 1, nothing to compute

  std::string validity_condition() const {
    const unsigned k = lambda.total();
    std::string out = "p prime, p > " + std::to_string(k) + ", gcd(p," + std::to_string(lambda.modulus()) +
                      ")=1, p >= " + std::to_string(qs.max_multiplicity) + " (quotient multiplicity)";
    if (!exceptional_primes.empty()) {
      out += ", p not in {";
      for (std::size_t i = 0; i < exceptional_primes.size(); ++i) {
        if (i) out += ',';
        out += exceptional_primes[i].get_str();
      }
      out += "}";
    }
    if (!fixes.empty()) out += "; coefficients are of top-degree terms after fixing positions " + fixes.to_string();
    return out;
  }
};

struct UnresolvedType {
  TypeVector lambda;
  std::string reason;
};

struct CaseReport {
  unsigned k = 0;
  std::uint64_t t = 1;
  std::vector<Certificate> certified;
  std::vector<UnresolvedType> unresolved;
  bool complete = true;  // false when a budget cut the run short
};

inline mpz_class exceptional_threshold(unsigned k, std::uint64_t t) {
  mpz_class thr = k;
  if (t > 1) thr = std::max(thr, largest_prime_factor(to_mpz(t)));
  return thr;
}

/// Primes above max(k, largest prime factor of t) that divide every
/// coefficient. Only the gcd is factored. An unsplit cofactor of the gcd is
/// reported as is.
inline std::vector<mpz_class> exceptional_primes(const std::vector<mpz_class>& coeffs, unsigned k,
                                                 std::uint64_t t) {
  if (coeffs.empty()) throw Error(ErrorKind::invalid_input, "no coefficients");
  mpz_class g = 0;
  for (const auto& c : coeffs) {
    if (c == 0) throw Error(ErrorKind::invalid_input, "zero coefficient");
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  const mpz_class thr = exceptional_threshold(k, t);
  std::vector<mpz_class> out;
  if (g == 1) return out;
  const auto f = factorize(g);
  for (const auto& pp : f.primes)
    if (pp.prime > thr) out.push_back(pp.prime);
  if (f.cofactor) out.push_back(*f.cofactor);
  return out;
}

struct CaseConfig {
  QuotientSearchOptions search{QuotientObjective::min_degree, 4, 1'000'000, 0x5eed};
  // Ranked sequencings are tried in order until one certifies the type; at
  // least this many are ranked even when search.limit is smaller.
  std::size_t fallback_limit = 1024;
  EngineOptions engine;
  bool use_fixing = true;
  bool representatives_only = false;
  std::vector<TypeVector> only_types;  // empty: every type
  // Explicit per-type choices (quotient sequencing and fixed positions).
  std::map<TypeVector, std::pair<std::vector<unsigned>, FixedAssignment>> overrides;
};

namespace detail {

struct Attempt {
  std::vector<CertificateEntry> entries;
  std::vector<mpz_class> exceptional;
};

/// Collects coefficients of top-degree monomials dividing the bound, letting
/// the deficit fall on the lowest-index variables first. The box of allowed
/// exponents widens one variable at a time until the exceptional set is
/// empty or every variable is free.
inline std::optional<Attempt> collect_entries(const FactorList& fl, const BoundingMonomial& bm,
                                              unsigned k, std::uint64_t t, const EngineOptions& engine) {
  const unsigned slack = bm.total_degree() - static_cast<unsigned>(fl.degree());
  unsigned free_vars = 0, room = 0;
  while (free_vars < fl.k && room < slack) room += bm.exponents[free_vars++];
  if (room < slack) return std::nullopt;

  std::optional<Attempt> best;
  for (; free_vars <= fl.k; ++free_vars) {
    ExponentBox box{bm.exponents, bm.exponents};
    for (unsigned v = 0; v < free_vars; ++v) box.lower[v] = 0;
    const auto poly = multiply_in_box(fl, box, engine);

    Attempt at;
    std::vector<mpz_class> coeffs;
    // std::map order is ascending exponent order, i.e. descending deficit.
    for (const auto& [mono, c] : poly.terms) {
      if (c == 0) continue;
      if (!coeffs.empty()) {
        auto trial = coeffs;
        trial.push_back(c);
        auto ex = exceptional_primes(trial, k, t);
        if (ex.size() >= at.exceptional.size()) continue;
        at.exceptional = std::move(ex);
      } else {
        at.exceptional = exceptional_primes({c}, k, t);
      }
      coeffs.push_back(c);
      at.entries.push_back({mono, c, factorize(c)});
      if (at.exceptional.empty()) break;
    }
    if (!at.entries.empty() && (!best || at.exceptional.size() < best->exceptional.size())) best = at;
    if (best && best->exceptional.empty()) break;
    if (free_vars == fl.k) break;
  }
  return best;
}

}  // namespace detail

/// Tries the best quotient sequencings for `lambda` (greedy fixing first, then
/// no fixing) until one yields coefficients with no exceptional primes.
inline std::variant<Certificate, UnresolvedType> certify_type(const TypeVector& lambda,
                                                              const CaseConfig& config = {}) {
  const unsigned k = lambda.total();
  const std::uint64_t t = lambda.modulus();

  if (k <= 1) {
    std::vector<unsigned> a;
    for (std::size_t v = 0; v < t; ++v) a.insert(a.end(), lambda[v], static_cast<unsigned>(v));
    Certificate cert;
    cert.lambda = lambda;
    cert.qs = validate_quotient(a, lambda);
    cert.bound = bounding_monomial(lambda, cert.qs);
    cert.trivial = true;
    return cert;
  }

  std::vector<std::pair<QuotientSequencing, std::optional<FixedAssignment>>> plans;
  if (const auto it = config.overrides.find(lambda); it != config.overrides.end()) {
    plans.emplace_back(validate_quotient(it->second.first, lambda), it->second.second);
  } else {
    auto opts = config.search;
    opts.limit = std::max(config.search.limit, config.fallback_limit);
    for (auto& s : search_quotient(lambda, opts).ranked) plans.emplace_back(s.qs, std::nullopt);
  }

  std::optional<Certificate> partial;
  std::string reason = "no feasible quotient sequencing";
  for (const auto& [qs, forced] : plans) {
    const auto fl = build_p(qs);
    if (fl.degree() > bounding_monomial(lambda, qs).total_degree()) {
      reason = "deg(p_a) exceeds the bounding degree";
      continue;
    }
    std::vector<FixedAssignment> fix_options;
    if (forced) {
      fix_options.push_back(*forced);
    } else {
      if (config.use_fixing) fix_options.push_back(choose_fixes(fl, lambda, qs));
      if (fix_options.empty() || !fix_options.front().empty()) fix_options.emplace_back();
    }
    for (const auto& fixes : fix_options) {
      const auto reduced = apply_fixes(fl, fixes);
      const auto bm = bounding_monomial(lambda, qs, fixes);
      if (reduced.degree() > bm.total_degree()) continue;
      std::optional<detail::Attempt> at;
      try {
        at = detail::collect_entries(reduced, bm, k, t, config.engine);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::budget_exceeded && e.kind() != ErrorKind::too_large) throw;
        reason = e.what();
        continue;
      }
      if (!at) {
        reason = "every candidate coefficient vanished";
        continue;
      }
      Certificate cert;
      cert.lambda = lambda;
      cert.qs = qs;
      cert.fixes = fixes;
      cert.degree = static_cast<unsigned>(reduced.degree());
      cert.bound = bm;
      cert.entries = std::move(at->entries);
      cert.exceptional_primes = std::move(at->exceptional);
      if (cert.exceptional_primes.empty()) return cert;
      if (!partial || cert.exceptional_primes.size() < partial->exceptional_primes.size())
        partial = std::move(cert);
      reason = "exceptional primes remain";
    }
  }
  if (partial) {
    std::string list;
    for (const auto& p : partial->exceptional_primes) list += (list.empty() ? "" : ",") + p.get_str();
    reason = "exceptional primes remain: {" + list + "}";
  }
  return UnresolvedType{lambda, reason};
}

inline CaseReport assemble_case(unsigned k, std::uint64_t t, const CaseConfig& config = {}) {
  if (t < 1) throw Error(ErrorKind::invalid_input, "t must be at least 1");
  CaseReport report;
  report.k = k;
  report.t = t;
  for (const auto& entry : enumerate_types(k, t)) {
    if (config.representatives_only && !entry.is_representative()) continue;
    if (!config.only_types.empty() &&
        std::find(config.only_types.begin(), config.only_types.end(), entry.type) == config.only_types.end())
      continue;
    auto outcome = certify_type(entry.type, config);
    if (auto* cert = std::get_if<Certificate>(&outcome)) {
      report.certified.push_back(std::move(*cert));
    } else {
      auto& u = std::get<UnresolvedType>(outcome);
      if (u.reason.find("budget") != std::string::npos) report.complete = false;
      report.unresolved.push_back(std::move(u));
    }
  }
  return report;
}

}  // namespace nullseq
