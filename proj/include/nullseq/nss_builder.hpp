#pragma once

// Structural construction of the Nullstellensatz polynomials p_a, q_a and the
// reduced p'_a as lists of degree-1 factors, plus bounding monomials and the
// variable-fixing rules.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/group_core.hpp"
#include "nullseq/quotient_search.hpp"

namespace nullseq {

enum class FactorKind { difference, window };

enum class Variant { p, q };

/// A degree-1 factor. Difference (i, j) is x_j - x_i. Window (i, j) is
/// y_j - y_i = x_{i+1} + ... + x_j. Variables are 1-based positions.
struct LinearFactor {
  FactorKind kind = FactorKind::difference;
  unsigned i = 0;
  unsigned j = 0;
  std::vector<unsigned> vars;          // live variables, ascending
  std::vector<unsigned> dropped_vars;  // fixed positions removed from a window
  bool offset_dropped = false;
  unsigned step = 0;  // multiplication-loop iteration that emitted the factor

  int sign_of(unsigned var) const {
    return (kind == FactorKind::difference && var == i) ? -1 : 1;
  }

  std::string to_string() const {
    std::string out = "(";
    if (kind == FactorKind::difference) {
      out += "x" + std::to_string(j) + "-x" + std::to_string(i);
    } else {
      for (std::size_t n = 0; n < vars.size(); ++n) {
        if (n) out += '+';
        out += "x" + std::to_string(vars[n]);
      }
      if (offset_dropped) out += "+c";
    }
    return out + ")";
  }

  friend bool operator==(const LinearFactor&, const LinearFactor&) = default;
};

/// Positions fixed to symbolic constants. Kept sorted and unique.
struct FixedAssignment {
  std::vector<unsigned> positions;

  bool empty() const { return positions.empty(); }
  bool contains(unsigned pos) const {
    return std::binary_search(positions.begin(), positions.end(), pos);
  }

  static FixedAssignment of(std::vector<unsigned> pos) {
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    return FixedAssignment{std::move(pos)};
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t n = 0; n < positions.size(); ++n) {
      if (n) out += ',';
      out += std::to_string(positions[n]);
    }
    return out;
  }

  static FixedAssignment parse(std::string_view text) { return of(parse_sequence(text)); }

  friend bool operator==(const FixedAssignment&, const FixedAssignment&) = default;
};

struct FactorList {
  std::vector<LinearFactor> factors;
  unsigned k = 0;
  FixedAssignment fixed;
  Variant variant = Variant::p;

  std::size_t degree() const { return factors.size(); }

  std::string to_string() const {
    std::string out;
    for (const auto& f : factors) out += f.to_string();
    return out.empty() ? "1" : out;
  }
};

inline std::size_t degree(const FactorList& fl) { return fl.degree(); }

struct BoundingMonomial {
  std::vector<unsigned> exponents;  // exponents[i - 1] belongs to x_i

  unsigned total_degree() const {
    unsigned d = 0;
    for (auto e : exponents) d += e;
    return d;
  }
};

namespace detail {

inline LinearFactor difference_factor(unsigned i, unsigned j, unsigned step) {
  return LinearFactor{FactorKind::difference, i, j, {i, j}, {}, false, step};
}

inline LinearFactor window_factor(unsigned i, unsigned j, unsigned step) {
  LinearFactor f{FactorKind::window, i, j, {}, {}, false, step};
  for (unsigned v = i + 1; v <= j; ++v) f.vars.push_back(v);
  return f;
}

inline FactorList build(const QuotientSequencing& qs, Variant variant) {
  FactorList fl;
  fl.k = static_cast<unsigned>(qs.k());
  fl.variant = variant;
  const unsigned k = fl.k;
  unsigned step = 0;
  // Same nesting as the multiplication loop: the pair (i, j) contributes the
  // difference factor for (i, j) and the window factor for (i - 1, j).
  for (unsigned i = 1; i <= k; ++i) {
    for (unsigned j = i + 1; j <= k; ++j, ++step) {
      if (qs.at(i) == qs.at(j)) fl.factors.push_back(difference_factor(i, j, step));
      const bool window = qs.b[i - 1] == qs.b[j] && !(i - 1 == 0 && j == k) &&
                          !(variant == Variant::q && j == i + 1);
      if (window) fl.factors.push_back(window_factor(i - 1, j, step));
    }
  }
  return fl;
}

inline void check_positions(const FixedAssignment& fixes, unsigned k) {
  for (std::size_t n = 0; n < fixes.positions.size(); ++n) {
    const unsigned pos = fixes.positions[n];
    if (pos < 1 || pos > k)
      throw Error(ErrorKind::invalid_fixing, "position " + std::to_string(pos) + " out of range");
    if (n > 0 && fixes.positions[n - 1] + 1 == pos)
      throw Error(ErrorKind::invalid_fixing, "adjacent positions " + std::to_string(pos - 1) +
                                                 " and " + std::to_string(pos) + " both fixed");
  }
}

inline TypeVector type_of_sequence(const QuotientSequencing& qs) {
  TypeVector tv{std::vector<unsigned>(qs.t, 0)};
  for (auto v : qs.a) ++tv.counts[v];
  return tv;
}

}  // namespace detail

inline FactorList build_p(const QuotientSequencing& qs) { return detail::build(qs, Variant::p); }

/// Reduced variant for subsets with |S n {x, -x}| <= 1: drops y_{i+2} - y_i.
inline FactorList build_q(const QuotientSequencing& qs) { return detail::build(qs, Variant::q); }

inline BoundingMonomial bounding_monomial(const TypeVector& lambda, const QuotientSequencing& qs,
                                          const FixedAssignment& fixes = {}) {
  if (lambda.modulus() != qs.t || detail::type_of_sequence(qs) != lambda)
    throw Error(ErrorKind::type_mismatch, "quotient sequencing does not match type");
  const unsigned k = static_cast<unsigned>(qs.k());
  detail::check_positions(fixes, k);
  std::vector<unsigned> fixed_in_coset(qs.t, 0);
  for (auto pos : fixes.positions) ++fixed_in_coset[qs.at(pos)];

  BoundingMonomial bm;
  bm.exponents.assign(k, 0);
  for (unsigned pos = 1; pos <= k; ++pos) {
    if (fixes.contains(pos)) continue;
    const unsigned v = qs.at(pos);
    const long gamma = static_cast<long>(lambda[v]) - fixed_in_coset[v] - 1;
    if (gamma < 0)
      throw Error(ErrorKind::infeasible_fixing, "coset " + std::to_string(v) + " exhausted");
    bm.exponents[pos - 1] = static_cast<unsigned>(gamma);
  }
  return bm;
}

/// Substitutes constants for the fixed positions. Difference factors that
/// touch a fixed position disappear; window factors lose the fixed variables
/// and remember that a constant offset was dropped (only top-degree terms
/// matter, so the constant does not affect the coefficients we extract).
inline FactorList apply_fixes(const FactorList& fl, const FixedAssignment& fixes) {
  const auto all = FixedAssignment::of([&] {
    auto v = fl.fixed.positions;
    v.insert(v.end(), fixes.positions.begin(), fixes.positions.end());
    return v;
  }());
  detail::check_positions(all, fl.k);

  FactorList out;
  out.k = fl.k;
  out.variant = fl.variant;
  out.fixed = all;
  for (const auto& f : fl.factors) {
    if (f.kind == FactorKind::difference) {
      if (all.contains(f.i) || all.contains(f.j)) continue;
      out.factors.push_back(f);
      continue;
    }
    LinearFactor g = f;
    g.vars.clear();
    for (auto v : f.vars) {
      if (all.contains(v)) {
        g.dropped_vars.push_back(v);
        g.offset_dropped = true;
      } else {
        g.vars.push_back(v);
      }
    }
    std::sort(g.dropped_vars.begin(), g.dropped_vars.end());
    if (g.vars.empty())
      throw Error(ErrorKind::invalid_fixing, "factor " + f.to_string() + " has no live variable");
    out.factors.push_back(std::move(g));
  }
  return out;
}

/// Greedy fixing: repeatedly fix the admissible position that removes the
/// most factors (ties to the lowest index) while deg(p'_a) stays within the
/// degree of the shrunken bounding monomial. Positions whose fixing removes
/// no factor are left alone.
inline FixedAssignment choose_fixes(const FactorList& fl, const TypeVector& lambda,
                                    const QuotientSequencing& qs) {
  FixedAssignment chosen = fl.fixed;
  std::size_t cur_degree = apply_fixes(fl, chosen).degree();
  for (;;) {
    unsigned best_pos = 0;
    std::size_t best_degree = cur_degree;
    for (unsigned pos = 1; pos <= fl.k; ++pos) {
      if (chosen.contains(pos) || chosen.contains(pos - 1) || chosen.contains(pos + 1)) continue;
      auto trial = chosen.positions;
      trial.push_back(pos);
      const auto fixes = FixedAssignment::of(std::move(trial));
      std::size_t deg = 0;
      unsigned bound = 0;
      try {
        deg = apply_fixes(fl, fixes).degree();
        bound = bounding_monomial(lambda, qs, fixes).total_degree();
      } catch (const Error&) {
        continue;
      }
      if (deg > bound || deg >= cur_degree) continue;
      if (best_pos == 0 || deg < best_degree) {
        best_pos = pos;
        best_degree = deg;
      }
    }
    if (best_pos == 0) break;
    auto next = chosen.positions;
    next.push_back(best_pos);
    chosen = FixedAssignment::of(std::move(next));
    cur_degree = best_degree;
  }
  return chosen;
}

}  // namespace nullseq
