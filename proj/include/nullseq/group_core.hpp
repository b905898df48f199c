#pragma once

// Elements, subsets, orderings and partial sums in Z_p x Z_t (and plain Z_n),
// sequencing classification, and subset types over the quotient Z_t.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/factorize.hpp"

namespace nullseq {

/// The group Z_p x Z_t. A concrete prime p with gcd(p, t) = 1 is the normal
/// case; `cyclic(n)` models Z_n as Z_n x Z_1 with no primality requirement,
/// and `symbolic(t)` leaves p unspecified (no arithmetic on first coordinates).
struct GroupConfig {
  std::optional<std::uint64_t> p;
  std::uint64_t t = 1;

  static GroupConfig prime_product(std::uint64_t p, std::uint64_t t) {
    if (t < 1) throw Error(ErrorKind::invalid_input, "t must be at least 1");
    if (!is_prime(p)) throw Error(ErrorKind::invalid_input, std::to_string(p) + " is not prime");
    if (std::gcd(p, t) != 1)
      throw Error(ErrorKind::invalid_input, "p and t must be coprime");
    return GroupConfig{p, t};
  }

  static GroupConfig cyclic(std::uint64_t n) {
    if (n < 1) throw Error(ErrorKind::invalid_input, "group order must be positive");
    return GroupConfig{n, 1};
  }

  static GroupConfig symbolic(std::uint64_t t) {
    if (t < 1) throw Error(ErrorKind::invalid_input, "t must be at least 1");
    return GroupConfig{std::nullopt, t};
  }

  bool is_symbolic() const { return !p.has_value(); }

  std::uint64_t first_modulus() const {
    if (!p) throw Error(ErrorKind::invalid_input, "no arithmetic on symbolic first coordinates");
    return *p;
  }

  std::uint64_t order() const { return first_modulus() * t; }
};

struct Element {
  std::uint64_t first = 0;
  std::uint64_t second = 0;

  bool is_zero() const { return first == 0 && second == 0; }
  friend auto operator<=>(const Element&, const Element&) = default;
};

inline bool in_group(const GroupConfig& g, const Element& e) {
  return e.second < g.t && (g.is_symbolic() || e.first < *g.p);
}

inline Element add(const GroupConfig& g, const Element& a, const Element& b) {
  const std::uint64_t p = g.first_modulus();
  return {(a.first + b.first) % p, (a.second + b.second) % g.t};
}

inline Element negate(const GroupConfig& g, const Element& a) {
  const std::uint64_t p = g.first_modulus();
  return {(p - a.first) % p, (g.t - a.second) % g.t};
}

/// A subset of G \ {0}: pairwise distinct, nonzero elements.
struct SubsetSpec {
  std::vector<Element> elements;

  std::size_t size() const { return elements.size(); }

  static SubsetSpec make(const GroupConfig& g, std::vector<Element> elements) {
    std::set<Element> seen;
    for (const auto& e : elements) {
      if (!in_group(g, e)) throw Error(ErrorKind::invalid_input, "element out of range");
      if (e.is_zero()) throw Error(ErrorKind::invalid_input, "subset contains the identity");
      if (!seen.insert(e).second) throw Error(ErrorKind::invalid_input, "repeated element");
    }
    return SubsetSpec{std::move(elements)};
  }

  /// Convenience for Z_n given as residues.
  static SubsetSpec cyclic(const GroupConfig& g, const std::vector<std::uint64_t>& residues) {
    std::vector<Element> elems;
    elems.reserve(residues.size());
    for (auto r : residues) elems.push_back({r, 0});
    return make(g, std::move(elems));
  }
};

using Ordering = std::vector<Element>;

struct PartialSums {
  std::vector<Element> sums;
};

enum class Sequencing { linear, rotational, none };

inline std::string_view to_string(Sequencing s) {
  switch (s) {
    case Sequencing::linear: return "linear";
    case Sequencing::rotational: return "rotational";
    case Sequencing::none: return "none";
  }
  return "none";
}

inline PartialSums partial_sums(const Ordering& ordering, const GroupConfig& g) {
  PartialSums out;
  out.sums.reserve(ordering.size() + 1);
  out.sums.push_back({0, 0});
  for (const auto& x : ordering) {
    if (!in_group(g, x)) throw Error(ErrorKind::invalid_input, "element out of range");
    out.sums.push_back(add(g, out.sums.back(), x));
  }
  return out;
}

inline Element element_sum(const SubsetSpec& s, const GroupConfig& g) {
  Element acc{0, 0};
  for (const auto& x : s.elements) acc = add(g, acc, x);
  return acc;
}

inline Sequencing classify_sequencing(const SubsetSpec& subset, const Ordering& ordering,
                                      const GroupConfig& g) {
  {
    auto a = subset.elements;
    auto b = ordering;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw Error(ErrorKind::invalid_input, "ordering is not an arrangement of the subset");
  }
  const auto ys = partial_sums(ordering, g).sums;
  auto distinct = [](std::vector<Element> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (distinct(ys)) return Sequencing::linear;
  if (ys.back().is_zero() && distinct({ys.begin(), ys.end() - 1})) return Sequencing::rotational;
  return Sequencing::none;
}

/// Distribution of a subset's projections over Z_t.
struct TypeVector {
  std::vector<unsigned> counts;

  std::size_t modulus() const { return counts.size(); }
  unsigned total() const { return std::accumulate(counts.begin(), counts.end(), 0u); }
  unsigned operator[](std::size_t i) const { return counts[i]; }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(counts[i]);
    }
    return out;
  }

  static TypeVector parse(std::string_view text) {
    TypeVector tv;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
      try {
        tv.counts.push_back(static_cast<unsigned>(std::stoul(std::string(item))));
      } catch (const std::exception&) {
        throw Error(ErrorKind::invalid_input, "bad type vector '" + std::string(text) + "'");
      }
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return tv;
  }

  friend auto operator<=>(const TypeVector&, const TypeVector&) = default;
};

inline TypeVector type_of(const SubsetSpec& subset, std::uint64_t t) {
  TypeVector tv{std::vector<unsigned>(t, 0)};
  for (const auto& e : subset.elements) {
    if (e.second >= t) throw Error(ErrorKind::invalid_input, "element out of range");
    ++tv.counts[e.second];
  }
  return tv;
}

/// Image of a type under the automorphism i -> unit * i of Z_t.
inline TypeVector scale_type(const TypeVector& tv, std::uint64_t unit) {
  const auto t = tv.modulus();
  TypeVector out{std::vector<unsigned>(t, 0)};
  for (std::size_t i = 0; i < t; ++i) out.counts[(unit * i) % t] = tv.counts[i];
  return out;
}

/// Canonical representative of the unit orbit: the lexicographically
/// largest image, i.e. the one listed first by enumerate_types.
inline TypeVector canonical_type(const TypeVector& tv) {
  const auto t = tv.modulus();
  TypeVector best = tv;
  for (std::uint64_t u = 1; u < t; ++u) {
    if (std::gcd(u, static_cast<std::uint64_t>(t)) != 1) continue;
    auto img = scale_type(tv, u);
    if (img > best) best = std::move(img);
  }
  return best;
}

struct TypeEntry {
  TypeVector type;
  TypeVector canonical;

  bool is_representative() const { return type == canonical; }
};

/// All compositions of k into t parts, in descending lexicographic order
/// ((k,0,...,0) first), each paired with its unit-orbit representative.
inline std::vector<TypeEntry> enumerate_types(unsigned k, std::uint64_t t) {
  if (t < 1) throw Error(ErrorKind::invalid_input, "t must be at least 1");
  std::vector<TypeEntry> out;
  std::vector<unsigned> cur(t, 0);
  auto rec = [&](auto&& self, std::size_t idx, unsigned left) -> void {
    if (idx + 1 == t) {
      cur[idx] = left;
      TypeVector tv{cur};
      out.push_back({tv, canonical_type(tv)});
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      cur[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

inline std::vector<TypeVector> type_representatives(unsigned k, std::uint64_t t) {
  std::vector<TypeVector> reps;
  for (auto& e : enumerate_types(k, t))
    if (e.is_representative()) reps.push_back(std::move(e.type));
  return reps;
}

}  // namespace nullseq
