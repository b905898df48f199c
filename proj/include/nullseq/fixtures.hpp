#pragma once

// Published reference coefficients: the k = 10, t = 2 case table and the
// prime-order (t = 1) coefficients for k = 11 and k = 12. None of these rows
// fix any variable; variables missing from a monomial have exponent zero.

#include <string>
#include <vector>

#include "nullseq/factorize.hpp"
#include "nullseq/group_core.hpp"

namespace nullseq {

struct FixtureMonomial {
  std::vector<unsigned> exponents;
  std::string factorization;  // in the report format, e.g. "-2^2"
  bool sign_known = true;     // false when only |c| was published

  mpz_class coefficient() const { return Factorization::parse(factorization).value(); }
};

struct FixtureEntry {
  std::vector<unsigned> a;
  unsigned degree = 0;
  std::vector<FixtureMonomial> monomials;
};

struct FixtureRow {
  TypeVector lambda;
  std::vector<FixtureEntry> entries;
  bool heavy = false;  // needs the extended budget (days on a workstation)
};

inline std::vector<FixtureRow> table1_rows() {
  using V = std::vector<unsigned>;
  return {
      {{{10, 0}},
       {{V(10, 0), 89,
         {{{8, 9, 9, 9, 9, 9, 9, 9, 9, 9}, "+2^5*7*11^2*21966239"},
          {{9, 8, 9, 9, 9, 9, 9, 9, 9, 9}, "+2*13*211*256046627"}}}},
       true},
      {{{9, 1}}, {{{0, 0, 0, 0, 0, 1, 0, 0, 0, 0}, 52, {{{0, 2, 4, 7, 8, 0, 7, 8, 8, 8}, "-2^2"}}}}},
      {{{8, 2}}, {{{0, 1, 0, 0, 0, 0, 1, 0, 0, 0}, 45, {{{1, 0, 1, 7, 7, 7, 1, 7, 7, 7}, "-2*3*7"}}}}},
      {{{7, 3}}, {{{0, 0, 0, 0, 1, 0, 0, 0, 1, 1}, 42, {{{0, 6, 6, 6, 2, 6, 6, 6, 2, 2}, "-2*3*7"}}}}},
      {{{6, 4}}, {{{0, 0, 0, 1, 0, 0, 0, 1, 1, 1}, 39, {{{5, 5, 5, 3, 5, 5, 3, 3, 3, 2}, "+2*5"}}}}},
      {{{5, 5}},
       {{{0, 0, 0, 1, 0, 0, 1, 1, 1, 1}, 40, {{V(10, 4), "+2^2*157"}}},
        {{0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 40, {{V(10, 4), "+5*19*41*83"}}}}},
      {{{4, 6}},
       {{{0, 1, 0, 1, 1, 1, 1, 0, 1, 0},
         41,
         {{{2, 5, 3, 5, 5, 5, 5, 3, 5, 3}, "+2^4*3*5*13"}, {{3, 4, 3, 5, 5, 5, 5, 3, 5, 3}, "+2*3*463"}}}}},
      {{{3, 7}}, {{{0, 0, 1, 0, 1, 1, 1, 1, 1, 1}, 46, {{{0, 2, 6, 2, 6, 6, 6, 6, 6, 6}, "-2^3*3^2"}}}}},
      {{{2, 8}},
       {{{0, 1, 0, 1, 1, 1, 1, 1, 1, 1},
         51,
         {{{1, 1, 1, 6, 7, 7, 7, 7, 7, 7}, "-2*1277"}, {{1, 0, 1, 7, 7, 7, 7, 7, 7, 7}, "-2*17^2"}}}}},
      {{{1, 9}},
       {{{1, 0, 1, 1, 1, 1, 1, 1, 1, 1},
         60,
         {{{2, 0, 2, 8, 8, 8, 8, 8, 8, 8}, "+2*17^2"}, {{2, 0, 3, 7, 8, 8, 8, 8, 8, 8}, "+2^2*647"}}}}},
      {{{0, 10}},
       {{V(10, 1),
         69,
         {{{2, 2, 4, 7, 9, 9, 9, 9, 9, 9}, "+2*3*733"}, {{2, 2, 4, 9, 7, 9, 9, 9, 9, 9}, "+2^5*3^2*5"}}}}},
  };
}

inline std::vector<FixtureRow> prime_case_rows() {
  using V = std::vector<unsigned>;
  auto lowered = [](unsigned k, unsigned top, unsigned pos) {
    V e(k, top);
    e[pos] = top - 1;
    return e;
  };
  return {
      {{{11}},
       {{V(11, 0), 109,
         {{lowered(11, 10, 0), "-2^3*5*11*3019*13647452681"},
          {lowered(11, 10, 1), "-2^3*3^2*644208651072689"}}}},
       true},
      {{{12}},
       {{V(12, 0), 131,
         {{lowered(12, 11, 0), "+2^4*3*29*12953077208391719881", false},
          {lowered(12, 11, 1), "+2^3*3*277*1901*786640832519761", false}}}},
       true},
  };
}

}  // namespace nullseq
