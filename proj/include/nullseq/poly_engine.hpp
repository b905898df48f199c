#pragma once

// Expansion of degree-1 factor lists into sparse polynomials with exact
// integer coefficients. Intermediate products keep only terms that can still
// reach the requested box of final exponents: every exponent stays below the
// upper corner (at most the bounding monomial), and with a lower corner every
// variable must still be able to catch up using the factors that remain.

#include <absl/container/flat_hash_map.h>
#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "nullseq/error.hpp"
#include "nullseq/nss_builder.hpp"

namespace nullseq {

struct ExponentVector {
  std::vector<std::uint8_t> exps;

  std::size_t size() const { return exps.size(); }
  unsigned total_degree() const {
    unsigned d = 0;
    for (auto e : exps) d += e;
    return d;
  }

  bool divides(const std::vector<unsigned>& other) const {
    if (other.size() != exps.size()) return false;
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] > other[i]) return false;
    return true;
  }

  std::vector<unsigned> as_unsigned() const { return {exps.begin(), exps.end()}; }

  static ExponentVector from(const std::vector<unsigned>& v) {
    ExponentVector e;
    e.exps.reserve(v.size());
    for (auto x : v) {
      if (x > 255) throw Error(ErrorKind::invalid_input, "exponent too large");
      e.exps.push_back(static_cast<std::uint8_t>(x));
    }
    return e;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(exps[i]);
    }
    return out;
  }

  /// x1^2*x3^2*x4*x5 style.
  std::string to_monomial_string() const {
    std::string out;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      if (!out.empty()) out += '*';
      out += "x" + std::to_string(i + 1);
      if (exps[i] > 1) out += "^" + std::to_string(exps[i]);
    }
    return out.empty() ? "1" : out;
  }

  static ExponentVector parse(std::string_view text) { return from(parse_sequence(text)); }

  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
};

struct SparsePolynomial {
  unsigned k = 0;
  std::map<ExponentVector, mpz_class> terms;

  std::size_t size() const { return terms.size(); }

  mpz_class coefficient(const ExponentVector& e) const {
    const auto it = terms.find(e);
    return it == terms.end() ? mpz_class(0) : it->second;
  }
};

inline mpz_class coefficient_of(const SparsePolynomial& poly, const ExponentVector& mono) {
  return poly.coefficient(mono);
}

/// Distributive expansion with no pruning at all. Test oracle for the engine.
inline SparsePolynomial naive_expand(const FactorList& fl) {
  if (fl.degree() > 25 || fl.k > 8)
    throw Error(ErrorKind::too_large, "naive expansion is limited to degree 25 and 8 variables");
  std::map<std::vector<std::uint8_t>, mpz_class> cur;
  cur.emplace(std::vector<std::uint8_t>(fl.k, 0), 1);
  for (const auto& f : fl.factors) {
    std::map<std::vector<std::uint8_t>, mpz_class> next;
    for (const auto& [e, c] : cur) {
      for (auto v : f.vars) {
        auto succ = e;
        ++succ[v - 1];
        if (f.sign_of(v) > 0)
          next[succ] += c;
        else
          next[succ] -= c;
      }
    }
    cur.clear();
    for (auto& [e, c] : next)
      if (c != 0) cur.emplace(e, std::move(c));
  }
  SparsePolynomial out;
  out.k = fl.k;
  for (auto& [e, c] : cur) out.terms.emplace(ExponentVector{e}, std::move(c));
  return out;
}

/// Final exponents e with lower <= e <= upper (componentwise).
struct ExponentBox {
  std::vector<unsigned> lower;
  std::vector<unsigned> upper;
};

struct EngineStats {
  std::size_t factors_done = 0;
  std::size_t total_factors = 0;
  std::size_t terms = 0;
  int coefficient_tier = 0;  // 0: int64, 1: int128, 2: GMP
};

struct EngineOptions {
  unsigned workers = 1;
  std::size_t term_cap = 200'000'000;
  // Written when the term cap aborts a job, and every `checkpoint_every`
  // multiplication steps when that is nonzero.
  std::optional<std::filesystem::path> checkpoint_path;
  std::size_t checkpoint_every = 0;
  std::optional<std::filesystem::path> resume_from;
  std::function<void(const EngineStats&)> progress;
};

// ---------------------------------------------------------------------------
// Checkpoints

struct Checkpoint {
  unsigned k = 0;
  std::uint64_t factors_done = 0;
  std::uint64_t fingerprint = 0;
  std::vector<std::pair<ExponentVector, mpz_class>> terms;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

namespace detail {

inline constexpr std::array<char, 8> kCheckpointMagic = {'N', 'S', 'Q', 'C', 'K', 'P', 'T', '1'};

template <class T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <class T>
T get_le(std::string_view& in) {
  if (in.size() < sizeof(T)) throw Error(ErrorKind::invalid_input, "truncated checkpoint");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<T>(static_cast<unsigned char>(in[i])) << (8 * i);
  in.remove_prefix(sizeof(T));
  return v;
}

}  // namespace detail

/// Header: magic, u32 version, u32 k, u64 factors multiplied, u64 term count,
/// u64 job fingerprint. Then per term a u32 length followed by k exponent
/// bytes, a sign byte (1 = negative) and the magnitude little-endian.
inline std::string encode_checkpoint(const Checkpoint& cp) {
  std::string out(detail::kCheckpointMagic.begin(), detail::kCheckpointMagic.end());
  detail::put_le<std::uint32_t>(out, 1);
  detail::put_le<std::uint32_t>(out, cp.k);
  detail::put_le<std::uint64_t>(out, cp.factors_done);
  detail::put_le<std::uint64_t>(out, cp.terms.size());
  detail::put_le<std::uint64_t>(out, cp.fingerprint);
  std::vector<unsigned char> mag;
  for (const auto& [e, c] : cp.terms) {
    if (e.size() != cp.k) throw Error(ErrorKind::invalid_input, "exponent length mismatch");
    std::size_t count = 0;
    mag.resize((mpz_sizeinbase(c.get_mpz_t(), 2) + 7) / 8 + 1);
    mpz_export(mag.data(), &count, -1, 1, -1, 0, c.get_mpz_t());
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cp.k + 1 + count));
    out.append(e.exps.begin(), e.exps.end());
    out.push_back(sgn(c) < 0 ? 1 : 0);
    out.append(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(count));
  }
  return out;
}

inline Checkpoint decode_checkpoint(std::string_view in) {
  if (in.size() < 8 || !std::equal(detail::kCheckpointMagic.begin(), detail::kCheckpointMagic.end(), in.begin()))
    throw Error(ErrorKind::invalid_input, "not a checkpoint file");
  in.remove_prefix(8);
  if (detail::get_le<std::uint32_t>(in) != 1)
    throw Error(ErrorKind::invalid_input, "unsupported checkpoint version");
  Checkpoint cp;
  cp.k = detail::get_le<std::uint32_t>(in);
  cp.factors_done = detail::get_le<std::uint64_t>(in);
  const auto count = detail::get_le<std::uint64_t>(in);
  cp.fingerprint = detail::get_le<std::uint64_t>(in);
  cp.terms.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    const auto len = detail::get_le<std::uint32_t>(in);
    if (len < cp.k + 1 || in.size() < len) throw Error(ErrorKind::invalid_input, "truncated checkpoint");
    ExponentVector e;
    e.exps.assign(in.begin(), in.begin() + cp.k);
    const bool negative = in[cp.k] != 0;
    mpz_class c;
    mpz_import(c.get_mpz_t(), len - cp.k - 1, -1, 1, -1, 0, in.data() + cp.k + 1);
    if (negative) c = -c;
    cp.terms.emplace_back(std::move(e), std::move(c));
    in.remove_prefix(len);
  }
  if (!in.empty()) throw Error(ErrorKind::invalid_input, "trailing bytes in checkpoint");
  return cp;
}

inline void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  const auto bytes = encode_checkpoint(cp);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::invalid_input, "cannot write " + tmp);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  std::filesystem::rename(tmp, path);
}

inline Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::invalid_input, "cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

// ---------------------------------------------------------------------------
// Engine internals

namespace detail {

struct CoefficientOverflow {};

/// Fixed-width coefficient that reports overflow instead of wrapping.
template <class T>
struct CheckedInt {
  T v = 0;

  bool is_zero() const { return v == 0; }
  void add(const CheckedInt& o) {
    if (__builtin_add_overflow(v, o.v, &v)) throw CoefficientOverflow{};
  }
  void sub(const CheckedInt& o) {
    if (__builtin_sub_overflow(v, o.v, &v)) throw CoefficientOverflow{};
  }
  CheckedInt negated() const {
    CheckedInt r;
    if (__builtin_sub_overflow(T(0), v, &r.v)) throw CoefficientOverflow{};
    return r;
  }
};

struct GmpCoeff {
  mpz_class v;

  bool is_zero() const { return sgn(v) == 0; }
  void add(const GmpCoeff& o) { v += o.v; }
  void sub(const GmpCoeff& o) { v -= o.v; }
  GmpCoeff negated() const { return GmpCoeff{-v}; }
};

using Coeff64 = CheckedInt<std::int64_t>;
using Coeff128 = CheckedInt<__int128>;

inline mpz_class to_mpz(std::int64_t v) {
  mpz_class r;
  mpz_set_si(r.get_mpz_t(), v);
  return r;
}

inline mpz_class to_mpz(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  const std::uint64_t words[2] = {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(m >> 64)};
  mpz_class r;
  mpz_import(r.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  return neg ? mpz_class(-r) : r;
}

inline mpz_class to_mpz(const Coeff64& c) { return to_mpz(c.v); }
inline mpz_class to_mpz(const Coeff128& c) { return to_mpz(c.v); }
inline mpz_class to_mpz(const GmpCoeff& c) { return c.v; }

template <class To>
To convert(const Coeff64& c) {
  if constexpr (std::is_same_v<To, Coeff128>) return Coeff128{c.v};
  else return GmpCoeff{to_mpz(c.v)};
}
template <class To>
To convert(const Coeff128& c) {
  return GmpCoeff{to_mpz(c.v)};
}

template <class C>
C from_mpz(const mpz_class& v) {
  if constexpr (std::is_same_v<C, GmpCoeff>) {
    return GmpCoeff{v};
  } else {
    using T = decltype(C{}.v);
    if (mpz_sizeinbase(v.get_mpz_t(), 2) + 1 >= 8 * sizeof(T)) throw CoefficientOverflow{};
    std::uint64_t buf[2] = {0, 0};
    std::size_t count = 0;
    if (sgn(v) != 0) mpz_export(buf, &count, -1, sizeof(std::uint64_t), 0, 0, v.get_mpz_t());
    const auto m = static_cast<T>((static_cast<unsigned __int128>(buf[1]) << 64) | buf[0]);
    return C{sgn(v) < 0 ? static_cast<T>(-m) : m};
  }
}

template <class C>
using TermMap = absl::flat_hash_map<std::uint64_t, C>;

inline constexpr unsigned kNibble = 4;
inline constexpr unsigned kMaxPackedVars = 16;
inline constexpr unsigned kMaxPackedExponent = 15;

inline unsigned nibble(std::uint64_t key, unsigned var) {
  return static_cast<unsigned>((key >> (kNibble * var)) & 0xF);
}

inline std::uint64_t unit(unsigned var) { return std::uint64_t{1} << (kNibble * var); }

inline std::uint64_t pack(const std::vector<std::uint8_t>& e) {
  std::uint64_t key = 0;
  for (std::size_t v = 0; v < e.size(); ++v) key |= std::uint64_t{e[v]} << (kNibble * v);
  return key;
}

inline ExponentVector unpack(std::uint64_t key, unsigned k) {
  ExponentVector e;
  e.exps.resize(k);
  for (unsigned v = 0; v < k; ++v) e.exps[v] = static_cast<std::uint8_t>(nibble(key, v));
  return e;
}

inline std::size_t shard_of(std::uint64_t key, std::size_t shards) {
  return static_cast<std::size_t>(((key * 0x9E3779B97F4A7C15ull) >> 32) % shards);
}

struct FactorPlan {
  std::vector<unsigned> vars;  // 0-based
  std::vector<int> signs;
  std::vector<unsigned> lower_after;  // lower bound on vars[n] once this factor is in
};

struct Plan {
  unsigned k = 0;
  std::vector<FactorPlan> factors;
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) factor ranges
  std::vector<unsigned> upper;
  std::uint64_t fingerprint = 0;
};

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline Plan make_plan(const FactorList& fl, const ExponentBox& box) {
  Plan plan;
  plan.k = fl.k;
  plan.upper = box.upper;
  std::vector<unsigned> remaining(fl.k, 0);
  for (const auto& f : fl.factors)
    for (auto v : f.vars) ++remaining[v - 1];

  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, fl.k);
  for (std::size_t n = 0; n < fl.factors.size(); ++n) {
    const auto& f = fl.factors[n];
    FactorPlan fp;
    h = fnv1a(h, static_cast<std::uint64_t>(f.kind) << 32 | f.step);
    for (auto v : f.vars) {
      fp.vars.push_back(v - 1);
      fp.signs.push_back(f.sign_of(v));
      h = fnv1a(h, (static_cast<std::uint64_t>(v) << 1) | (f.sign_of(v) < 0));
    }
    for (auto v : f.vars) --remaining[v - 1];
    for (auto v : fp.vars) {
      const unsigned lo = box.lower[v];
      fp.lower_after.push_back(lo > remaining[v] ? lo - remaining[v] : 0);
    }
    if (plan.groups.empty() || n == 0 || fl.factors[n - 1].step != f.step)
      plan.groups.emplace_back(n, n + 1);
    else
      plan.groups.back().second = n + 1;
    plan.factors.push_back(std::move(fp));
  }
  for (unsigned v = 0; v < fl.k; ++v) {
    h = fnv1a(h, box.lower[v]);
    h = fnv1a(h, box.upper[v]);
  }
  plan.fingerprint = h;
  return plan;
}

/// Calls emit(successor_key, sign) for each term of key * factor that can
/// still reach the box.
template <class Emit>
inline void successors(std::uint64_t key, const FactorPlan& f, const std::vector<unsigned>& upper,
                       Emit&& emit) {
  int deficit = -1;
  for (std::size_t n = 0; n < f.vars.size(); ++n) {
    if (nibble(key, f.vars[n]) < f.lower_after[n]) {
      if (deficit >= 0) return;  // two variables behind, one factor cannot fix both
      deficit = static_cast<int>(n);
    }
  }
  if (deficit >= 0) {
    const auto n = static_cast<std::size_t>(deficit);
    if (nibble(key, f.vars[n]) < upper[f.vars[n]]) emit(key + unit(f.vars[n]), f.signs[n]);
    return;
  }
  for (std::size_t n = 0; n < f.vars.size(); ++n)
    if (nibble(key, f.vars[n]) < upper[f.vars[n]]) emit(key + unit(f.vars[n]), f.signs[n]);
}

/// Multiplies one term through the factors [begin, end) of a group.
template <class Emit>
inline void expand_group(std::uint64_t key, const Plan& plan, std::size_t begin, std::size_t end,
                         Emit&& emit) {
  if (end - begin == 1) {
    successors(key, plan.factors[begin], plan.upper, emit);
    return;
  }
  if (end - begin == 2) {
    successors(key, plan.factors[begin], plan.upper, [&](std::uint64_t k1, int s1) {
      successors(k1, plan.factors[begin + 1], plan.upper,
                 [&](std::uint64_t k2, int s2) { emit(k2, s1 * s2); });
    });
    return;
  }
  thread_local std::vector<std::pair<std::uint64_t, int>> cur, next;
  cur.assign(1, {key, 1});
  for (std::size_t f = begin; f < end; ++f) {
    next.clear();
    for (const auto& [k1, s1] : cur)
      successors(k1, plan.factors[f], plan.upper,
                 [&](std::uint64_t k2, int s2) { next.emplace_back(k2, s1 * s2); });
    cur.swap(next);
  }
  for (const auto& [k2, s2] : cur) emit(k2, s2);
}

struct TermCapHit {};

template <class C>
struct State {
  std::vector<TermMap<C>> shards;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& s : shards) n += s.size();
    return n;
  }
};

template <class C>
inline void accumulate(TermMap<C>& into, std::uint64_t key, const C& c, int sign) {
  auto [it, inserted] = into.try_emplace(key);
  if (sign > 0)
    it->second.add(c);
  else
    it->second.sub(c);
}

template <class C>
State<C> step(const State<C>& cur, const Plan& plan, std::size_t begin, std::size_t end,
              std::size_t term_cap) {
  const std::size_t workers = cur.shards.size();
  State<C> next;
  next.shards.resize(workers);
  if (workers == 1) {
    auto& out = next.shards[0];
    out.reserve(cur.shards[0].size());
    for (const auto& [key, c] : cur.shards[0]) {
      if (c.is_zero()) continue;
      expand_group(key, plan, begin, end, [&](std::uint64_t k2, int s) { accumulate(out, k2, c, s); });
      if (out.size() > term_cap) throw TermCapHit{};
    }
    return next;
  }

  // Phase 1: each worker expands its own shard into per-destination buffers.
  // Phase 2: each worker merges the buffers addressed to its shard.
  std::vector<std::vector<std::vector<std::pair<std::uint64_t, C>>>> buffers(
      workers, std::vector<std::vector<std::pair<std::uint64_t, C>>>(workers));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](auto&& body) {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          body(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    threads.clear();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  };
  run([&](std::size_t w) {
    for (const auto& [key, c] : cur.shards[w]) {
      if (c.is_zero()) continue;
      expand_group(key, plan, begin, end, [&](std::uint64_t k2, int s) {
        buffers[w][shard_of(k2, workers)].emplace_back(k2, s > 0 ? c : c.negated());
      });
    }
  });
  run([&](std::size_t d) {
    auto& out = next.shards[d];
    for (std::size_t w = 0; w < workers; ++w) {
      for (const auto& [key, c] : buffers[w][d]) accumulate(out, key, c, 1);
      buffers[w][d] = {};
      if (out.size() * workers > term_cap) throw TermCapHit{};
    }
  });
  return next;
}

template <class To, class From>
State<To> promote(const State<From>& s) {
  State<To> out;
  out.shards.resize(s.shards.size());
  for (std::size_t w = 0; w < s.shards.size(); ++w) {
    out.shards[w].reserve(s.shards[w].size());
    for (const auto& [key, c] : s.shards[w]) out.shards[w].emplace(key, convert<To>(c));
  }
  return out;
}

using AnyState = std::variant<State<Coeff64>, State<Coeff128>, State<GmpCoeff>>;

template <class C>
Checkpoint snapshot(const State<C>& s, const Plan& plan, std::size_t factors_done) {
  Checkpoint cp;
  cp.k = plan.k;
  cp.factors_done = factors_done;
  cp.fingerprint = plan.fingerprint;
  for (const auto& shard : s.shards)
    for (const auto& [key, c] : shard)
      if (!c.is_zero()) cp.terms.emplace_back(unpack(key, plan.k), to_mpz(c));
  std::sort(cp.terms.begin(), cp.terms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return cp;
}

template <class C>
State<C> load(const Checkpoint& cp, std::size_t workers) {
  State<C> s;
  s.shards.resize(workers);
  for (const auto& [e, c] : cp.terms) {
    const auto key = pack(e.exps);
    s.shards[shard_of(key, workers)].emplace(key, from_mpz<C>(c));
  }
  return s;
}

inline AnyState load_any(const Checkpoint& cp, std::size_t workers) {
  try {
    return load<Coeff64>(cp, workers);
  } catch (const CoefficientOverflow&) {
  }
  try {
    return load<Coeff128>(cp, workers);
  } catch (const CoefficientOverflow&) {
  }
  return load<GmpCoeff>(cp, workers);
}

}  // namespace detail

/// Product of the factors restricted to final exponents inside `box`.
/// Returns exactly the top-degree terms e with box.lower <= e <= box.upper.
inline SparsePolynomial multiply_in_box(const FactorList& fl, const ExponentBox& box,
                                        const EngineOptions& opts = {}) {
  using namespace detail;
  const unsigned k = fl.k;
  if (k > kMaxPackedVars) throw Error(ErrorKind::too_large, "at most 16 variables are supported");
  if (box.lower.size() != k || box.upper.size() != k)
    throw Error(ErrorKind::invalid_input, "box has wrong number of variables");
  for (unsigned v = 0; v < k; ++v) {
    if (box.upper[v] > kMaxPackedExponent)
      throw Error(ErrorKind::too_large, "exponents above 15 are not supported");
    if (box.lower[v] > box.upper[v]) throw Error(ErrorKind::invalid_input, "empty exponent box");
  }
  SparsePolynomial result;
  result.k = k;

  const Plan plan = make_plan(fl, box);
  {
    // Any variable that must reach more than the factors can give is hopeless.
    std::vector<unsigned> total(k, 0);
    for (const auto& f : plan.factors)
      for (auto v : f.vars) ++total[v];
    unsigned lower_sum = 0, upper_sum = 0;
    for (unsigned v = 0; v < k; ++v) {
      if (box.lower[v] > total[v]) return result;
      lower_sum += box.lower[v];
      upper_sum += box.upper[v];
    }
    if (lower_sum > fl.degree() || upper_sum < fl.degree()) return result;
  }

  const std::size_t workers = std::max(1u, opts.workers);
  std::size_t group = 0;
  std::size_t factors_done = 0;
  AnyState state;
  if (opts.resume_from) {
    const auto cp = read_checkpoint(*opts.resume_from);
    if (cp.fingerprint != plan.fingerprint || cp.k != k)
      throw Error(ErrorKind::invalid_input, "checkpoint belongs to a different job");
    factors_done = cp.factors_done;
    while (group < plan.groups.size() && plan.groups[group].first < factors_done) ++group;
    if (group < plan.groups.size() && plan.groups[group].first != factors_done)
      throw Error(ErrorKind::invalid_input, "checkpoint is not at a step boundary");
    state = load_any(cp, workers);
  } else {
    State<Coeff64> init;
    init.shards.resize(workers);
    init.shards[shard_of(0, workers)].emplace(0, Coeff64{1});
    state = std::move(init);
  }

  auto save = [&](std::size_t done) {
    if (!opts.checkpoint_path) return;
    std::visit([&](const auto& s) { write_checkpoint(*opts.checkpoint_path, snapshot(s, plan, done)); },
               state);
  };

  std::size_t steps_since_save = 0;
  for (; group < plan.groups.size(); ++group) {
    const auto [begin, end] = plan.groups[group];
    for (;;) {
      try {
        state = std::visit(
            [&](const auto& s) -> AnyState { return step(s, plan, begin, end, opts.term_cap); }, state);
        break;
      } catch (const CoefficientOverflow&) {
        if (auto* s64 = std::get_if<State<Coeff64>>(&state))
          state = promote<Coeff128>(*s64);
        else if (auto* s128 = std::get_if<State<Coeff128>>(&state))
          state = promote<GmpCoeff>(*s128);
        else
          throw;
      } catch (const TermCapHit&) {
        save(begin);
        throw Error(ErrorKind::budget_exceeded,
                    "term cap of " + std::to_string(opts.term_cap) + " exceeded at factor " +
                        std::to_string(begin) + " of " + std::to_string(plan.factors.size()) +
                        (opts.checkpoint_path ? "; checkpoint written to " + opts.checkpoint_path->string()
                                              : std::string{}));
      }
    }
    factors_done = end;
    if (opts.progress) {
      EngineStats st;
      st.factors_done = factors_done;
      st.total_factors = plan.factors.size();
      st.terms = std::visit([](const auto& s) { return s.size(); }, state);
      st.coefficient_tier = static_cast<int>(state.index());
      opts.progress(st);
    }
    if (opts.checkpoint_every && ++steps_since_save >= opts.checkpoint_every) {
      save(factors_done);
      steps_since_save = 0;
    }
  }

  std::visit(
      [&](const auto& s) {
        for (const auto& shard : s.shards)
          for (const auto& [key, c] : shard)
            if (!c.is_zero()) result.terms.emplace(unpack(key, k), to_mpz(c));
      },
      state);
  return result;
}

/// Product of all factors restricted to terms dividing `bound`; with a target
/// only that monomial's coefficient is carried to the end.
inline SparsePolynomial multiply_factors(const FactorList& fl, const BoundingMonomial& bound,
                                         const std::optional<ExponentVector>& target = std::nullopt,
                                         const EngineOptions& opts = {}) {
  if (bound.exponents.size() != fl.k)
    throw Error(ErrorKind::invalid_input, "bounding monomial has wrong number of variables");
  if (fl.degree() > bound.total_degree())
    throw Error(ErrorKind::infeasible, "polynomial degree " + std::to_string(fl.degree()) +
                                           " exceeds bounding degree " +
                                           std::to_string(bound.total_degree()));
  ExponentBox box;
  if (target) {
    if (!target->divides(bound.exponents))
      throw Error(ErrorKind::infeasible, "target does not divide the bounding monomial");
    if (target->total_degree() != fl.degree())
      throw Error(ErrorKind::infeasible, "target degree differs from polynomial degree");
    box.lower = target->as_unsigned();
    box.upper = box.lower;
  } else {
    box.lower.assign(fl.k, 0);
    box.upper = bound.exponents;
  }
  return multiply_in_box(fl, box, opts);
}

}  // namespace nullseq
