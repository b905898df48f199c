#pragma once

// Line-delimited report records. Every record is one flat JSON object:
// big integers are decimal strings, exponent vectors and sequences are
// comma-separated, and lists of those are joined with ';'.

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nullseq/applicability.hpp"
#include "nullseq/certificate.hpp"
#include "nullseq/error.hpp"
#include "nullseq/oracle.hpp"
#include "nullseq/quotient_search.hpp"

#ifndef NULLSEQ_VERSION
#define NULLSEQ_VERSION "1.0.0"
#endif

namespace nullseq {

using Record = nlohmann::ordered_json;

inline constexpr std::string_view kEngineName = "nullseq " NULLSEQ_VERSION;

/// Single coefficient job.
struct CoefficientResult {
  TypeVector lambda;
  std::vector<unsigned> a;
  FixedAssignment fixes;
  Variant variant = Variant::p;
  unsigned degree = 0;
  ExponentVector monomial;
  mpz_class coefficient;

  friend bool operator==(const CoefficientResult&, const CoefficientResult&) = default;
};

/// One line of a quotient search.
struct QuotientRow {
  unsigned rank = 0;
  ScoredSequencing scored;
  bool exhaustive = true;
};

/// One fixture comparison.
struct FixtureCheck {
  TypeVector lambda;
  std::vector<unsigned> a;
  ExponentVector monomial;
  mpz_class expected;
  bool sign_known = true;
  std::optional<mpz_class> computed;  // nullopt when skipped
  std::string status;                 // match | mismatch | skipped | error: ...

  friend bool operator==(const FixtureCheck&, const FixtureCheck&) = default;
};

namespace detail {

inline std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  for (;;) {
    const auto at = text.find(sep, pos);
    out.emplace_back(text.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos));
    if (at == std::string_view::npos) break;
    pos = at + 1;
  }
  return out;
}

template <class T>
std::string join_numbers(const std::vector<T>& v) {
  std::vector<std::string> s;
  s.reserve(v.size());
  for (const auto& x : v) {
    if constexpr (std::is_same_v<T, mpz_class>)
      s.push_back(x.get_str());
    else
      s.push_back(std::to_string(x));
  }
  return join(s, ',');
}

inline std::vector<std::uint64_t> parse_u64s(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (const auto& s : split(text, ',')) out.push_back(std::stoull(s));
  return out;
}

inline std::vector<mpz_class> parse_mpzs(std::string_view text) {
  std::vector<mpz_class> out;
  for (const auto& s : split(text, ',')) out.emplace_back(s);
  return out;
}

inline Record header(std::string_view kind) {
  Record r;
  r["record"] = kind;
  r["engine"] = kEngineName;
  return r;
}

inline void expect_kind(const Record& r, std::string_view kind) {
  if (!r.is_object() || !r.contains("record") || r["record"].get<std::string>() != kind)
    throw Error(ErrorKind::invalid_input, "expected a '" + std::string(kind) + "' record");
}

inline std::string str(const Record& r, const char* key) { return r.at(key).get<std::string>(); }

inline std::string element_string(const std::vector<Element>& elems) {
  std::vector<std::string> s;
  for (const auto& e : elems) s.push_back(std::to_string(e.first) + ":" + std::to_string(e.second));
  return join(s, ',');
}

inline std::vector<Element> parse_elements(std::string_view text) {
  std::vector<Element> out;
  for (const auto& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::invalid_input, "bad element '" + item + "'");
    out.push_back({std::stoull(item.substr(0, colon)), std::stoull(item.substr(colon + 1))});
  }
  return out;
}

}  // namespace detail

// --- certificates and case reports ----------------------------------------

inline Record to_record(const Certificate& c) {
  using namespace detail;
  Record r = header("certificate");
  r["k"] = c.lambda.total();
  r["t"] = c.lambda.modulus();
  r["lambda"] = c.lambda.to_string();
  r["a"] = c.qs.a_string();
  r["r"] = c.qs.r ? std::to_string(*c.qs.r) : std::string{};
  r["max_multiplicity"] = c.qs.max_multiplicity;
  r["fixes"] = c.fixes.to_string();
  r["degree"] = c.degree;
  r["bound"] = join_numbers(c.bound.exponents);
  std::vector<std::string> monos, coeffs, facts, probable;
  for (const auto& e : c.entries) {
    monos.push_back(e.monomial.to_string());
    coeffs.push_back(e.coefficient.get_str());
    facts.push_back(e.factorization.to_string());
    probable.push_back(e.factorization.probable ? "1" : "0");
  }
  r["monomials"] = join(monos, ';');
  r["coefficients"] = join(coeffs, ';');
  r["factorizations"] = join(facts, ';');
  r["probable"] = join(probable, ';');
  r["exceptional_primes"] = join_numbers(c.exceptional_primes);
  r["trivial"] = c.trivial;
  r["validity"] = c.validity_condition();
  return r;
}

inline Certificate certificate_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "certificate");
  Certificate c;
  c.lambda = TypeVector::parse(str(r, "lambda"));
  const auto rs = str(r, "r");
  std::optional<unsigned> bound_r;
  if (!rs.empty()) bound_r = static_cast<unsigned>(std::stoul(rs));
  c.qs = validate_quotient(parse_sequence(str(r, "a")), c.lambda, bound_r);
  c.fixes = FixedAssignment::parse(str(r, "fixes"));
  c.degree = r.at("degree").get<unsigned>();
  c.bound.exponents = parse_sequence(str(r, "bound"));
  const auto monos = split(str(r, "monomials"), ';');
  const auto coeffs = split(str(r, "coefficients"), ';');
  const auto facts = split(str(r, "factorizations"), ';');
  const auto probable = split(str(r, "probable"), ';');
  if (coeffs.size() != monos.size() || facts.size() != monos.size() || probable.size() != monos.size())
    throw Error(ErrorKind::invalid_input, "certificate entry lists differ in length");
  for (std::size_t i = 0; i < monos.size(); ++i) {
    CertificateEntry e{ExponentVector::parse(monos[i]), mpz_class(coeffs[i]), Factorization::parse(facts[i])};
    e.factorization.probable = probable[i] == "1";
    c.entries.push_back(std::move(e));
  }
  c.exceptional_primes = parse_mpzs(str(r, "exceptional_primes"));
  c.trivial = r.at("trivial").get<bool>();
  return c;
}

inline Record to_record(const UnresolvedType& u) {
  Record r = detail::header("unresolved");
  r["k"] = u.lambda.total();
  r["t"] = u.lambda.modulus();
  r["lambda"] = u.lambda.to_string();
  r["reason"] = u.reason;
  return r;
}

inline UnresolvedType unresolved_from_record(const Record& r) {
  detail::expect_kind(r, "unresolved");
  return {TypeVector::parse(detail::str(r, "lambda")), detail::str(r, "reason")};
}

/// Summary line followed by one line per certified or unresolved type.
inline std::vector<Record> to_records(const CaseReport& rep) {
  std::vector<Record> out;
  Record r = detail::header("case");
  r["k"] = rep.k;
  r["t"] = rep.t;
  r["types"] = rep.certified.size() + rep.unresolved.size();
  r["certified"] = rep.certified.size();
  r["unresolved"] = rep.unresolved.size();
  r["complete"] = rep.complete;
  out.push_back(std::move(r));
  for (const auto& c : rep.certified) out.push_back(to_record(c));
  for (const auto& u : rep.unresolved) out.push_back(to_record(u));
  return out;
}

inline CaseReport case_from_records(const std::vector<Record>& records) {
  if (records.empty()) throw Error(ErrorKind::invalid_input, "no records");
  detail::expect_kind(records.front(), "case");
  CaseReport rep;
  rep.k = records.front().at("k").get<unsigned>();
  rep.t = records.front().at("t").get<std::uint64_t>();
  rep.complete = records.front().at("complete").get<bool>();
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto kind = detail::str(records[i], "record");
    if (kind == "certificate")
      rep.certified.push_back(certificate_from_record(records[i]));
    else if (kind == "unresolved")
      rep.unresolved.push_back(unresolved_from_record(records[i]));
    else
      throw Error(ErrorKind::invalid_input, "unexpected record '" + kind + "' in a case report");
  }
  const auto expected = records.front().at("types").get<std::size_t>();
  if (rep.certified.size() + rep.unresolved.size() != expected)
    throw Error(ErrorKind::invalid_input, "case report is truncated");
  return rep;
}

// --- oracle ----------------------------------------------------------------

inline Record to_record(const ScanReport& s) {
  using namespace detail;
  Record r = header("scan");
  r["n"] = s.n;
  r["k"] = s.k;
  r["mode"] = s.mode.kind == ScanMode::exhaustive ? "exhaustive" : "sample";
  r["sample_count"] = s.mode.count;
  r["seed"] = s.mode.seed;
  r["reduce_symmetry"] = s.reduce_symmetry;
  r["subsets"] = s.subsets;
  r["searches"] = s.searches;
  r["failure_count"] = s.failures.size();
  std::vector<std::string> f;
  for (const auto& sub : s.failures) f.push_back(join_numbers(sub));
  r["failures"] = join(f, ';');
  r["complete"] = s.complete;
  return r;
}

inline ScanReport scan_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "scan");
  ScanReport s;
  s.n = r.at("n").get<std::uint64_t>();
  s.k = r.at("k").get<unsigned>();
  s.mode.kind = str(r, "mode") == "sample" ? ScanMode::sample : ScanMode::exhaustive;
  s.mode.count = r.at("sample_count").get<std::uint64_t>();
  s.mode.seed = r.at("seed").get<std::uint64_t>();
  s.reduce_symmetry = r.at("reduce_symmetry").get<bool>();
  s.subsets = r.at("subsets").get<std::uint64_t>();
  s.searches = r.at("searches").get<std::uint64_t>();
  for (const auto& sub : split(str(r, "failures"), ';')) s.failures.push_back(parse_u64s(sub));
  s.complete = r.at("complete").get<bool>();
  return s;
}

inline Record to_record(const VerifyReport& v) {
  using namespace detail;
  Record r = header("verify");
  r["p"] = v.p;
  r["t"] = v.t;
  r["lambda"] = v.lambda.to_string();
  r["a"] = join_numbers(v.a);
  r["subsets"] = v.subsets;
  r["failure_count"] = v.failure_count;
  std::vector<std::string> f;
  for (const auto& sub : v.failures) f.push_back(element_string(sub));
  r["failures"] = join(f, ';');
  r["passed"] = v.passed();
  return r;
}

inline VerifyReport verify_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "verify");
  VerifyReport v;
  v.p = r.at("p").get<std::uint64_t>();
  v.t = r.at("t").get<std::uint64_t>();
  v.lambda = TypeVector::parse(str(r, "lambda"));
  v.a = parse_sequence(str(r, "a"));
  v.subsets = r.at("subsets").get<std::uint64_t>();
  v.failure_count = r.at("failure_count").get<std::uint64_t>();
  for (const auto& sub : split(str(r, "failures"), ';')) v.failures.push_back(parse_elements(sub));
  return v;
}

// --- applicability -----------------------------------------------------------

inline Record to_record(const ApplicabilityReport& a) {
  using namespace detail;
  Record r = header("applicability");
  r["n"] = a.n.get_str();
  r["k"] = a.k;
  r["threshold"] = a.threshold.get_str();
  r["verdict"] = to_string(a.verdict);
  r["subset_given"] = a.subset_given;
  std::vector<std::string> src, item, m, t, status, caveat;
  for (const auto& it : a.items) {
    if (it.caveat.find(';') != std::string::npos)
      throw Error(ErrorKind::invalid_input, "caveat text may not contain ';'");
    src.push_back(it.source);
    item.push_back(std::to_string(it.item));
    m.push_back(it.m.get_str());
    t.push_back(std::to_string(it.t));
    status.emplace_back(to_string(it.status));
    caveat.push_back(it.caveat);
  }
  r["item_source"] = join(src, ';');
  r["item_number"] = join(item, ';');
  r["item_m"] = join(m, ';');
  r["item_t"] = join(t, ';');
  r["item_status"] = join(status, ';');
  r["item_caveat"] = join(caveat, ';');
  return r;
}

inline ApplicabilityReport applicability_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "applicability");
  ApplicabilityReport a;
  a.n = mpz_class(str(r, "n"));
  a.k = r.at("k").get<unsigned>();
  a.threshold = mpz_class(str(r, "threshold"));
  a.verdict = parse_verdict(str(r, "verdict"));
  a.subset_given = r.at("subset_given").get<bool>();
  const auto src = split(str(r, "item_source"), ';');
  const auto item = split(str(r, "item_number"), ';');
  const auto m = split(str(r, "item_m"), ';');
  const auto t = split(str(r, "item_t"), ';');
  const auto status = split(str(r, "item_status"), ';');
  // Trailing empty caveats vanish under split(); pad them back.
  auto caveat = split(str(r, "item_caveat"), ';');
  if (caveat.empty() && !src.empty()) caveat.assign(src.size(), "");
  if (item.size() != src.size() || m.size() != src.size() || t.size() != src.size() ||
      status.size() != src.size() || caveat.size() != src.size())
    throw Error(ErrorKind::invalid_input, "applicability item lists differ in length");
  for (std::size_t i = 0; i < src.size(); ++i)
    a.items.push_back({src[i], static_cast<unsigned>(std::stoul(item[i])), mpz_class(m[i]),
                       std::stoull(t[i]), parse_coverage(status[i]), caveat[i]});
  return a;
}

// --- single jobs -------------------------------------------------------------

inline Record to_record(const CoefficientResult& c) {
  Record r = detail::header("coefficient");
  r["k"] = c.lambda.total();
  r["t"] = c.lambda.modulus();
  r["lambda"] = c.lambda.to_string();
  r["a"] = detail::join_numbers(c.a);
  r["variant"] = c.variant == Variant::p ? "p" : "q";
  r["fixes"] = c.fixes.to_string();
  r["degree"] = c.degree;
  r["monomial"] = c.monomial.to_string();
  r["coefficient"] = c.coefficient.get_str();
  r["factorization"] = c.coefficient == 0 ? std::string("0") : factorize(c.coefficient).to_string();
  return r;
}

inline CoefficientResult coefficient_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "coefficient");
  CoefficientResult c;
  c.lambda = TypeVector::parse(str(r, "lambda"));
  c.a = parse_sequence(str(r, "a"));
  c.variant = str(r, "variant") == "q" ? Variant::q : Variant::p;
  c.fixes = FixedAssignment::parse(str(r, "fixes"));
  c.degree = r.at("degree").get<unsigned>();
  c.monomial = ExponentVector::parse(str(r, "monomial"));
  c.coefficient = mpz_class(str(r, "coefficient"));
  return c;
}

inline Record to_record(const QuotientRow& q) {
  Record r = detail::header("quotient");
  r["lambda"] = TypeVector{[&] {
                  std::vector<unsigned> counts(q.scored.qs.t, 0);
                  for (auto v : q.scored.qs.a) ++counts[v];
                  return counts;
                }()}.to_string();
  r["rank"] = q.rank;
  r["a"] = q.scored.qs.a_string();
  r["b"] = detail::join_numbers(q.scored.qs.b);
  r["degree"] = q.scored.degree;
  r["bound_degree"] = q.scored.bound_degree;
  r["max_multiplicity"] = q.scored.qs.max_multiplicity;
  r["feasible"] = q.scored.feasible();
  r["exhaustive"] = q.exhaustive;
  return r;
}

inline QuotientRow quotient_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "quotient");
  QuotientRow q;
  q.rank = r.at("rank").get<unsigned>();
  q.scored.qs = validate_quotient(parse_sequence(str(r, "a")), TypeVector::parse(str(r, "lambda")));
  q.scored.degree = r.at("degree").get<unsigned>();
  q.scored.bound_degree = r.at("bound_degree").get<unsigned>();
  q.exhaustive = r.at("exhaustive").get<bool>();
  return q;
}

inline Record to_record(const FixtureCheck& f) {
  Record r = detail::header("table1");
  r["lambda"] = f.lambda.to_string();
  r["a"] = detail::join_numbers(f.a);
  r["monomial"] = f.monomial.to_string();
  r["expected"] = f.expected.get_str();
  r["sign_known"] = f.sign_known;
  r["computed"] = f.computed ? f.computed->get_str() : std::string{};
  r["status"] = f.status;
  return r;
}

inline FixtureCheck fixture_from_record(const Record& r) {
  using namespace detail;
  expect_kind(r, "table1");
  FixtureCheck f;
  f.lambda = TypeVector::parse(str(r, "lambda"));
  f.a = parse_sequence(str(r, "a"));
  f.monomial = ExponentVector::parse(str(r, "monomial"));
  f.expected = mpz_class(str(r, "expected"));
  f.sign_known = r.at("sign_known").get<bool>();
  if (const auto c = str(r, "computed"); !c.empty()) f.computed = mpz_class(c);
  f.status = str(r, "status");
  return f;
}

// --- stream plumbing -------------------------------------------------------

/// Serialises records from any thread onto one stream, one per line.
class RecordWriter {
 public:
  explicit RecordWriter(std::ostream& out) : out_(out), start_(std::chrono::steady_clock::now()) {}

  void write(Record r) {
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
    r["elapsed_ms"] = ms.count();
    std::lock_guard lock(mu_);
    out_ << r.dump() << '\n';
    out_.flush();
  }

  void restart_clock() { start_ = std::chrono::steady_clock::now(); }

 private:
  std::ostream& out_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point start_;
};

inline std::vector<Record> read_records(std::istream& in) {
  std::vector<Record> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto r = Record::parse(line);
    if (!r.is_object()) throw Error(ErrorKind::invalid_input, "record is not an object");
    for (const auto& [key, value] : r.items())
      if (value.is_structured()) throw Error(ErrorKind::invalid_input, "record field '" + key + "' is nested");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nullseq
