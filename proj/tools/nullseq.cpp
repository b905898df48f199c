// nullseq command-line frontend. Every subcommand writes line-delimited
// records to stdout (or -o FILE). Exit status: 0 success, 1 unresolved or
// failed, 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nullseq/applicability.hpp"
#include "nullseq/certificate.hpp"
#include "nullseq/fixtures.hpp"
#include "nullseq/nss_builder.hpp"
#include "nullseq/oracle.hpp"
#include "nullseq/poly_engine.hpp"
#include "nullseq/quotient_search.hpp"
#include "nullseq/report.hpp"

namespace fs = std::filesystem;
using namespace nullseq;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Settings resolved as defaults < config file < environment < flags.
struct Settings {
  unsigned workers = 1;
  std::size_t term_cap = 200'000'000;
  std::optional<fs::path> checkpoint_dir;
  std::size_t checkpoint_every = 0;
  std::uint64_t search_limit = 4;
  std::uint64_t search_budget = 1'000'000;
  std::uint64_t scan_budget = 50'000'000;
  std::uint64_t verify_budget = 20'000'000;
};

struct Flags {
  std::string config;
  std::optional<unsigned> workers;
  std::optional<std::size_t> term_cap;
  std::optional<std::string> checkpoint_dir;
  std::optional<std::size_t> checkpoint_every;
  std::optional<std::uint64_t> search_limit;
  std::optional<std::uint64_t> search_budget;
  bool resume = false;
  bool progress = false;
  std::string output;
};

Settings resolve(const Flags& f) {
  Settings s;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw Error(ErrorKind::invalid_input, "cannot open config " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::invalid_input, std::string("bad config: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::invalid_input, "config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (key == "workers") s.workers = v.get<unsigned>();
      else if (key == "term_cap") s.term_cap = v.get<std::size_t>();
      else if (key == "checkpoint_dir") s.checkpoint_dir = v.get<std::string>();
      else if (key == "checkpoint_every") s.checkpoint_every = v.get<std::size_t>();
      else if (key == "search_limit") s.search_limit = v.get<std::uint64_t>();
      else if (key == "search_budget") s.search_budget = v.get<std::uint64_t>();
      else if (key == "scan_budget") s.scan_budget = v.get<std::uint64_t>();
      else if (key == "verify_budget") s.verify_budget = v.get<std::uint64_t>();
      else throw Error(ErrorKind::invalid_input, "unknown config key '" + key + "'");
    }
  }
  if (const char* w = std::getenv("NULLSEQ_WORKERS"); w && *w) {
    try {
      s.workers = static_cast<unsigned>(std::stoul(w));
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_input, "NULLSEQ_WORKERS is not a number");
    }
  }
  if (const char* d = std::getenv("NULLSEQ_CHECKPOINT_DIR"); d && *d) s.checkpoint_dir = d;
  if (f.workers) s.workers = *f.workers;
  if (f.term_cap) s.term_cap = *f.term_cap;
  if (f.checkpoint_dir) s.checkpoint_dir = *f.checkpoint_dir;
  if (f.checkpoint_every) s.checkpoint_every = *f.checkpoint_every;
  if (f.search_limit) s.search_limit = *f.search_limit;
  if (f.search_budget) s.search_budget = *f.search_budget;
  if (s.workers == 0) s.workers = 1;
  return s;
}

EngineOptions engine_options(const Settings& s, const Flags& f, const std::string& job) {
  EngineOptions e;
  e.workers = s.workers;
  e.term_cap = s.term_cap;
  if (s.checkpoint_dir) {
    fs::create_directories(*s.checkpoint_dir);
    const auto path = *s.checkpoint_dir / (job + ".ckpt");
    e.checkpoint_path = path;
    e.checkpoint_every = s.checkpoint_every;
    if (f.resume && fs::exists(path)) e.resume_from = path;
  }
  if (f.progress) {
    e.progress = [job](const EngineStats& st) {
      std::cerr << job << ": " << st.factors_done << "/" << st.total_factors << " factors, " << st.terms
                << " terms, tier " << st.coefficient_tier << "\n";
    };
  }
  return e;
}

std::string job_name(std::string prefix, const std::vector<unsigned>& a, const FixedAssignment& fixes,
                     const ExponentVector& mono) {
  for (auto v : a) prefix += std::to_string(v);
  prefix += "-f" + fixes.to_string() + "-m" + mono.to_string();
  for (auto& c : prefix)
    if (c == ',') c = '_';
  return prefix;
}

void drop_checkpoint(const EngineOptions& e) {
  if (e.checkpoint_path) fs::remove(*e.checkpoint_path);
}

bool is_usage_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input:
    case ErrorKind::type_mismatch:
    case ErrorKind::not_a_quotient_sequencing:
    case ErrorKind::invalid_fixing:
    case ErrorKind::infeasible_fixing:
      return true;
    default:
      return false;
  }
}

TypeVector lambda_of(const std::vector<unsigned>& a, std::uint64_t t) {
  TypeVector tv{std::vector<unsigned>(t, 0)};
  for (auto v : a) {
    if (v >= t) throw Error(ErrorKind::type_mismatch, "a-value " + std::to_string(v) + " not in Z_t");
    ++tv.counts[v];
  }
  return tv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nullseq: coefficient certificates for sequenceable subsets of Z_p x Z_t"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineName));

  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--workers", flags.workers, "worker threads (env NULLSEQ_WORKERS)");
    sub->add_option("--term-cap", flags.term_cap, "abort a multiplication above this many terms");
    sub->add_option("--checkpoint-dir", flags.checkpoint_dir, "checkpoint directory (env NULLSEQ_CHECKPOINT_DIR)");
    sub->add_option("--checkpoint-every", flags.checkpoint_every, "checkpoint every N multiplication steps");
    sub->add_flag("--resume", flags.resume, "resume from an existing checkpoint");
    sub->add_flag("--progress", flags.progress, "engine progress on stderr");
    sub->add_option("-o,--output", flags.output, "write records to FILE instead of stdout");
  };

  // prove
  auto* prove = app.add_subcommand("prove", "certify every type of size k over Z_t");
  unsigned prove_k = 0;
  std::uint64_t prove_t = 1;
  std::vector<std::string> prove_types;
  bool prove_reps = false, prove_no_fix = false;
  prove->add_option("--k", prove_k, "subset size")->required();
  prove->add_option("--t", prove_t, "quotient modulus")->required()->check(CLI::Range(1, 5));
  prove->add_option("--type", prove_types, "only these types, e.g. 3,2 (repeatable)");
  prove->add_flag("--representatives", prove_reps, "one type per orbit under units of Z_t");
  prove->add_flag("--no-fixing", prove_no_fix, "never fix variables");
  prove->add_option("--search-limit", flags.search_limit, "quotient sequencings tried per type");
  prove->add_option("--search-budget", flags.search_budget, "arrangements examined per type");
  add_common(prove);

  // coeff
  auto* coeff = app.add_subcommand("coeff", "coefficient of one monomial");
  unsigned coeff_k = 0;
  std::uint64_t coeff_t = 1;
  std::string coeff_a, coeff_lambda, coeff_fixes, coeff_mono, coeff_variant = "p";
  coeff->add_option("--k", coeff_k, "subset size")->required();
  coeff->add_option("--t", coeff_t, "quotient modulus")->required()->check(CLI::Range(1, 5));
  coeff->add_option("--a", coeff_a, "quotient sequencing a_1..a_k (default: best for --lambda)");
  coeff->add_option("--lambda", coeff_lambda, "type (default: from --a, or (k) when t = 1)");
  coeff->add_option("--fixes", coeff_fixes, "fixed positions, e.g. 3,6");
  coeff->add_option("--variant", coeff_variant, "p or q")->check(CLI::IsMember({"p", "q"}));
  coeff->add_option("--monomial", coeff_mono, "exponents e_1..e_k")->required();
  add_common(coeff);

  // qs
  auto* qs = app.add_subcommand("qs", "rank quotient sequencings of a type");
  std::string qs_lambda, qs_objective = "min-degree";
  std::uint64_t qs_seed = 0x5eed;
  qs->add_option("--lambda", qs_lambda, "type, e.g. 3,2")->required();
  qs->add_option("--objective", qs_objective, "min-degree or min-max-multiplicity")
      ->check(CLI::IsMember({"min-degree", "min-max-multiplicity"}));
  qs->add_option("--limit", flags.search_limit, "number of results");
  qs->add_option("--budget", flags.search_budget, "arrangements examined");
  qs->add_option("--seed", qs_seed, "seed for the randomized search");
  add_common(qs);

  // scan
  auto* scan = app.add_subcommand("scan", "brute-force sequencing scan of Z_n");
  std::uint64_t scan_n = 0;
  std::vector<unsigned> scan_k;
  std::optional<std::uint64_t> scan_sample;
  std::uint64_t scan_seed = 1;
  bool scan_no_sym = false;
  std::optional<std::uint64_t> scan_budget;
  scan->add_option("--n", scan_n, "group order")->required()->check(CLI::Range(2, 40));
  scan->add_option("--k", scan_k, "subset sizes (default: all)");
  scan->add_option("--sample", scan_sample, "check this many random subsets instead of all");
  scan->add_option("--seed", scan_seed, "sampling seed");
  scan->add_flag("--no-symmetry", scan_no_sym, "do not reduce by multiplication by units");
  scan->add_option("--budget", scan_budget, "maximum searches per k");
  add_common(scan);

  // verify
  auto* verify = app.add_subcommand("verify", "check every subset of a type for a sequencing projecting onto a");
  std::uint64_t ver_p = 0, ver_t = 1;
  std::string ver_lambda, ver_a;
  std::optional<std::uint64_t> ver_budget;
  verify->add_option("--p", ver_p, "prime")->required();
  verify->add_option("--t", ver_t, "quotient modulus")->required();
  verify->add_option("--lambda", ver_lambda, "type (default: from --a)");
  verify->add_option("--a", ver_a, "quotient sequencing")->required();
  verify->add_option("--budget", ver_budget, "maximum subsets");
  add_common(verify);

  // applicable
  auto* applic = app.add_subcommand("applicable", "which theorems cover k-subsets of Z_n");
  std::string app_n, app_subset;
  unsigned app_k = 0;
  applic->add_option("--n", app_n, "group order (decimal)")->required();
  applic->add_option("--k", app_k, "subset size")->required();
  applic->add_option("--subset", app_subset, "concrete subset, comma-separated residues");
  add_common(applic);

  // table1
  auto* table = app.add_subcommand("table1", "recompute the published reference coefficients");
  bool tab_extended = false, tab_prime = false;
  table->add_flag("--extended", tab_extended, "include the heavy rows");
  table->add_flag("--prime-case", tab_prime, "include the k = 11, 12 prime-order coefficients");
  add_common(table);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  int status = kOk;
  try {
    const Settings settings = resolve(flags);
    if (!flags.output.empty()) {
      file.open(flags.output);
      if (!file) throw Error(ErrorKind::invalid_input, "cannot write " + flags.output);
      out = &file;
    }
    RecordWriter writer(*out);

    if (*prove) {
      CaseConfig cfg;
      cfg.search.limit = settings.search_limit;
      cfg.search.budget = settings.search_budget;
      // Candidate collection runs many boxes per type, so no checkpoints here.
      cfg.engine.workers = settings.workers;
      cfg.engine.term_cap = settings.term_cap;
      cfg.use_fixing = !prove_no_fix;
      cfg.representatives_only = prove_reps;
      for (const auto& s : prove_types) {
        auto tv = TypeVector::parse(s);
        if (tv.modulus() != prove_t || tv.total() != prove_k)
          throw Error(ErrorKind::type_mismatch, "type " + s + " is not a type of size k over Z_t");
        cfg.only_types.push_back(std::move(tv));
      }
      const auto rep = assemble_case(prove_k, prove_t, cfg);
      for (auto& r : to_records(rep)) writer.write(std::move(r));
      if (!rep.unresolved.empty() || !rep.complete) status = kFailed;
    } else if (*coeff) {
      std::vector<unsigned> a;
      TypeVector lambda;
      if (!coeff_a.empty()) {
        a = parse_sequence(coeff_a);
        lambda = lambda_of(a, coeff_t);
        if (!coeff_lambda.empty() && TypeVector::parse(coeff_lambda) != lambda)
          throw Error(ErrorKind::type_mismatch, "--a does not have type --lambda");
      } else {
        if (!coeff_lambda.empty())
          lambda = TypeVector::parse(coeff_lambda);
        else if (coeff_t == 1)
          lambda = TypeVector{{coeff_k}};
        else
          throw Error(ErrorKind::invalid_input, "give --a or --lambda when t > 1");
        if (lambda.modulus() != coeff_t)
          throw Error(ErrorKind::type_mismatch, "--lambda has the wrong length");
        a = search_quotient(lambda, {QuotientObjective::min_degree, 1, settings.search_budget}).ranked.front().qs.a;
      }
      if (a.size() != coeff_k) throw Error(ErrorKind::invalid_input, "--a must have k entries");
      const auto q = validate_quotient(a, lambda);
      const auto fixes = FixedAssignment::parse(coeff_fixes);
      const auto full = coeff_variant == "q" ? build_q(q) : build_p(q);
      const auto fl = apply_fixes(full, fixes);
      const auto bm = bounding_monomial(lambda, q, fixes);
      const auto mono = ExponentVector::parse(coeff_mono);
      if (mono.size() != coeff_k) throw Error(ErrorKind::invalid_input, "--monomial must have k entries");
      const auto eng = engine_options(settings, flags, job_name("coeff-" + coeff_variant, a, fixes, mono));
      const auto poly = multiply_factors(fl, bm, mono, eng);
      drop_checkpoint(eng);
      CoefficientResult res{lambda, a, fixes, coeff_variant == "q" ? Variant::q : Variant::p,
                            static_cast<unsigned>(fl.degree()), mono, coefficient_of(poly, mono)};
      writer.write(to_record(res));
    } else if (*qs) {
      const auto lambda = TypeVector::parse(qs_lambda);
      QuotientSearchOptions o;
      o.objective = qs_objective == "min-degree" ? QuotientObjective::min_degree
                                                 : QuotientObjective::min_max_multiplicity;
      o.limit = settings.search_limit;
      o.budget = settings.search_budget;
      o.seed = qs_seed;
      const auto res = search_quotient(lambda, o);
      unsigned rank = 0;
      for (const auto& s : res.ranked) writer.write(to_record(QuotientRow{++rank, s, res.exhaustive}));
    } else if (*scan) {
      if (scan_k.empty())
        for (unsigned k = 1; k < scan_n && k <= kMaxOracleSize; ++k) scan_k.push_back(k);
      ScanOptions so;
      so.reduce_symmetry = !scan_no_sym;
      so.workers = settings.workers;
      so.budget = scan_budget.value_or(settings.scan_budget);
      const auto mode = scan_sample ? ScanMode::sampled(*scan_sample, scan_seed) : ScanMode::full();
      for (auto k : scan_k) {
        const auto rep = scan_group(scan_n, k, mode, so);
        writer.write(to_record(rep));
        if (!rep.failures.empty() || !rep.complete) status = kFailed;
      }
    } else if (*verify) {
      const auto a = parse_sequence(ver_a);
      const auto lambda = ver_lambda.empty() ? lambda_of(a, ver_t) : TypeVector::parse(ver_lambda);
      const auto q = validate_quotient(a, lambda);
      VerifyOptions vo;
      vo.workers = settings.workers;
      vo.budget = ver_budget.value_or(settings.verify_budget);
      const auto rep = verify_nonvanishing_conclusion(ver_p, ver_t, lambda, q, vo);
      writer.write(to_record(rep));
      if (!rep.passed()) status = kFailed;
    } else if (*applic) {
      mpz_class n;
      if (n.set_str(app_n, 10) != 0) throw Error(ErrorKind::invalid_input, "--n is not a decimal integer");
      std::optional<SubsetFacts> facts;
      if (!app_subset.empty()) {
        SubsetFacts sf;
        for (const auto& s : detail::split(app_subset, ',')) {
          mpz_class e;
          if (e.set_str(s, 10) != 0) throw Error(ErrorKind::invalid_input, "bad subset element '" + s + "'");
          sf.elements.push_back(e);
        }
        facts = std::move(sf);
      }
      const auto rep = applicability(n, app_k, facts);
      writer.write(to_record(rep));
      if (rep.verdict != Verdict::unconditional && rep.verdict != Verdict::conditional) status = kFailed;
    } else if (*table) {
      auto rows = table1_rows();
      if (tab_prime)
        for (auto& r : prime_case_rows()) rows.push_back(std::move(r));
      for (const auto& row : rows) {
        for (const auto& entry : row.entries) {
          const auto q = validate_quotient(entry.a, row.lambda);
          const auto fl = build_p(q);
          const auto bm = bounding_monomial(row.lambda, q);
          for (const auto& m : entry.monomials) {
            FixtureCheck fc{row.lambda, entry.a, ExponentVector::from(m.exponents), m.coefficient(),
                            m.sign_known, std::nullopt, "skipped"};
            if (!row.heavy || tab_extended) {
              const auto eng = engine_options(settings, flags, job_name("table1-", entry.a, {}, fc.monomial));
              try {
                const auto poly = multiply_factors(fl, bm, fc.monomial, eng);
                drop_checkpoint(eng);
                fc.computed = coefficient_of(poly, fc.monomial);
                const bool ok = m.sign_known ? *fc.computed == fc.expected
                                             : abs(*fc.computed) == abs(fc.expected);
                fc.status = ok ? "match" : "mismatch";
              } catch (const Error& e) {
                if (e.kind() != ErrorKind::budget_exceeded) throw;
                fc.status = std::string("error: ") + e.what();
              }
              if (fc.status != "match") status = kFailed;
            }
            writer.write(to_record(fc));
          }
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "nullseq: " << e.what() << "\n";
    return is_usage_error(e.kind()) ? kUsage : kFailed;
  } catch (const std::exception& e) {
    std::cerr << "nullseq: " << e.what() << "\n";
    return kFailed;
  }
  return status;
}
