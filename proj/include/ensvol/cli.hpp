#pragma once

// Command-line surface: `analyze`, `verify`, `search`, `table`.  All command
// logic lives here (run_cli is directly testable against string streams); the
// binary in tools/ is a two-line wrapper.
//
// Exit codes: 0 success / witness found / all suites passed; 1 suite or
// reference-table failure (and unexpected internal errors); 2 input
// validation failure in `analyze`; 3 search budget exhausted; 64 usage
// errors.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ensvol/io.hpp"

namespace ensvol {

namespace detail {

// Renders a finished document to the --output path when given, stdout
// otherwise.
inline void emit_document(const Document& doc, const std::string& output_path,
                          std::ostream& out) {
  const std::string text = to_document_string(doc);
  if (!output_path.empty()) {
    write_text_file(output_path, text);
  } else {
    out << text;
  }
}

inline int cmd_analyze(const std::string& input_path, bool bits, bool renormalize,
                       const std::string& output_path, std::ostream& out,
                       std::ostream& err) {
  try {
    LoadOptions load;
    load.renormalize = renormalize;
    const Ensemble e = load_ensemble_file(input_path, load);
    AnalyzeOptions opts;
    opts.bits = bits;
    emit_document(analysis_report(e, opts), output_path, out);
    return 0;
  } catch (const std::exception& ex) {
    err << "analyze: " << ex.what() << "\n";
    return 2;
  }
}

inline int cmd_verify(const std::string& suite, long long trials, std::uint64_t seed,
                      std::optional<double> tolerance, const std::string& output_path,
                      std::ostream& out, std::ostream& err) {
  try {
    VerifyOptions opts;
    opts.tolerance_override = tolerance;
    const std::vector<SuiteResult> results = run_suites(suite, trials, seed, opts);
    const Document doc = document_from_suites(results, seed, trials, tolerance);
    emit_document(doc, output_path, out);
    for (const SuiteResult& s : results) {
      if (!s.passed()) return 1;
    }
    return 0;
  } catch (const std::invalid_argument& ex) {
    err << "verify: " << ex.what() << "\n";
    return 64;
  } catch (const std::exception& ex) {
    err << "verify: " << ex.what() << "\n";
    return 1;
  }
}

inline int cmd_search(const std::string& kind, std::uint64_t seed, long long budget,
                      const std::string& output_path, std::ostream& out,
                      std::ostream& err) {
  try {
    if (kind == "js-counterexample") {
      const long long effective_budget = budget > 0 ? budget : 1000000;
      const CounterexampleReport r = js_counterexample_search(seed, effective_budget);
      emit_document(document_from_counterexample(r, effective_budget, kind),
                    output_path, out);
      return r.found ? 0 : 3;
    }
    if (kind == "nonmonotone") {
      const long long effective_budget = budget > 0 ? budget : 100000;
      const NonmonotonicityWitness w =
          nonmonotonicity_demo(/*p_small=*/0.02, seed, effective_budget);
      emit_document(document_from_witness(w, effective_budget), output_path, out);
      return w.found ? 0 : 3;
    }
    err << "search: unknown kind \"" << kind << "\"\n";
    return 64;
  } catch (const std::invalid_argument& ex) {
    err << "search: " << ex.what() << "\n";
    return 64;
  } catch (const std::exception& ex) {
    err << "search: " << ex.what() << "\n";
    return 1;
  }
}

inline int cmd_table(int k_max, bool check_reference, const std::string& output_path,
                     std::ostream& out, std::ostream& err) {
  try {
    const std::vector<DofRow> rows = dof_table(k_max);
    bool matches = true;
    if (check_reference) {
      const std::vector<DofRow> reference = dof_table_reference();
      for (const DofRow& ref : reference) {
        if (ref.k > k_max) continue;
        bool found = false;
        for (const DofRow& r : rows) {
          if (r.k == ref.k && r.n == ref.n) {
            found = true;
            if (r.nu != ref.nu || r.tau != ref.tau) matches = false;
          }
        }
        if (!found) matches = false;
      }
    }
    out << table_text(rows);
    if (!output_path.empty()) {
      write_text_file(output_path,
                      to_document_string(document_from_dof_table(
                          rows, k_max, check_reference, matches)));
    }
    if (check_reference && !matches) {
      err << "table: computed values disagree with the reference table\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& ex) {
    err << "table: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace detail

// Parses and runs one invocation.  `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Volumetric invariants and entropy calculus for weighted pure-state families"};
  app.name("ensvol");
  app.require_subcommand(1);

  // analyze
  std::string analyze_input;
  std::string analyze_output;
  bool analyze_bits = false;
  bool analyze_renormalize = false;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Full invariant/derivative report for an ensemble file");
  analyze->add_option("input", analyze_input, "ensemble document to analyze")
      ->required();
  analyze->add_flag("--bits", analyze_bits, "also report entropy in base-2 units");
  analyze->add_flag("--renormalize", analyze_renormalize,
                    "repair state norms and weight sums that deviate from 1 by more than 1e-9");
  analyze->add_option("--output", analyze_output, "write the report to this path instead of stdout");

  // verify
  std::string verify_suite;
  long long verify_trials = 1000;
  std::uint64_t verify_seed = 12345;
  double verify_tolerance = -1.0;
  std::string verify_output;
  CLI::App* verify = app.add_subcommand("verify", "Run a randomized property suite");
  verify
      ->add_option("suite", verify_suite,
                   "one of: theorem1, bounds, identities, subentropy, hermite-gennochi, all")
      ->required()
      ->check(CLI::IsMember({"theorem1", "bounds", "identities", "subentropy",
                             "hermite-gennochi", "hermite-genocchi", "all"}));
  verify->add_option("--trials", verify_trials, "trials per dimension/check (default 1000)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "base seed for the deterministic trial streams");
  verify->add_option("--tolerance", verify_tolerance,
                     "override the default tolerance of every residual check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--output", verify_output, "write the summary to this path instead of stdout");

  // search
  std::string search_kind;
  std::uint64_t search_seed = 12345;
  long long search_budget = -1;
  std::string search_output;
  CLI::App* search = app.add_subcommand("search", "Constructive witness searches");
  search
      ->add_option("kind", search_kind, "one of: js-counterexample, nonmonotone")
      ->required()
      ->check(CLI::IsMember({"js-counterexample", "nonmonotone"}));
  search->add_option("--seed", search_seed, "base seed for the deterministic shards");
  search->add_option("--budget", search_budget,
                     "candidate budget (defaults: 1000000 for js-counterexample, 100000 for nonmonotone)")
      ->check(CLI::PositiveNumber);
  search->add_option("--output", search_output, "write the report to this path instead of stdout");

  // table
  int table_k_max = 0;
  bool table_check = false;
  std::string table_output;
  CLI::App* table = app.add_subcommand(
      "table", "Degrees-of-freedom vs invariant-count table, rows \"k n nu tau\"");
  table->add_option("k_max", table_k_max, "largest family size (>= 2)")
      ->required()
      ->check(CLI::Range(2, 60));
  table->add_flag("--check-paper", table_check,
                  "compare the k <= 5 slice against the published reference values; "
                  "exit nonzero on mismatch");
  table->add_option("--output", table_output, "also write a structured report to this path");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "ensvol: " << ex.what() << "\n";
    return 64;
  }

  if (analyze->parsed()) {
    return detail::cmd_analyze(analyze_input, analyze_bits, analyze_renormalize,
                               analyze_output, out, err);
  }
  if (verify->parsed()) {
    std::optional<double> tol;
    if (verify->count("--tolerance") > 0) {
      tol = verify_tolerance;
    }
    return detail::cmd_verify(verify_suite, verify_trials, verify_seed, tol,
                              verify_output, out, err);
  }
  if (search->parsed()) {
    return detail::cmd_search(search_kind, search_seed, search_budget, search_output,
                              out, err);
  }
  if (table->parsed()) {
    return detail::cmd_table(table_k_max, table_check, table_output, out, err);
  }
  err << "ensvol: no command given (run with --help)\n";
  return 64;
}

}  // namespace ensvol
