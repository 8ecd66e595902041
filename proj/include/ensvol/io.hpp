#pragma once

// Document layer: strict ensemble ingestion, the fixed-format report writer
// (deterministic field order, 12 significant digits, byte-identical across
// runs), and the builders that assemble analysis / verification / search /
// table documents.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensvol/calculus.hpp"
#include "ensvol/common.hpp"
#include "ensvol/ensemble.hpp"
#include "ensvol/explorer.hpp"
#include "ensvol/geometry.hpp"
#include "ensvol/spectral.hpp"
#include "ensvol/verify.hpp"
#include "ensvol/volumes.hpp"

namespace ensvol {

// All report documents are built as insertion-ordered JSON and rendered by
// the fixed-format writer below; nothing downstream relies on the default
// serializer.
using Document = nlohmann::ordered_json;

namespace detail {

// Fixed numeric rendering: 12 significant digits, scientific, so every
// tolerance in the verification story can be re-checked from a report alone.
inline std::string format_real(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("document writer: non-finite number");
  }
  if (v == 0.0) v = 0.0;  // collapse negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return std::string(buf);
}

inline bool render_array_inline(const Document& a) {
  if (a.size() > 8) return false;
  for (const auto& e : a) {
    if (e.is_structured()) return false;
  }
  return true;
}

inline void write_node(const Document& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::detail::value_t::null:
      out += "null";
      return;
    case nlohmann::detail::value_t::boolean:
      out += (j.get<bool>() ? "true" : "false");
      return;
    case nlohmann::detail::value_t::string:
      out += Document(j.get<std::string>()).dump();
      return;
    case nlohmann::detail::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case nlohmann::detail::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case nlohmann::detail::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    case nlohmann::detail::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (render_array_inline(j)) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          write_node(e, out, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        write_node(e, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::detail::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + Document(key).dump() + ": ";
        write_node(value, out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    default:
      throw std::invalid_argument("document writer: unsupported node type");
  }
}

}  // namespace detail

// Renders a document with deterministic layout: insertion-ordered keys,
// two-space indentation, short primitive arrays inlined, every real number in
// 12-significant-digit scientific form.  Identical documents render to
// identical bytes.
inline std::string to_document_string(const Document& j) {
  std::string out;
  detail::write_node(j, out, 0);
  out += "\n";
  return out;
}

// --- Ensemble files ---------------------------------------------------------

struct LoadOptions {
  // Repair state norms / weight sums that deviate from 1 by more than 1e-9
  // (smaller deviations are always repaired silently; they are within honest
  // serialization noise).
  bool renormalize = false;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

inline double require_number(const Document& j, const std::string& where) {
  if (!j.is_number()) detail::schema_error(where, "expected a number");
  return j.get<double>();
}

}  // namespace detail

// Parses the ensemble schema
//   { "dimension": int, "states": k arrays of dimension [re, im] pairs,
//     "probs": k reals }
// rejecting unknown fields and reporting the offending field path on any
// mismatch.  State norms and the weight sum are repaired per LoadOptions.
inline Ensemble ensemble_from_document(const Document& doc, LoadOptions opt = {}) {
  if (!doc.is_object()) detail::schema_error("ensemble", "expected an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "dimension" && key != "states" && key != "probs") {
      detail::schema_error("ensemble", "unknown field \"" + key + "\"");
    }
  }
  if (!doc.contains("dimension")) detail::schema_error("ensemble", "missing field \"dimension\"");
  if (!doc.contains("states")) detail::schema_error("ensemble", "missing field \"states\"");
  if (!doc.contains("probs")) detail::schema_error("ensemble", "missing field \"probs\"");

  const Document& jdim = doc["dimension"];
  if (!jdim.is_number_integer() && !jdim.is_number_unsigned()) {
    detail::schema_error("dimension", "expected an integer");
  }
  const long long dim_ll = jdim.get<long long>();
  if (dim_ll < 1 || dim_ll > 4096) {
    detail::schema_error("dimension", "must be in [1, 4096], got " + std::to_string(dim_ll));
  }
  const int dim = static_cast<int>(dim_ll);

  const Document& jstates = doc["states"];
  if (!jstates.is_array() || jstates.empty()) {
    detail::schema_error("states", "expected a non-empty array");
  }
  const int k = static_cast<int>(jstates.size());

  const Document& jprobs = doc["probs"];
  if (!jprobs.is_array()) detail::schema_error("probs", "expected an array");
  if (static_cast<int>(jprobs.size()) != k) {
    detail::schema_error("probs", "expected " + std::to_string(k) + " entries (one per state), got " +
                                      std::to_string(jprobs.size()));
  }

  std::vector<PureState> states;
  states.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    const Document& js = jstates[static_cast<std::size_t>(i)];
    if (!js.is_array() || static_cast<int>(js.size()) != dim) {
      detail::schema_error(where, "expected an array of " + std::to_string(dim) +
                                      " [re, im] pairs");
    }
    Eigen::VectorXcd v(dim);
    for (int c = 0; c < dim; ++c) {
      const std::string entry = where + "[" + std::to_string(c) + "]";
      const Document& jc = js[static_cast<std::size_t>(c)];
      if (!jc.is_array() || jc.size() != 2) {
        detail::schema_error(entry, "expected an [re, im] pair");
      }
      const double re = detail::require_number(jc[0], entry + "[0]");
      const double im = detail::require_number(jc[1], entry + "[1]");
      if (!std::isfinite(re) || !std::isfinite(im)) {
        detail::schema_error(entry, "non-finite amplitude");
      }
      v(c) = std::complex<double>(re, im);
    }
    const double norm = v.norm();
    if (!(norm > 1e-6)) {
      detail::schema_error(where, "state norm " + std::to_string(norm) + " is too close to zero");
    }
    const double dev = std::abs(norm - 1.0);
    if (dev > 1e-9 && !opt.renormalize) {
      detail::schema_error(where, "norm deviates from 1 by " + std::to_string(dev) +
                                      "; pass --renormalize to repair");
    }
    v /= norm;
    states.emplace_back(std::move(v));
  }

  std::vector<double> probs(static_cast<std::size_t>(k));
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const std::string where = "probs[" + std::to_string(i) + "]";
    const double p = detail::require_number(jprobs[static_cast<std::size_t>(i)], where);
    if (!std::isfinite(p) || !(p > 0.0)) {
      detail::schema_error(where, "probabilities must be finite and strictly positive");
    }
    probs[static_cast<std::size_t>(i)] = p;
    total += p;
  }
  const double sum_dev = std::abs(total - 1.0);
  if (sum_dev > 1e-9 && !opt.renormalize) {
    detail::schema_error("probs", "sum deviates from 1 by " + std::to_string(sum_dev) +
                                      "; pass --renormalize to repair");
  }
  for (auto& p : probs) p /= total;

  try {
    return Ensemble(std::move(states), std::move(probs));
  } catch (const std::invalid_argument& err) {
    detail::schema_error("ensemble", err.what());
  }
}

// Serializes an ensemble back into the input schema.
inline Document document_from_ensemble(const Ensemble& e) {
  Document doc;
  doc["dimension"] = e.dim();
  Document states = Document::array();
  for (int i = 0; i < e.size(); ++i) {
    Document row = Document::array();
    const Eigen::VectorXcd& v = e.state(i).amplitudes();
    for (int c = 0; c < e.dim(); ++c) {
      row.push_back(Document::array({v(c).real(), v(c).imag()}));
    }
    states.push_back(std::move(row));
  }
  doc["states"] = std::move(states);
  doc["probs"] = e.probs();
  return doc;
}

// --- Files ------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error(path + ": read failure");
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out.good()) throw std::runtime_error(path + ": write failure");
}

// Parses a document file; malformed content raises invalid_argument carrying
// the parser's position diagnostics prefixed with the path.
inline Document parse_document_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Document::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(path + ": " + err.what());
  }
}

inline Ensemble load_ensemble_file(const std::string& path, LoadOptions opt = {}) {
  try {
    return ensemble_from_document(parse_document_file(path), opt);
  } catch (const std::invalid_argument& err) {
    throw std::invalid_argument(path + ": " + err.what());
  }
}

// --- Analysis report --------------------------------------------------------

struct AnalyzeOptions {
  bool bits = false;  // additionally report entropy in base-2 units
};

// Full analysis document: spectrum, entropy, both symmetric-polynomial routes
// (with their discrepancy as an embedded self-audit), every principal-minor
// invariant, the derivative families on the positive part of the spectrum,
// subentropy, and the chart-identity residual.  Derivative entries whose
// order exceeds the effective rank are reported as null.
inline Document analysis_report(const Ensemble& e, AnalyzeOptions opt = {}) {
  const int k = e.size();
  const int n = e.dim();

  const Spectrum gx = gram_spectrum(e);
  const std::vector<double> pos = gx.positive_part();
  const int n_eff = static_cast<int>(pos.size());
  const Spectrum xp{std::vector<double>(pos)};

  const OverlapMatrix a = overlap_matrix(e);
  const VolumeInvariants vol = all_alphas(a, n);
  const std::vector<double> s_minor = symmetric_polys_from_alphas(vol, e.probs()).s;
  const std::vector<double> s_spec = detail::symmetric_polys_raw(gx.values());
  double route_discrepancy = 0.0;
  for (std::size_t q = 0; q < s_minor.size() && q < s_spec.size(); ++q) {
    route_discrepancy = std::max(route_discrepancy, std::abs(s_minor[q] - s_spec[q]));
  }
  if (route_discrepancy > 1e-8) {
    throw std::runtime_error(
        "analysis_report: symmetric-polynomial routes disagree by " +
        std::to_string(route_discrepancy));
  }

  Document doc;
  doc["report"] = "analysis";
  {
    Document echo;
    echo["dimension"] = n;
    echo["n_states"] = k;
    echo["probs"] = e.probs();
    doc["ensemble"] = std::move(echo);
  }
  doc["spectrum"] = gx.values();
  doc["effective_rank"] = n_eff;
  {
    const double nats = von_neumann_entropy(gx);
    Document entropy;
    entropy["nats"] = nats;
    if (opt.bits) entropy["bits"] = nats / std::log(2.0);
    doc["entropy"] = std::move(entropy);
  }
  {
    Document sp;
    sp["spectral"] = s_spec;
    sp["minor_route"] = s_minor;
    sp["route_discrepancy"] = route_discrepancy;
    doc["symmetric_polys"] = std::move(sp);
  }
  {
    Document alphas = Document::object();
    for (const auto& [u, value] : vol.values) {
      alphas[u.to_string()] = value;
    }
    doc["volume_invariants"] = std::move(alphas);
  }
  {
    Document derivs = Document::object();
    for (int q = 2; q <= n_eff; ++q) {
      derivs[std::to_string(q)] = dS_ds(xp, q);
    }
    doc["entropy_derivatives"] = std::move(derivs);
  }
  {
    Document dalpha = Document::object();
    for (const auto& [u, value] : vol.values) {
      (void)value;
      if (u.size() <= n_eff) {
        dalpha[u.to_string()] = dS_dalpha(e, u);
      } else {
        dalpha[u.to_string()] = nullptr;
      }
    }
    doc["volume_derivatives"] = std::move(dalpha);
  }
  {
    const double q_val = subentropy(xp);
    doc["subentropy"] = q_val;
    doc["subentropy_identity_residual"] = std::abs(q_val - (1.0 - dS_dt1(xp)));
  }
  return doc;
}

// --- Verification summary ---------------------------------------------------

inline Document document_from_suites(const std::vector<SuiteResult>& suites,
                                     std::uint64_t seed, long long trials,
                                     std::optional<double> tolerance_override) {
  Document doc;
  doc["report"] = "verify";
  doc["seed"] = seed;
  doc["trials"] = trials;
  if (tolerance_override) {
    doc["tolerance_override"] = *tolerance_override;
  } else {
    doc["tolerance_override"] = nullptr;
  }
  bool all_passed = true;
  Document jsuites = Document::array();
  for (const SuiteResult& s : suites) {
    Document js;
    js["suite"] = s.suite;
    js["seed"] = s.seed;
    js["trials"] = s.trials;
    js["runtime_seconds"] = s.seconds;
    long long passed_count = 0, failed_count = 0;
    Document jchecks = Document::array();
    for (const CheckResult& c : s.checks) {
      Document jc;
      jc["name"] = c.name;
      jc["trials"] = c.trials;
      jc["violations"] = c.violations;
      if (c.margin_check) {
        jc["worst_margin"] = c.worst_residual;
      } else {
        jc["worst_residual"] = c.worst_residual;
        jc["tolerance"] = c.tolerance;
      }
      jc["passed"] = c.passed;
      (c.passed ? passed_count : failed_count) += 1;
      jchecks.push_back(std::move(jc));
    }
    js["checks_passed"] = passed_count;
    js["checks_failed"] = failed_count;
    js["checks"] = std::move(jchecks);
    js["passed"] = s.passed();
    all_passed = all_passed && s.passed();
    jsuites.push_back(std::move(js));
  }
  doc["suites"] = std::move(jsuites);
  doc["all_passed"] = all_passed;
  return doc;
}

// --- Search documents -------------------------------------------------------

inline Document document_from_counterexample(const CounterexampleReport& r,
                                             long long budget,
                                             const std::string& kind) {
  Document doc;
  doc["report"] = "search";
  doc["kind"] = kind;
  doc["seed"] = r.seed;
  doc["budget"] = budget;
  doc["found"] = r.found;
  doc["iterations"] = r.iterations;
  doc["n_states"] = r.n_states;
  doc["probs"] = r.probs;
  doc["overlap_moduli_base"] = r.overlaps_base;
  doc["overlap_moduli_perturbed"] = r.overlaps_perturbed;
  doc["entropy_base"] = r.entropy_base;
  doc["entropy_perturbed"] = r.entropy_perturbed;
  doc["min_overlap_increase"] = r.min_overlap_increase;
  doc["max_overlap_increase"] = r.max_overlap_increase;
  doc["entropy_increase"] = r.entropy_increase;
  doc["base_ensemble"] = r.base ? document_from_ensemble(*r.base) : Document(nullptr);
  doc["perturbed_ensemble"] =
      r.perturbed ? document_from_ensemble(*r.perturbed) : Document(nullptr);
  return doc;
}

inline Document document_from_witness(const NonmonotonicityWitness& w,
                                      long long budget) {
  Document doc;
  doc["report"] = "search";
  doc["kind"] = "nonmonotone";
  doc["seed"] = w.seed;
  doc["budget"] = budget;
  doc["found"] = w.found;
  doc["candidates_tried"] = w.candidates_tried;
  if (w.found) {
    Document point;
    Document moduli = Document::object();
    const auto order = PhaseParams::pair_order();
    for (std::size_t i = 0; i < order.size(); ++i) {
      moduli[std::to_string(order[i].first) + "," + std::to_string(order[i].second)] =
          w.params.r[i];
    }
    point["moduli"] = std::move(moduli);
    point["u"] = w.params.u;
    point["v"] = w.params.v;
    point["w"] = w.params.w;
    point["probs"] = std::vector<double>(w.params.probs.begin(), w.params.probs.end());
    doc["phase_point"] = std::move(point);
    Document dir;
    dir["ux"] = w.direction.ux;
    dir["vx"] = w.direction.vx;
    dir["wx"] = w.direction.wx;
    doc["direction"] = std::move(dir);
    doc["pair_invariant_derivative_fd"] = w.ds2_dx_fd;
    doc["triple_invariant_derivative"] = w.ds3_dx;
    doc["triple_invariant_derivative_fd"] = w.ds3_dx_fd;
    doc["quad_invariant_derivative"] = w.ds4_dx;
    doc["entropy_derivative_chain"] = w.dS_dx_chain;
    doc["entropy_derivative_fd"] = w.dS_dx_fd;
    doc["ensemble"] = document_from_ensemble(ensemble_from_phase_params(w.params));
  } else {
    doc["phase_point"] = nullptr;
    doc["direction"] = nullptr;
  }
  return doc;
}

// --- Degree-of-freedom table ------------------------------------------------

// Plain rows "k n nu tau", one per line, in the fixed (k, n) order.
inline std::string table_text(const std::vector<DofRow>& rows) {
  std::string out;
  for (const DofRow& r : rows) {
    out += std::to_string(r.k) + " " + std::to_string(r.n) + " " +
           std::to_string(r.nu) + " " + std::to_string(r.tau) + "\n";
  }
  return out;
}

inline Document document_from_dof_table(const std::vector<DofRow>& rows, int k_max,
                                        bool check_performed, bool check_matches) {
  Document doc;
  doc["report"] = "table";
  doc["k_max"] = k_max;
  Document jrows = Document::array();
  for (const DofRow& r : rows) {
    Document jr;
    jr["k"] = r.k;
    jr["n"] = r.n;
    jr["nu"] = r.nu;
    jr["tau"] = r.tau;
    jrows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(jrows);
  doc["reference_check_performed"] = check_performed;
  doc["reference_check_matches"] = check_performed ? Document(check_matches) : Document(nullptr);
  return doc;
}

}  // namespace ensvol
