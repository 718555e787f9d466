#pragma once

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sialign/core/log.hpp"
#include "sialign/core/validate.hpp"
#include "sialign/metrics/labels.hpp"
#include "sialign/metrics/segmentation.hpp"
#include "sialign/metrics/span_alignment.hpp"
#include "sialign/metrics/word_alignment.hpp"

namespace sialign {

/// All scores of one hypothesis against one reference recording.
struct DocumentEvaluation {
  SegmentationScore segmentation_source;
  SegmentationScore segmentation_target;
  SpanAlignScore spans;
  WordAlignScore words;
  std::optional<LabelScore> labels;  // empty when either side is incomplete
  std::size_t hyp_spans_source = 0;
  std::size_t hyp_spans_target = 0;
};

inline DocumentEvaluation evaluate_document(const AlignmentDocument& ref, const AlignmentDocument& hyp,
                                            std::optional<std::size_t> k = std::nullopt) {
  DocumentEvaluation e;
  e.segmentation_source = evaluate_segmentation(ref, hyp, Role::Source, k);
  e.segmentation_target = evaluate_segmentation(ref, hyp, Role::Target, k);
  e.spans = evaluate_span_alignment(ref.span_links, hyp.span_links);
  e.words = evaluate_word_alignment(predicted_word_links(hyp), reference_word_links(ref));
  try {
    e.labels = evaluate_labels(ref, hyp);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::IncompleteAnnotation) throw;
    warn("label match skipped for '" + ref.pair_id + "': " + err.what());
  }
  e.hyp_spans_source = side_spans(hyp, Role::Source).size();
  e.hyp_spans_target = side_spans(hyp, Role::Target).size();
  return e;
}

/// One row of the results table. Segmentation columns average the source
/// and target sides; every column is an unweighted mean over recordings.
struct EvaluationRow {
  std::string system;
  std::size_t recordings = 0;
  double seg_precision = 0, seg_recall = 0, seg_f1 = 0, window_diff = 0, pk = 0;
  double relaxed_precision = 0, relaxed_recall = 0, relaxed_f1 = 0;
  double exact_with = 0, exact_without = 0;
  double aer = 0;
  std::optional<double> word_f1;
  std::optional<double> label_accuracy, label_f1;
  double spans_source = 0, spans_target = 0;
};

inline EvaluationRow aggregate(const std::string& system, const std::vector<DocumentEvaluation>& evals) {
  EvaluationRow row;
  row.system = system;
  row.recordings = evals.size();
  if (evals.empty()) return row;
  const double n = static_cast<double>(evals.size());
  std::vector<WordAlignScore> words;
  double lacc = 0, lf1 = 0;
  std::size_t labeled = 0;
  for (const auto& e : evals) {
    const auto& s = e.segmentation_source;
    const auto& t = e.segmentation_target;
    row.seg_precision += (s.precision + t.precision) / 2 / n;
    row.seg_recall += (s.recall + t.recall) / 2 / n;
    row.seg_f1 += (s.f1 + t.f1) / 2 / n;
    row.window_diff += (s.window_diff + t.window_diff) / 2 / n;
    row.pk += (s.pk + t.pk) / 2 / n;
    row.relaxed_precision += e.spans.relaxed_precision / n;
    row.relaxed_recall += e.spans.relaxed_recall / n;
    row.relaxed_f1 += e.spans.relaxed_f1 / n;
    row.exact_with += e.spans.exact_with_labels / n;
    row.exact_without += e.spans.exact_without_labels / n;
    row.spans_source += static_cast<double>(e.hyp_spans_source) / n;
    row.spans_target += static_cast<double>(e.hyp_spans_target) / n;
    words.push_back(e.words);
    if (e.labels) {
      lacc += e.labels->accuracy;
      lf1 += e.labels->macro_f1;
      ++labeled;
    }
  }
  const auto w = macro_average(words);
  row.aer = w.aer;
  row.word_f1 = w.f1;
  if (labeled) {
    row.label_accuracy = lacc / static_cast<double>(labeled);
    row.label_f1 = lf1 / static_cast<double>(labeled);
  }
  return row;
}

namespace detail {
inline std::string fixed(double v, int prec) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}
inline std::string fixed(const std::optional<double>& v, int prec) { return v ? fixed(*v, prec) : "n/a"; }
}  // namespace detail

/// Human-readable table. Percent-valued columns follow the usual reporting
/// convention (P/R/F1 of segmentation, exact match, label match in percent;
/// the rest as fractions). Label F1 is macro-averaged over reference labels.
inline void write_table(std::ostream& out, const std::vector<EvaluationRow>& rows) {
  out << "#                    | Segmentation                     | Relaxed match      | Exact match   "
         "| Word align.  | Label match    | #span\n";
  out << "system               |      P      R     F1    Df    Pk |    P    R   F1    |    w/    w/o  "
         "|  AER    F1   |   acc     F1   |   src    tgt\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(21) << r.system.substr(0, 21) << std::right << "| " << std::setw(6)
        << detail::fixed(100 * r.seg_precision, 2) << ' ' << std::setw(6) << detail::fixed(100 * r.seg_recall, 2)
        << ' ' << std::setw(6) << detail::fixed(100 * r.seg_f1, 2) << ' ' << std::setw(5)
        << detail::fixed(r.window_diff, 2) << ' ' << std::setw(5) << detail::fixed(r.pk, 2) << " | "
        << detail::fixed(r.relaxed_precision, 2) << ' ' << detail::fixed(r.relaxed_recall, 2) << ' '
        << detail::fixed(r.relaxed_f1, 2) << "   | " << std::setw(6) << detail::fixed(r.exact_with, 2) << ' '
        << std::setw(6) << detail::fixed(r.exact_without, 2) << " | " << detail::fixed(r.aer, 2) << "  "
        << std::setw(4) << detail::fixed(r.word_f1, 2) << "  | " << std::setw(6)
        << (r.label_accuracy ? detail::fixed(100 * *r.label_accuracy, 2) : "n/a") << ' ' << std::setw(6)
        << (r.label_f1 ? detail::fixed(100 * *r.label_f1, 2) : "n/a") << " | " << std::setw(6)
        << detail::fixed(r.spans_source, 1) << ' ' << std::setw(6) << detail::fixed(r.spans_target, 1) << '\n';
  }
}

/// Machine-readable `key=value` lines, one metric per line, prefixed with
/// the system name.
inline void write_key_values(std::ostream& out, const std::vector<EvaluationRow>& rows) {
  auto kv = [&](const std::string& sys, const char* key, const std::string& v) {
    out << sys << '.' << key << '=' << v << '\n';
  };
  for (const auto& r : rows) {
    const auto& s = r.system;
    kv(s, "recordings", std::to_string(r.recordings));
    kv(s, "segmentation.precision", detail::fixed(r.seg_precision, 6));
    kv(s, "segmentation.recall", detail::fixed(r.seg_recall, 6));
    kv(s, "segmentation.f1", detail::fixed(r.seg_f1, 6));
    kv(s, "segmentation.window_diff", detail::fixed(r.window_diff, 6));
    kv(s, "segmentation.pk", detail::fixed(r.pk, 6));
    kv(s, "relaxed.precision", detail::fixed(r.relaxed_precision, 6));
    kv(s, "relaxed.recall", detail::fixed(r.relaxed_recall, 6));
    kv(s, "relaxed.f1", detail::fixed(r.relaxed_f1, 6));
    kv(s, "exact.with_labels", detail::fixed(r.exact_with, 6));
    kv(s, "exact.without_labels", detail::fixed(r.exact_without, 6));
    kv(s, "word.aer", detail::fixed(r.aer, 6));
    kv(s, "word.f1", detail::fixed(r.word_f1, 6));
    kv(s, "label.accuracy", detail::fixed(r.label_accuracy, 6));
    kv(s, "label.macro_f1", detail::fixed(r.label_f1, 6));
    kv(s, "spans.source", detail::fixed(r.spans_source, 3));
    kv(s, "spans.target", detail::fixed(r.spans_target, 3));
  }
}

}  // namespace sialign
