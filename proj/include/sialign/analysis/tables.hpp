#pragma once

// Tab-separated report tables. Each section starts with a "# name" line
// followed by a header row.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sialign/analysis/comparative.hpp"
#include "sialign/analysis/distribution.hpp"
#include "sialign/analysis/span_lengths.hpp"
#include "sialign/core/log.hpp"

namespace sialign {

namespace detail {
inline std::string num(double v, int prec = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}

inline void row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
  out << '\n';
}
}  // namespace detail

inline void write_label_distribution(std::ostream& out, const LabelDistribution& d) {
  out << "# token_label_distribution\n";
  std::vector<std::string> head{"side"};
  for (Label l : kAllLabels) head.emplace_back(to_string(l));
  head.emplace_back("tokens");
  detail::row(out, head);
  for (Role r : {Role::Source, Role::Target}) {
    std::vector<std::string> cells{std::string(to_string(r))};
    for (Label l : kAllLabels) cells.push_back(detail::num(d.side(r).at(l), 2));
    cells.push_back(std::to_string(r == Role::Source ? d.source_tokens : d.target_tokens));
    detail::row(out, cells);
  }
}

inline void write_length_ratios(std::ostream& out, const std::map<Label, LengthRatio>& ratios) {
  out << "# weighted_length_ratio\n";
  detail::row(out, {"label", "ratio", "links", "source_tokens", "target_tokens"});
  for (Label l : kAllLabels) {
    const auto it = ratios.find(l);
    if (it == ratios.end()) continue;
    const auto& r = it->second;
    detail::row(out, {std::string(to_string(l)), detail::num(r.ratio), std::to_string(r.links),
                      std::to_string(r.source_tokens), std::to_string(r.target_tokens)});
  }
}

inline void write_span_lengths(std::ostream& out, const std::vector<SpanLengthGroup>& groups, std::string_view by) {
  out << "# span_length_by_" << by << '\n';
  detail::row(out, {"group", "side", "count", "mean", "min", "q1", "median", "q3", "max"});
  for (const auto& g : groups) {
    const auto& s = g.summary;
    detail::row(out, {g.group, std::string(to_string(g.role)), std::to_string(s.count), detail::num(s.mean, 3),
                      detail::num(s.min, 1), detail::num(s.q1, 2), detail::num(s.median, 2), detail::num(s.q3, 2),
                      detail::num(s.max, 1)});
  }
}

/// Long-format samples for box plots: one span per line.
inline void write_span_length_samples(std::ostream& out, const std::vector<SpanLengthGroup>& groups) {
  detail::row(out, {"group", "side", "length"});
  for (const auto& g : groups)
    for (double v : g.lengths) detail::row(out, {g.group, std::string(to_string(g.role)), detail::num(v, 0)});
}

inline void write_relay(std::ostream& out, const RelayReport& r) {
  out << "# direct_vs_relay\n";
  std::vector<std::string> head{"mode", "documents", "char_ratio"};
  for (Label l : kAllLabels) head.emplace_back(to_string(l));
  detail::row(out, head);
  for (int g = 0; g < 2; ++g) {
    const auto& group = g ? r.relay : r.direct;
    std::vector<std::string> cells{g ? "relay" : "direct", std::to_string(group.documents),
                                   group.documents ? detail::num(group.mean_char_ratio) : "n/a"};
    for (Label l : kAllLabels) cells.push_back(detail::num(group.label_share.at(l), 2));
    detail::row(out, cells);
  }
}

inline void write_multi_track(std::ostream& out, const std::vector<MultiTrackRow>& rows) {
  out << "# multi_track\n";
  detail::row(out, {"source", "lang", "first", "second", "character", "token"});
  for (const auto& r : rows)
    detail::row(out, {r.source_doc, r.lang, r.first, r.second, detail::num(r.char_ratio, 2), detail::num(r.token_ratio, 2)});
}

inline void write_agreement(std::ostream& out, const std::vector<AgreementRow>& rows) {
  out << "# agreement\n";
  detail::row(out, {"source", "target", "a", "b", "seg_kappa_src", "seg_kappa_tgt", "label_kappa_src", "label_kappa_tgt",
                    "exact_with_ref_a", "exact_without_ref_a", "exact_with_ref_b", "exact_without_ref_b"});
  for (const auto& r : rows)
    detail::row(out, {r.source_doc, r.target_doc, r.annotator_a, r.annotator_b, detail::num(r.segmentation[0].kappa, 2),
                      detail::num(r.segmentation[1].kappa, 2), detail::num(r.labels[0].kappa, 2),
                      detail::num(r.labels[1].kappa, 2), detail::num(r.a_as_reference.exact_with_labels, 2),
                      detail::num(r.a_as_reference.exact_without_labels, 2),
                      detail::num(r.b_as_reference.exact_with_labels, 2),
                      detail::num(r.b_as_reference.exact_without_labels, 2)});
}

/// All corpus reports for one set of documents. Incomplete documents are
/// dropped from the token distribution with a warning; grouping by
/// annotator is skipped when any document lacks an annotator id.
inline void write_stats(std::ostream& out, const std::vector<AlignmentDocument>& docs) {
  std::vector<AlignmentDocument> complete;
  for (const auto& d : docs) {
    if (validate_document(d).is_complete)
      complete.push_back(d);
    else
      warn("document '" + d.pair_id + "' is incomplete, left out of the token label distribution");
  }
  out << "documents\t" << docs.size() << '\n';
  write_label_distribution(out, token_label_distribution(complete));
  write_length_ratios(out, weighted_length_ratio(docs));
  write_span_lengths(out, span_length_distribution(docs, LengthGrouping::Label), "label");
  const bool annotated = std::all_of(docs.begin(), docs.end(), [](const auto& d) { return !d.meta.annotator_id.empty(); });
  if (annotated && !docs.empty())
    write_span_lengths(out, span_length_distribution(docs, LengthGrouping::Annotator), "annotator");
  if (const auto relay = relay_report(docs)) write_relay(out, *relay);
  write_multi_track(out, multi_track_report(docs));
  write_agreement(out, agreement_report(docs));
}

}  // namespace sialign
