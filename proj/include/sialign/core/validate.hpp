#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sialign/core/types.hpp"

namespace sialign {

struct ValidationIssue {
  std::string code;
  std::string message;
  std::vector<std::string> ids;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  bool is_complete = false;

  bool ok() const { return errors.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.code == code; });
  }
};

namespace detail {

inline void check_side_structure(const TranscriptSide& side, std::vector<ValidationIssue>& errors) {
  const std::string name(to_string(side.role));
  for (std::size_t i = 0; i < side.tokens.size(); ++i) {
    if (side.tokens[i].index != i)
      errors.push_back({"TOKEN_INDEX_MISMATCH", name + " token at position " + std::to_string(i) +
                                                    " has index " + std::to_string(side.tokens[i].index), {}});
    if (side.tokens[i].surface.empty())
      errors.push_back({"EMPTY_TOKEN", name + " token " + std::to_string(i) + " is empty", {}});
  }
  std::size_t expected = 0;
  bool partition_ok = true;
  for (std::size_t l = 0; l < side.lines.size(); ++l) {
    const auto& r = side.lines[l];
    if (r.begin != expected || r.end < r.begin) partition_ok = false;
    for (std::size_t i = r.begin; i < r.end && i < side.tokens.size(); ++i)
      if (side.tokens[i].line_index != l) partition_ok = false;
    expected = r.end;
  }
  if (expected != side.tokens.size()) partition_ok = false;
  if (!partition_ok)
    errors.push_back({"LINE_PARTITION", name + " lines do not partition the token sequence in order", {}});
}

/// Link index covering each token of one side, or -1. Overlaps keep the
/// first link.
inline std::vector<long> owner_map(const AlignmentDocument& doc, Role role) {
  std::vector<long> owner(doc.side(role).size(), -1);
  for (std::size_t k = 0; k < doc.span_links.size(); ++k) {
    const auto& span = doc.span_links[k].side(role);
    if (!span || span->end > owner.size() || span->start >= span->end) continue;
    for (std::size_t i = span->start; i < span->end; ++i)
      if (owner[i] < 0) owner[i] = static_cast<long>(k);
  }
  return owner;
}

}  // namespace detail

/// Checks every document invariant. Errors are data: the function never
/// throws and is deterministic.
inline ValidationReport validate_document(const AlignmentDocument& doc) {
  ValidationReport report;
  auto& errors = report.errors;
  detail::check_side_structure(doc.source, errors);
  detail::check_side_structure(doc.target, errors);

  std::set<std::string> ids;
  std::vector<bool> link_ok(doc.span_links.size(), true);
  for (std::size_t k = 0; k < doc.span_links.size(); ++k) {
    const auto& link = doc.span_links[k];
    if (!ids.insert(link.id).second)
      errors.push_back({"DUPLICATE_LINK_ID", "span link id '" + link.id + "' is used more than once", {link.id}});
    if (!link.src && !link.tgt) {
      errors.push_back({"EMPTY_LINK", "span link has neither a source nor a target span", {link.id}});
      link_ok[k] = false;
    }
    for (Role r : {Role::Source, Role::Target}) {
      const auto& span = link.side(r);
      if (span && (span->start >= span->end || span->end > doc.side(r).size())) {
        errors.push_back({"INVALID_SPAN", std::string(to_string(r)) + " span [" + std::to_string(span->start) +
                                              "," + std::to_string(span->end) + ") is empty or out of range",
                          {link.id}});
        link_ok[k] = false;
      }
    }
    // Unlabeled links (pipeline output before labeling) may be one- or two-sided.
    if (link.label) {
      const bool one_sided = link.src.has_value() != link.tgt.has_value();
      if (is_addition(*link.label) != one_sided)
        errors.push_back({"LABEL_SIDE_MISMATCH",
                          std::string(to_string(*link.label)) +
                              (one_sided ? " requires both sides" : " must be attached to exactly one side"),
                          {link.id}});
    }
  }

  for (Role r : {Role::Source, Role::Target}) {
    std::vector<std::pair<Span, std::size_t>> spans;
    for (std::size_t k = 0; k < doc.span_links.size(); ++k)
      if (link_ok[k] && doc.span_links[k].side(r)) spans.emplace_back(*doc.span_links[k].side(r), k);
    std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
      return a.first.start != b.first.start ? a.first.start < b.first.start : a.second < b.second;
    });
    std::size_t reach = 0;
    std::size_t reach_link = 0;
    for (std::size_t s = 0; s < spans.size(); ++s) {
      const auto& [span, k] = spans[s];
      if (s > 0 && span.start < reach) {
        const auto& a = doc.span_links[reach_link];
        const auto& b = doc.span_links[k];
        errors.push_back({"OVERLAPPING_SPANS", std::string(to_string(r)) + " spans of '" + a.id + "' and '" +
                                                   b.id + "' overlap",
                          {a.id, b.id}});
      }
      if (span.end > reach) {
        reach = span.end;
        reach_link = k;
      }
    }
  }

  const auto src_owner = detail::owner_map(doc, Role::Source);
  const auto tgt_owner = detail::owner_map(doc, Role::Target);
  std::set<std::pair<std::size_t, std::size_t>> seen_pairs;
  for (const auto& w : doc.word_links) {
    const std::string pair_name = "(" + std::to_string(w.src) + "," + std::to_string(w.tgt) + ")";
    if (w.src >= doc.source.size() || w.tgt >= doc.target.size()) {
      errors.push_back({"WORD_LINK_OUT_OF_RANGE", "word link " + pair_name + " is out of range", {w.parent}});
      continue;
    }
    if (!seen_pairs.insert({w.src, w.tgt}).second)
      errors.push_back({"DUPLICATE_WORD_LINK", "word link " + pair_name + " appears more than once", {w.parent}});
    const long so = src_owner[w.src];
    const long to = tgt_owner[w.tgt];
    if (so >= 0 && to >= 0 && so != to) {
      errors.push_back({"WORD_LINK_CROSSES_SPANS",
                        "word link " + pair_name + " connects span links '" + doc.span_links[so].id + "' and '" +
                            doc.span_links[to].id + "'",
                        {doc.span_links[so].id, doc.span_links[to].id}});
      continue;
    }
    const SpanLink* parent = doc.find_link(w.parent);
    if (!parent) {
      errors.push_back({"ORPHAN_WORD_LINK", "word link " + pair_name + " refers to missing span link '" +
                                                w.parent + "'",
                        {w.parent}});
      continue;
    }
    if (!parent->two_sided()) {
      errors.push_back({"WORD_LINK_PARENT_ONE_SIDED",
                        "word link " + pair_name + " belongs to one-sided span link '" + w.parent + "'", {w.parent}});
      continue;
    }
    if (!parent->src->contains(w.src) || !parent->tgt->contains(w.tgt))
      errors.push_back({"WORD_LINK_OUTSIDE_PARENT",
                        "word link " + pair_name + " lies outside its span link '" + w.parent + "'", {w.parent}});
  }

  auto covered_once = [&](Role r) {
    std::vector<int> count(doc.side(r).size(), 0);
    for (const auto& link : doc.span_links) {
      const auto& span = link.side(r);
      if (!span || span->end > count.size()) continue;
      for (std::size_t i = span->start; i < span->end; ++i) ++count[i];
    }
    return std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
  };
  report.is_complete = covered_once(Role::Source) && covered_once(Role::Target);
  return report;
}

/// Structural validity only; incompleteness is not an error.
inline bool is_valid(const AlignmentDocument& doc) { return validate_document(doc).ok(); }

}  // namespace sialign
