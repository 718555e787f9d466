#pragma once

// Logic behind the `sialign` subcommands. Each command writes its report to
// `out` and returns the process exit code; failures surface as Error.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sialign/aligner/baselines.hpp"
#include "sialign/aligner/pipeline.hpp"
#include "sialign/analysis/tables.hpp"
#include "sialign/core/io.hpp"
#include "sialign/labeler/model_io.hpp"
#include "sialign/metrics/report.hpp"
#include "sialign/service/import.hpp"
#include "sialign/service/store.hpp"

namespace sialign::cli {

namespace fs = std::filesystem;

/// Alignment files named directly or found (recursively, *.json) under
/// directories, in sorted order.
inline std::vector<fs::path> expand_paths(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(a)) {
      out.emplace_back(a);
    } else {
      throw Error(ErrorCode::Io, "no such file or directory '" + a + "'");
    }
  }
  return out;
}

inline std::vector<AlignmentDocument> load_documents(const std::vector<std::string>& args) {
  std::vector<AlignmentDocument> docs;
  for (const auto& p : expand_paths(args)) docs.push_back(load_document(p));
  return docs;
}

inline void write_output(const std::optional<std::string>& path, std::ostream& out, const std::string& text) {
  if (path)
    write_file_atomic(*path, text);
  else
    out << text;
}

// ---------------------------------------------------------------- validate

inline int validate(const std::vector<std::string>& paths, std::ostream& out) {
  int status = 0;
  for (const auto& p : expand_paths(paths)) {
    try {
      const auto doc = load_document(p);
      const auto r = validate_document(doc);
      out << p.string() << '\t' << (r.ok() ? "ok" : "invalid") << '\t'
          << (r.is_complete ? "complete" : "incomplete") << '\n';
      for (const auto& e : r.errors) out << "  " << e.code << ": " << e.message << '\n';
      if (!r.ok()) status = 1;
    } catch (const Error& e) {
      out << p.string() << "\terror\t" << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

// ------------------------------------------------------------------- stats

struct StatsOptions {
  std::vector<std::string> paths;
  bool split = false;
  std::optional<std::string> plot_dir;
};

/// With `split`, one block per dataset split (documents without a split go
/// to "unknown") followed by the combined block.
inline int stats(const StatsOptions& o, std::ostream& out) {
  const auto docs = load_documents(o.paths);
  if (docs.empty()) throw Error(ErrorCode::InvalidArgument, "no documents found");
  if (o.split) {
    std::map<std::string, std::vector<AlignmentDocument>> by_split;
    for (const auto& d : docs) by_split[d.meta.split.empty() ? "unknown" : d.meta.split].push_back(d);
    for (const auto& [name, group] : by_split) {
      out << "## split=" << name << '\n';
      write_stats(out, group);
      out << '\n';
    }
    out << "## split=all\n";
  }
  write_stats(out, docs);
  if (o.plot_dir) {
    fs::create_directories(*o.plot_dir);
    for (const char* by : {"label", "annotator"}) {
      if (std::string(by) == "annotator" &&
          std::any_of(docs.begin(), docs.end(), [](const auto& d) { return d.meta.annotator_id.empty(); }))
        continue;
      std::ostringstream ss;
      write_span_length_samples(ss, span_length_distribution(docs, by));
      write_file_atomic(fs::path(*o.plot_dir) / (std::string("span_lengths_by_") + by + ".tsv"), ss.str());
    }
  }
  return 0;
}

// ------------------------------------------------------------------- align

inline AlignerParams params_from_json(const nlohmann::json& j) {
  AlignerParams p;
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "aligner parameters must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "max_align") p.max_align = v.get<std::size_t>();
      else if (key == "top_k") p.top_k = v.get<std::size_t>();
      else if (key == "window") p.window = v.get<std::size_t>();
      else if (key == "skip") p.skip = v.get<double>();
      else if (key == "len_penalty") p.len_penalty = v.get<bool>();
      else if (key == "itermax_iters") p.itermax_iters = v.get<std::size_t>();
      else if (key == "itermax_decay") p.itermax_decay = v.get<double>();
      else if (key == "baseline_window") p.baseline_window = v.get<std::size_t>();
      else if (key == "baseline_stride") p.baseline_stride = v.get<std::size_t>();
      else if (key == "baseline_max_distance")
        p.baseline_max_distance = v.is_null() ? std::nullopt : std::optional<std::size_t>(v.get<std::size_t>());
      else if (key == "seed") p.seed = v.get<std::uint64_t>();
      else throw Error(ErrorCode::InvalidArgument, "unknown aligner parameter '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("aligner parameters: ") + e.what());
  }
  p.check();
  return p;
}

inline AlignerParams load_params(const fs::path& path) {
  try {
    return params_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
}

/// The two transcripts of a pair: a canonical alignment file (links are
/// ignored), or a prefix `P` with files `P.source.<lang>.txt` and
/// `P.target.<lang>.txt`.
inline AlignmentDocument load_pair(const fs::path& pair) {
  if (fs::is_regular_file(pair)) return load_document(pair);
  const auto dir = pair.has_parent_path() ? pair.parent_path() : fs::path(".");
  const auto stem = pair.filename().string();
  AlignmentDocument doc;
  doc.pair_id = stem;
  bool found[2] = {false, false};
  if (fs::is_directory(dir))
    for (const auto& e : fs::directory_iterator(dir)) {
      const auto t = detail::transcript_file_name(e.path().filename().string());
      if (!t || t->pair != stem) continue;
      const int s = t->role == Role::Source ? 0 : 1;
      if (found[s]) throw Error(ErrorCode::InvalidArgument, "several " + std::string(to_string(t->role)) + " transcripts for '" + stem + "'");
      doc.side(t->role) = parse_transcript(read_file(e.path()), stem + "." + std::string(to_string(t->role)), t->lang, t->role);
      found[s] = true;
    }
  if (!found[0] || !found[1])
    throw Error(ErrorCode::Io, "'" + pair.string() + "' is neither an alignment file nor a transcript pair prefix");
  return doc;
}

struct AlignOptions {
  std::string pair;
  std::vector<std::string> line_emb;  // source, target
  std::vector<std::string> tok_emb;   // source, target
  std::optional<std::size_t> fallback_dim;
  std::optional<std::string> params;
  std::optional<std::string> labeler;
  bool sub_segment = true;
  std::optional<std::string> out;
};

inline SideEmbeddingData side_embeddings(const TranscriptSide& side, const std::vector<std::string>& line_emb,
                                         const std::vector<std::string>& tok_emb, std::size_t index,
                                         std::optional<std::size_t> fallback_dim) {
  if (fallback_dim) return fallback_side_embeddings(side, *fallback_dim);
  if (line_emb.size() != 2 || tok_emb.size() != 2)
    throw Error(ErrorCode::InvalidArgument, "need --line-emb SRC TGT and --tok-emb SRC TGT, or --fallback-embed DIM");
  SideEmbeddingData d{load_embeddings(line_emb[index]), load_embeddings(tok_emb[index])};
  if (d.lines.unit != EmbeddingUnit::Line) throw Error(ErrorCode::InvalidArgument, line_emb[index] + " is not a line embedding file");
  if (d.tokens.unit != EmbeddingUnit::Token) throw Error(ErrorCode::InvalidArgument, tok_emb[index] + " is not a token embedding file");
  return d;
}

inline AlignmentDocument align(const AlignOptions& o) {
  const auto pair = load_pair(o.pair);
  const auto params = o.params ? load_params(*o.params) : AlignerParams{};
  const auto src = side_embeddings(pair.source, o.line_emb, o.tok_emb, 0, o.fallback_dim);
  const auto tgt = side_embeddings(pair.target, o.line_emb, o.tok_emb, 1, o.fallback_dim);
  std::optional<MLPParams> model;
  if (o.labeler) model = load_model(*o.labeler);
  PipelineOptions opts;
  opts.sub_segment = o.sub_segment;
  opts.classifier = model ? &*model : nullptr;
  auto doc = run_pipeline(pair.source, pair.target, src.view(), tgt.view(), params, opts, pair.pair_id);
  doc.meta = pair.meta;
  return doc;
}

inline int align(const AlignOptions& o, std::ostream& out) {
  write_output(o.out, out, serialize(align(o)));
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::vector<std::string> ref;
  std::vector<std::string> hyp;
  std::optional<std::size_t> k;
  std::string system = "system";
  bool key_values = false;
};

/// References and hypotheses are paired by pair id.
inline int evaluate(const EvaluateOptions& o, std::ostream& out) {
  std::map<std::string, AlignmentDocument> hyps;
  for (auto& d : load_documents(o.hyp)) {
    auto id = d.pair_id;
    if (!hyps.emplace(std::move(id), std::move(d)).second)
      throw Error(ErrorCode::DuplicateId, "several hypotheses for one pair id");
  }
  std::vector<DocumentEvaluation> evals;
  for (const auto& ref : load_documents(o.ref)) {
    const auto it = hyps.find(ref.pair_id);
    if (it == hyps.end()) throw Error(ErrorCode::NotFound, "no hypothesis for '" + ref.pair_id + "'");
    evals.push_back(evaluate_document(ref, it->second, o.k));
  }
  if (evals.empty()) throw Error(ErrorCode::InvalidArgument, "no reference documents");
  const std::vector<EvaluationRow> rows{aggregate(o.system, evals)};
  if (o.key_values)
    write_key_values(out, rows);
  else
    write_table(out, rows);
  return 0;
}

// ------------------------------------------------------------------- kappa

inline int kappa(const std::string& a_path, const std::string& b_path, std::ostream& out) {
  const auto a = load_document(a_path);
  const auto b = load_document(b_path);
  out << "side\tsegmentation_kappa\tlabel_kappa\n";
  for (Role r : {Role::Source, Role::Target})
    out << to_string(r) << '\t' << detail::num(segmentation_kappa(a, b, r).kappa) << '\t'
        << detail::num(label_kappa(a, b, r).kappa) << '\n';
  if (!a.span_links.empty() && !b.span_links.empty()) {
    const auto ab = evaluate_span_alignment(a.span_links, b.span_links);
    const auto ba = evaluate_span_alignment(b.span_links, a.span_links);
    out << "reference\texact_with_labels\texact_without_labels\n";
    out << "a\t" << detail::num(ab.exact_with_labels, 2) << '\t' << detail::num(ab.exact_without_labels, 2) << '\n';
    out << "b\t" << detail::num(ba.exact_with_labels, 2) << '\t' << detail::num(ba.exact_without_labels, 2) << '\n';
  }
  return 0;
}

// --------------------------------------------------------------- baselines

inline int baseline_random(const std::string& ref, std::uint64_t seed, const std::optional<std::string>& out_path,
                           std::ostream& out) {
  write_output(out_path, out, serialize(random_baseline(load_document(ref), seed)));
  return 0;
}

struct BaselineWordOptions {
  std::vector<std::string> tok_emb;  // source, target
  std::optional<std::string> doc;    // transcripts for --fallback-embed; reference for scoring
  std::optional<std::size_t> fallback_dim;
  std::optional<std::size_t> max_distance = 50;
  std::optional<std::string> out;
};

/// Prints "src<TAB>tgt" token pairs; with a reference document that carries
/// word links, also prints AER and F1 as comments.
inline int baseline_word(const BaselineWordOptions& o, std::ostream& out) {
  std::optional<AlignmentDocument> doc;
  if (o.doc) doc = load_document(*o.doc);
  EmbeddingMatrix src, tgt;
  if (o.fallback_dim) {
    if (!doc) throw Error(ErrorCode::InvalidArgument, "--fallback-embed needs --doc");
    src = fallback_side_embeddings(doc->source, *o.fallback_dim).tokens;
    tgt = fallback_side_embeddings(doc->target, *o.fallback_dim).tokens;
  } else {
    if (o.tok_emb.size() != 2) throw Error(ErrorCode::InvalidArgument, "need --tok-emb SRC TGT or --fallback-embed DIM");
    src = load_embeddings(o.tok_emb[0]);
    tgt = load_embeddings(o.tok_emb[1]);
  }
  if (doc && (src.rows() != doc->source.size() || tgt.rows() != doc->target.size()))
    throw Error(ErrorCode::SizeMismatch, "token embeddings do not match the document's token counts");
  AlignerParams p;
  p.baseline_max_distance = o.max_distance;
  const auto pairs = baseline_word_align(src, tgt, p);
  std::ostringstream ss;
  if (doc && !doc->word_links.empty()) {
    const auto s = evaluate_word_alignment(pairs, reference_word_links(*doc));
    ss << "# aer=" << detail::num(s.aer) << " f1=" << (s.f1 ? detail::num(*s.f1) : "n/a") << '\n';
  }
  ss << "src\ttgt\n";
  for (const auto& [i, j] : pairs) ss << i << '\t' << j << '\n';
  write_output(o.out, out, ss.str());
  return 0;
}

// ----------------------------------------------------------- train-labeler

struct TrainLabelerOptions {
  std::string data;
  std::string out;
  std::uint64_t seed = 0;
  std::optional<std::string> emb_dir;  // <pair_id>.<source|target>.token.emb
  std::size_t fallback_dim = 64;
  std::size_t hidden = 100;
  std::size_t max_epochs = 500;
  double learning_rate = 1e-3;
};

inline std::vector<TrainingExample> labeler_examples(const std::vector<AlignmentDocument>& docs,
                                                     const TrainLabelerOptions& o) {
  std::vector<TrainingExample> data;
  for (const auto& d : docs) {
    EmbeddingMatrix src, tgt;
    if (o.emb_dir) {
      src = load_embeddings(fs::path(*o.emb_dir) / (d.pair_id + ".source.token.emb"));
      tgt = load_embeddings(fs::path(*o.emb_dir) / (d.pair_id + ".target.token.emb"));
      if (src.rows() != d.source.size() || tgt.rows() != d.target.size())
        throw Error(ErrorCode::SizeMismatch, "token embeddings of '" + d.pair_id + "' do not match its transcripts");
    } else {
      src = fallback_side_embeddings(d.source, o.fallback_dim).tokens;
      tgt = fallback_side_embeddings(d.target, o.fallback_dim).tokens;
    }
    const auto ex = training_examples(d, span_similarities(d.span_links, src, tgt));
    data.insert(data.end(), ex.begin(), ex.end());
  }
  return data;
}

inline int train_labeler(const TrainLabelerOptions& o, std::ostream& out) {
  const auto docs = load_documents({o.data});
  if (!o.emb_dir) warn("no --emb-dir given, span similarities come from the fallback embedder");
  const auto data = labeler_examples(docs, o);
  TrainConfig cfg;
  cfg.seed = o.seed;
  cfg.hidden = o.hidden;
  cfg.max_epochs = o.max_epochs;
  cfg.learning_rate = o.learning_rate;
  const auto r = train(data, cfg);
  save_model(o.out, r.params);
  out << "examples\t" << data.size() << "\ntrain\t" << r.train_size << "\nheldout\t" << r.heldout_size
      << "\nepochs\t" << r.epochs_run << "\nbest_epoch\t" << r.best_epoch << "\nheldout_accuracy\t"
      << detail::num(r.heldout_accuracy) << "\nmodel\t" << o.out << '\n';
  return 0;
}

// ------------------------------------------------------------------ import

inline int import_into(const std::string& dataset, DocumentStore& store, std::ostream& out) {
  auto r = import_dataset(dataset);
  for (auto it = r.documents.begin(); it != r.documents.end();) {
    try {
      store.add(it->document);
      ++it;
    } catch (const Error& e) {
      r.failures.push_back({it->document.pair_id, e.what()});
      it = r.documents.erase(it);
    }
  }
  write_import_summary(out, r);
  return r.failures.empty() ? 0 : 1;
}

}  // namespace sialign::cli
