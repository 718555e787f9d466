#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "sialign/cli/commands.hpp"
#include "sialign/service/server.hpp"

using namespace sialign;

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int serve(const std::string& store_dir, const std::string& host, int port, const std::optional<std::string>& import) {
  DocumentStore store(store_dir);
  if (import) cli::import_into(*import, store, std::cerr);
  Api api(store);
  httplib::Server server;
  mount(server, api);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "serving " << store.ids().size() << " document(s) from " << store_dir << " on http://" << host << ':'
            << port << '\n';
  if (!server.listen(host, port)) throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Span-level alignment toolkit for interpreting transcripts"};
  app.require_subcommand(1);
  int status = 0;

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Check alignment files against the document invariants");
  validate->add_option("paths", validate_paths, "Alignment files or directories")->required();
  validate->callback([&] { status = cli::validate(validate_paths, std::cout); });

  cli::StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics as tab-separated tables");
  stats_cmd->add_option("paths", stats.paths, "Alignment files or directories")->required();
  stats_cmd->add_flag("--split", stats.split, "Report each dataset split separately, then combined");
  stats_cmd->add_option("--plot-dir", stats.plot_dir, "Write span-length samples for box plots here");
  stats_cmd->callback([&] { status = cli::stats(stats, std::cout); });

  cli::AlignOptions align;
  bool default_labels = false;
  bool no_sub = false;
  auto* align_cmd = app.add_subcommand("align", "Automatic span alignment of one transcript pair");
  align_cmd->add_option("pair", align.pair, "Alignment file, or prefix of <pair>.source.<lang>.txt/<pair>.target.<lang>.txt")
      ->required();
  align_cmd->add_option("--line-emb", align.line_emb, "Line embedding files (source target)")->expected(2);
  align_cmd->add_option("--tok-emb", align.tok_emb, "Token embedding files (source target)")->expected(2);
  align_cmd->add_option("--fallback-embed", align.fallback_dim, "Use hashed-trigram embeddings of this dimension");
  align_cmd->add_option("--params", align.params, "Aligner parameters (JSON)");
  auto* labeler_opt = align_cmd->add_option("--labeler", align.labeler, "Span label classifier model");
  align_cmd->add_flag("--default-labels", default_labels, "TRAN for two-sided links, ADDU otherwise")->excludes(labeler_opt);
  align_cmd->add_flag("--no-sub-segment", no_sub, "Skip punctuation sub-segmentation");
  align_cmd->add_option("-o,--out", align.out, "Output file (default: stdout)");
  align_cmd->callback([&] {
    align.sub_segment = !no_sub;
    status = cli::align(align, std::cout);
  });

  cli::EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score hypotheses against references");
  eval_cmd->add_option("--ref", eval.ref, "Reference files or directories")->required();
  eval_cmd->add_option("--hyp", eval.hyp, "Hypothesis files or directories")->required();
  eval_cmd->add_option("--k", eval.k, "Pk/WindowDiff window (default: half the mean reference segment length)");
  eval_cmd->add_option("--system", eval.system, "System name in the report");
  eval_cmd->add_flag("--kv", eval.key_values, "key=value output");
  eval_cmd->callback([&] { status = cli::evaluate(eval, std::cout); });

  std::string kappa_a, kappa_b;
  auto* kappa_cmd = app.add_subcommand("kappa", "Agreement between two annotations of one recording");
  kappa_cmd->add_option("--a", kappa_a, "First annotation")->required();
  kappa_cmd->add_option("--b", kappa_b, "Second annotation")->required();
  kappa_cmd->callback([&] { status = cli::kappa(kappa_a, kappa_b, std::cout); });

  std::string random_ref;
  std::uint64_t random_seed = 0;
  std::optional<std::string> random_out;
  auto* random_cmd = app.add_subcommand("baseline-random", "Random segmentation and labels matching a reference");
  random_cmd->add_option("--ref", random_ref, "Reference alignment")->required();
  random_cmd->add_option("--seed", random_seed, "Random seed");
  random_cmd->add_option("-o,--out", random_out, "Output file (default: stdout)");
  random_cmd->callback([&] { status = cli::baseline_random(random_ref, random_seed, random_out, std::cout); });

  cli::BaselineWordOptions word;
  std::size_t max_distance = 50;
  bool no_filter = false;
  auto* word_cmd = app.add_subcommand("baseline-word", "Itermax over whole transcripts with a distance filter");
  word_cmd->add_option("--tok-emb", word.tok_emb, "Token embedding files (source target)")->expected(2);
  word_cmd->add_option("--doc", word.doc, "Alignment file: transcripts for --fallback-embed and reference word links");
  word_cmd->add_option("--fallback-embed", word.fallback_dim, "Use hashed-trigram embeddings of this dimension");
  word_cmd->add_option("--max-distance", max_distance, "Drop pairs further apart than this many tokens");
  word_cmd->add_flag("--no-filter", no_filter, "Keep all pairs");
  word_cmd->add_option("-o,--out", word.out, "Output file (default: stdout)");
  word_cmd->callback([&] {
    word.max_distance = no_filter ? std::nullopt : std::optional<std::size_t>(max_distance);
    status = cli::baseline_word(word, std::cout);
  });

  cli::TrainLabelerOptions tl;
  auto* train_cmd = app.add_subcommand("train-labeler", "Train the span label classifier");
  train_cmd->add_option("--data", tl.data, "Directory of annotated alignment files")->required();
  train_cmd->add_option("--out", tl.out, "Model file to write")->required();
  train_cmd->add_option("--seed", tl.seed, "Random seed");
  train_cmd->add_option("--emb-dir", tl.emb_dir, "Token embeddings named <pair_id>.<source|target>.token.emb");
  train_cmd->add_option("--fallback-embed", tl.fallback_dim, "Fallback embedding dimension without --emb-dir");
  train_cmd->add_option("--hidden", tl.hidden, "Hidden layer width");
  train_cmd->add_option("--epochs", tl.max_epochs, "Maximum epochs");
  train_cmd->add_option("--lr", tl.learning_rate, "Learning rate");
  train_cmd->callback([&] { status = cli::train_labeler(tl, std::cout); });

  std::string store_dir, host = "127.0.0.1", import_dir;
  int port = 8080;
  std::optional<std::string> serve_import;
  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation HTTP service");
  serve_cmd->add_option("--store", store_dir, "Store directory")->required();
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--import", serve_import, "Import a dataset directory before serving");
  serve_cmd->callback([&] { status = serve(store_dir, host, port, serve_import); });

  auto* import_cmd = app.add_subcommand("import", "Import a dataset directory into a store");
  import_cmd->add_option("--store", store_dir, "Store directory")->required();
  import_cmd->add_option("dataset", import_dir, "Dataset directory")->required();
  import_cmd->callback([&] {
    DocumentStore store(store_dir);
    status = cli::import_into(import_dir, store, std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "sialign: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sialign: " << e.what() << '\n';
    return 2;
  }
  return status;
}
