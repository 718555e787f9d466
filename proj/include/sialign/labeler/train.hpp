#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sialign/core/log.hpp"
#include "sialign/labeler/mlp.hpp"

namespace sialign {

struct TrainingExample {
  FeatureVector x{};
  Label label = Label::TRAN;
};

struct TrainConfig {
  double train_fraction = 0.8;
  double learning_rate = 1e-3;
  std::size_t max_epochs = 500;
  std::size_t patience = 10;  // 0 disables early stopping
  std::size_t hidden = 100;
  std::uint64_t seed = 0;
};

struct TrainResult {
  MLPParams params;            // best held-out checkpoint
  std::size_t best_epoch = 0;  // 0 means the initialization
  std::size_t epochs_run = 0;
  double initial_train_loss = 0;
  std::vector<double> train_loss;    // mean over the training split, after each epoch
  std::vector<double> heldout_loss;  // after each epoch
  double heldout_accuracy = 0;       // of the returned checkpoint
  std::size_t train_size = 0, heldout_size = 0;
};

inline double mean_loss(const MLPParams& p, const std::vector<TrainingExample>& data,
                        const std::vector<std::size_t>& idx) {
  Activations a;
  double s = 0;
  for (std::size_t i : idx) {
    forward_into(p, data[i].x, a);
    s += cross_entropy(a.probs, *class_index(data[i].label));
  }
  return idx.empty() ? 0.0 : s / static_cast<double>(idx.size());
}

inline double accuracy(const MLPParams& p, const std::vector<TrainingExample>& data,
                       const std::vector<std::size_t>& idx) {
  Activations a;
  std::size_t ok = 0;
  for (std::size_t i : idx) {
    forward_into(p, data[i].x, a);
    ok += predict_class(a.probs) == data[i].label;
  }
  return idx.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(idx.size());
}

/// Plain per-example SGD on cross-entropy. The seed fixes the
/// initialization, the train/held-out split and the per-epoch order.
/// Gradients are summed in the fixed layer order of accumulate_gradient and
/// examples are visited strictly sequentially, so a run is reproducible bit
/// for bit.
inline TrainResult train(const std::vector<TrainingExample>& data, const TrainConfig& cfg) {
  if (!(cfg.train_fraction > 0 && cfg.train_fraction < 1))
    throw Error(ErrorCode::InvalidArgument, "train_fraction must be in (0, 1)");
  if (data.size() < 10) throw Error(ErrorCode::InvalidArgument, "training needs at least 10 examples");
  std::map<Label, std::size_t> counts;
  for (const auto& e : data) {
    if (!class_index(e.label))
      throw Error(ErrorCode::InvalidArgument, "label " + std::string(to_string(e.label)) + " is not a classifier class");
    for (double v : e.x)
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "training features are not finite");
    ++counts[e.label];
  }
  if (counts.size() < 2) throw Error(ErrorCode::InvalidArgument, "training data contains a single class");
  std::size_t most = 0, least = data.size();
  for (const auto& [l, c] : counts) most = std::max(most, c), least = std::min(least, c);
  if (least * 10 < most) {
    std::string msg = "class imbalance in training data:";
    for (const auto& [l, c] : counts) msg += " " + std::string(to_string(l)) + "=" + std::to_string(c);
    warn(msg);
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);
  auto n_train = static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(data.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, data.size() - 1);
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  const std::vector<std::size_t> held_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

  TrainResult res;
  res.train_size = train_idx.size();
  res.heldout_size = held_idx.size();
  MLPParams p = MLPParams::random(cfg.seed, cfg.hidden);
  res.params = p;
  res.initial_train_loss = mean_loss(p, data, train_idx);
  double best = mean_loss(p, data, held_idx);
  std::size_t since_best = 0;
  MLPParams grad = MLPParams::zeros(cfg.hidden);
  Activations a;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle(train_idx, rng);
    for (std::size_t i : train_idx) {
      for (auto* b : grad.blocks()) std::fill(b->begin(), b->end(), 0.0);
      accumulate_gradient(p, data[i].x, *class_index(data[i].label), grad, a);
      auto pb = p.blocks();
      auto gb = grad.blocks();
      for (std::size_t k = 0; k < pb.size(); ++k)
        for (std::size_t j = 0; j < pb[k]->size(); ++j) (*pb[k])[j] -= cfg.learning_rate * (*gb[k])[j];
    }
    const double tl = mean_loss(p, data, train_idx);
    const double hl = mean_loss(p, data, held_idx);
    if (!std::isfinite(tl) || !std::isfinite(hl))
      throw Error(ErrorCode::NonFinite, "training diverged at epoch " + std::to_string(epoch));
    res.train_loss.push_back(tl);
    res.heldout_loss.push_back(hl);
    res.epochs_run = epoch;
    if (hl < best) {
      best = hl;
      res.params = p;
      res.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience && ++since_best >= cfg.patience) {
      break;
    }
  }
  res.params.seed = cfg.seed;
  res.heldout_accuracy = accuracy(res.params, data, held_idx);
  return res;
}

}  // namespace sialign
