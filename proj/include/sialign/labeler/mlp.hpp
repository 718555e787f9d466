#pragma once

// Span-link classifier: 3 features -> two ReLU layers -> softmax over the
// five non-addition labels.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "sialign/core/error.hpp"
#include "sialign/core/random.hpp"
#include "sialign/core/types.hpp"

namespace sialign {

inline constexpr std::array<Label, 5> kClassOrder = {Label::TRAN, Label::PARA, Label::SUM, Label::GEN, Label::REPL};
inline constexpr std::size_t kNumFeatures = 3;
inline constexpr std::size_t kNumClasses = kClassOrder.size();

inline std::optional<std::size_t> class_index(Label l) {
  for (std::size_t c = 0; c < kNumClasses; ++c)
    if (kClassOrder[c] == l) return c;
  return std::nullopt;
}

using FeatureVector = std::array<double, kNumFeatures>;

inline double scale_length(std::size_t tokens) { return std::log1p(static_cast<double>(tokens)); }

/// [similarity, log(1 + source tokens), log(1 + target tokens)].
inline FeatureVector extract_features(const SpanLink& link, double similarity) {
  if (!link.two_sided()) throw Error(ErrorCode::OneSided, "link '" + link.id + "' is one-sided");
  if (!std::isfinite(similarity) || similarity < -1.0 - 1e-9 || similarity > 1.0 + 1e-9)
    throw Error(ErrorCode::InvalidArgument, "similarity for link '" + link.id + "' is outside [-1, 1]");
  return {similarity, scale_length(link.src->size()), scale_length(link.tgt->size())};
}

/// Weights are row-major (out x in).
struct MLPParams {
  std::size_t hidden = 100;
  std::vector<double> w1, b1, w2, b2, w3, b3;
  std::uint64_t seed = 0;

  static MLPParams zeros(std::size_t hidden = 100) {
    MLPParams p;
    p.hidden = hidden;
    p.w1.assign(hidden * kNumFeatures, 0.0);
    p.b1.assign(hidden, 0.0);
    p.w2.assign(hidden * hidden, 0.0);
    p.b2.assign(hidden, 0.0);
    p.w3.assign(kNumClasses * hidden, 0.0);
    p.b3.assign(kNumClasses, 0.0);
    return p;
  }

  /// Uniform in +-1/sqrt(fan_in), drawn in the order w1 b1 w2 b2 w3 b3.
  static MLPParams random(std::uint64_t seed, std::size_t hidden = 100) {
    MLPParams p = zeros(hidden);
    p.seed = seed;
    Rng rng(seed);
    auto fill = [&](std::vector<double>& v, std::size_t fan_in) {
      const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (auto& x : v) x = uniform_in(rng, -r, r);
    };
    fill(p.w1, kNumFeatures);
    fill(p.b1, kNumFeatures);
    fill(p.w2, hidden);
    fill(p.b2, hidden);
    fill(p.w3, hidden);
    fill(p.b3, hidden);
    return p;
  }

  std::array<std::vector<double>*, 6> blocks() { return {&w1, &b1, &w2, &b2, &w3, &b3}; }
  std::array<const std::vector<double>*, 6> blocks() const { return {&w1, &b1, &w2, &b2, &w3, &b3}; }

  void check() const {
    const std::array<std::size_t, 6> want = {hidden * kNumFeatures, hidden, hidden * hidden, hidden,
                                             kNumClasses * hidden, kNumClasses};
    const auto b = blocks();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i]->size() != want[i]) throw Error(ErrorCode::SizeMismatch, "classifier parameter block has wrong shape");
      for (double v : *b[i])
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "classifier parameters are not finite");
    }
  }

  bool operator==(const MLPParams&) const = default;
};

using Probabilities = std::array<double, kNumClasses>;

/// Intermediate values of one forward pass, kept for backpropagation.
struct Activations {
  std::vector<double> z1, h1, z2, h2;
  std::array<double, kNumClasses> logits{};
  Probabilities probs{};
};

namespace detail {

inline void affine(const std::vector<double>& w, const std::vector<double>& b, const double* x, std::size_t in,
                   double* out) {
  const std::size_t rows = b.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double s = b[r];
    const double* wr = w.data() + r * in;
    for (std::size_t c = 0; c < in; ++c) s += wr[c] * x[c];
    out[r] = s;
  }
}

}  // namespace detail

/// Forward pass without parameter checks, for the training loop.
inline void forward_into(const MLPParams& p, const FeatureVector& x, Activations& a) {
  const std::size_t H = p.hidden;
  a.z1.resize(H);
  a.h1.resize(H);
  a.z2.resize(H);
  a.h2.resize(H);
  detail::affine(p.w1, p.b1, x.data(), kNumFeatures, a.z1.data());
  for (std::size_t i = 0; i < H; ++i) a.h1[i] = std::max(0.0, a.z1[i]);
  detail::affine(p.w2, p.b2, a.h1.data(), H, a.z2.data());
  for (std::size_t i = 0; i < H; ++i) a.h2[i] = std::max(0.0, a.z2[i]);
  detail::affine(p.w3, p.b3, a.h2.data(), H, a.logits.data());
  const double mx = *std::max_element(a.logits.begin(), a.logits.end());
  double z = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) z += a.probs[c] = std::exp(a.logits[c] - mx);
  for (auto& v : a.probs) v /= z;
}

inline Probabilities forward(const MLPParams& p, const FeatureVector& x) {
  p.check();
  Activations a;
  forward_into(p, x, a);
  return a.probs;
}

/// Argmax over class_order, first class wins ties.
inline Label predict_class(const Probabilities& probs) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c)
    if (probs[c] > probs[best]) best = c;
  return kClassOrder[best];
}

inline double cross_entropy(const Probabilities& probs, std::size_t target) {
  return -std::log(std::max(probs[target], 1e-300));
}

/// Adds d(cross-entropy)/d(params) for one example to `grad` (same shape as
/// the parameters) and returns the loss.
inline double accumulate_gradient(const MLPParams& p, const FeatureVector& x, std::size_t target, MLPParams& grad,
                                  Activations& a) {
  forward_into(p, x, a);
  const std::size_t H = p.hidden;
  std::array<double, kNumClasses> d3;
  for (std::size_t c = 0; c < kNumClasses; ++c) d3[c] = a.probs[c] - (c == target ? 1.0 : 0.0);
  std::vector<double> d2(H, 0.0), d1(H, 0.0);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    grad.b3[c] += d3[c];
    for (std::size_t h = 0; h < H; ++h) {
      grad.w3[c * H + h] += d3[c] * a.h2[h];
      d2[h] += p.w3[c * H + h] * d3[c];
    }
  }
  for (std::size_t h = 0; h < H; ++h)
    if (a.z2[h] <= 0) d2[h] = 0;
  for (std::size_t r = 0; r < H; ++r) {
    if (d2[r] == 0) continue;
    grad.b2[r] += d2[r];
    for (std::size_t c = 0; c < H; ++c) {
      grad.w2[r * H + c] += d2[r] * a.h1[c];
      d1[c] += p.w2[r * H + c] * d2[r];
    }
  }
  for (std::size_t h = 0; h < H; ++h) {
    if (a.z1[h] <= 0) continue;
    grad.b1[h] += d1[h];
    for (std::size_t c = 0; c < kNumFeatures; ++c) grad.w1[h * kNumFeatures + c] += d1[h] * x[c];
  }
  return cross_entropy(a.probs, target);
}

}  // namespace sialign
