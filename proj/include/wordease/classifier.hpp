#pragma once

// Probabilistic linear classifier for "is this word hard to say".
//
// f(x) = w.x + b,  P(hard | x) = sigmoid(f(x)).
// Training minimises the class-weighted, L2-regularised logistic loss
//
//   lambda/2 (|w|^2 + b^2) + sum_i c_i log(1 + exp(-y_i f(x_i)))
//
// with c_i = 1 / (2 * count(label_i)), so both classes carry equal total
// weight however skewed the feedback stream is. The bias is regularised as a
// constant feature. The solver is a full-batch truncated Newton (conjugate
// gradient) method with Armijo backtracking, which is deterministic: the
// same examples in the same order give bit-identical weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wordease/error.hpp"
#include "wordease/sparse.hpp"

namespace wordease {

enum class Label { Easy, Hard };

inline const char* to_string(Label l) { return l == Label::Hard ? "HARD" : "EASY"; }

struct LabeledExample {
  std::string word;
  SparseVector vector;
  Label label;
};

struct TrainingConfig {
  double lambda = 1e-3;
  double tolerance = 1e-6;  // relative gradient norm
  int max_epochs = 2000;    // Newton iterations, each a few passes over the data
  // Kept for config/serialisation compatibility with stochastic solvers. The
  // Newton solver is deterministic, so it has no effect on the result.
  std::uint64_t seed = 42;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

struct TrainingStats {
  int epochs = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

struct TriggerModel {
  std::vector<double> weights;
  double bias = 0.0;
  TrainingConfig config;
  TrainingStats stats;
  std::string embedding_fingerprint;

  [[nodiscard]] std::size_t dimension() const noexcept { return weights.size(); }
};

inline double sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow
inline double logistic_loss(double margin) noexcept {
  if (margin > 0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

inline double decision_value(const TriggerModel& model, SparseView x) {
  if (!x.indices.empty() && x.indices.back() >= model.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature index " + std::to_string(x.indices.back()) + " >= model dimension " +
                    std::to_string(model.dimension()));
  }
  return x.dot(model.weights) + model.bias;
}

inline double decision_value(const TriggerModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                                  " != model dimension " +
                                                  std::to_string(model.dimension()));
  }
  double sum = model.bias;
  for (std::size_t k = 0; k < x.size(); ++k) sum += model.weights[k] * x[k];
  return sum;
}

inline double prob_hard(const TriggerModel& model, SparseView x) {
  return sigmoid(decision_value(model, x));
}

inline double prob_hard(const TriggerModel& model, std::span<const double> x) {
  return sigmoid(decision_value(model, x));
}

/// Binary entropy in bits, 0 log 0 := 0.
inline double entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "probability " + std::to_string(p) + " outside [0,1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

namespace detail {

// Examples packed as CSR with a per-row label sign and class weight.
class TrainingProblem {
 public:
  TrainingProblem(const std::vector<LabeledExample>& examples, std::size_t dimension)
      : dim_(dimension) {
    std::size_t hard = 0;
    for (const auto& ex : examples) hard += ex.label == Label::Hard ? 1 : 0;
    const std::size_t easy = examples.size() - hard;
    if (hard == 0 || easy == 0) {
      throw Error(ErrorCode::DegenerateLabels, "training needs both classes (easy=" +
                                                   std::to_string(easy) +
                                                   ", hard=" + std::to_string(hard) + ")");
    }
    offsets_.push_back(0);
    for (const auto& ex : examples) {
      if (ex.vector.indices.size() != ex.vector.values.size()) {
        throw Error(ErrorCode::DimensionMismatch, "malformed sparse vector for '" + ex.word + "'");
      }
      for (auto idx : ex.vector.indices) {
        if (idx >= dimension) {
          throw Error(ErrorCode::DimensionMismatch, "example '" + ex.word + "' has feature " +
                                                        std::to_string(idx) + " >= dimension " +
                                                        std::to_string(dimension));
        }
      }
      indices_.insert(indices_.end(), ex.vector.indices.begin(), ex.vector.indices.end());
      values_.insert(values_.end(), ex.vector.values.begin(), ex.vector.values.end());
      offsets_.push_back(indices_.size());
      const bool is_hard = ex.label == Label::Hard;
      sign_.push_back(is_hard ? 1.0 : -1.0);
      weight_.push_back(0.5 / static_cast<double>(is_hard ? hard : easy));
    }
  }

  [[nodiscard]] std::size_t rows() const noexcept { return sign_.size(); }
  [[nodiscard]] std::size_t params() const noexcept { return dim_ + 1; }

  [[nodiscard]] SparseView row(std::size_t i) const noexcept {
    const auto b = offsets_[i];
    const auto e = offsets_[i + 1];
    return {std::span<const std::uint32_t>(indices_).subspan(b, e - b),
            std::span<const double>(values_).subspan(b, e - b)};
  }

  // theta = [w..., b]
  [[nodiscard]] double score(std::size_t i, std::span<const double> theta) const noexcept {
    return row(i).dot(theta) + theta[dim_];
  }

  void add_row(std::size_t i, double scale, std::span<double> out) const noexcept {
    row(i).axpy(scale, out);
    out[dim_] += scale;
  }

  [[nodiscard]] double sign(std::size_t i) const noexcept { return sign_[i]; }
  [[nodiscard]] double weight(std::size_t i) const noexcept { return weight_[i]; }

 private:
  std::size_t dim_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
  std::vector<double> sign_;
  std::vector<double> weight_;
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

}  // namespace detail

inline TriggerModel train(const std::vector<LabeledExample>& examples, std::size_t dimension,
                          const TrainingConfig& config = {}) {
  if (!(config.lambda > 0.0)) throw Error(ErrorCode::InvalidConfig, "lambda must be positive");
  if (config.max_epochs < 1) throw Error(ErrorCode::InvalidConfig, "max_epochs must be >= 1");
  const detail::TrainingProblem prob(examples, dimension);
  const std::size_t n = prob.rows();
  const std::size_t p = prob.params();
  const double lambda = config.lambda;

  std::vector<double> theta(p, 0.0);
  std::vector<double> margin(n, 0.0);  // y_i * f(x_i)
  std::vector<double> grad(p);
  std::vector<double> curvature(n);

  const auto objective = [&](std::span<const double> t, std::vector<double>& m) {
    double f = 0.5 * lambda * detail::dot(t, t);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = prob.sign(i) * prob.score(i, t);
      f += prob.weight(i) * logistic_loss(m[i]);
    }
    return f;
  };
  const auto gradient = [&]() {
    for (std::size_t k = 0; k < p; ++k) grad[k] = lambda * theta[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sigmoid(-margin[i]);
      prob.add_row(i, -prob.weight(i) * prob.sign(i) * s, grad);
      curvature[i] = prob.weight(i) * s * (1.0 - s);
    }
  };
  // out = H v
  std::vector<double> xv(n);
  const auto hessian_times = [&](std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) xv[i] = prob.score(i, v);
    for (std::size_t k = 0; k < p; ++k) out[k] = lambda * v[k];
    for (std::size_t i = 0; i < n; ++i) prob.add_row(i, curvature[i] * xv[i], out);
  };

  double f = objective(theta, margin);
  gradient();
  const double g0 = detail::norm(grad);
  double gnorm = g0;

  TrainingStats stats;
  std::vector<double> step(p), r(p), d(p), hd(p), trial(p), trial_margin(n);
  const std::size_t max_cg = std::min<std::size_t>(p, 500);
  while (stats.epochs < config.max_epochs) {
    if (gnorm <= config.tolerance * g0) {
      stats.converged = true;
      break;
    }
    ++stats.epochs;

    // Truncated CG on H step = -grad.
    const double forcing = std::min(0.1, std::sqrt(gnorm / g0)) * gnorm;
    std::fill(step.begin(), step.end(), 0.0);
    for (std::size_t k = 0; k < p; ++k) r[k] = -grad[k];
    d = r;
    double rr = detail::dot(r, r);
    for (std::size_t it = 0; it < max_cg && std::sqrt(rr) > forcing; ++it) {
      hessian_times(d, hd);
      const double dhd = detail::dot(d, hd);
      if (!(dhd > 0.0)) break;
      const double alpha = rr / dhd;
      for (std::size_t k = 0; k < p; ++k) {
        step[k] += alpha * d[k];
        r[k] -= alpha * hd[k];
      }
      const double rr_new = detail::dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t k = 0; k < p; ++k) d[k] = r[k] + beta * d[k];
    }

    const double slope = detail::dot(grad, step);
    double t = 1.0;
    double f_trial = f;
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      for (std::size_t k = 0; k < p; ++k) trial[k] = theta[k] + t * step[k];
      f_trial = objective(trial, trial_margin);
      if (f_trial <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no descent possible at working precision
    theta.swap(trial);
    margin.swap(trial_margin);
    f = f_trial;
    gradient();
    gnorm = detail::norm(grad);
  }
  if (gnorm <= config.tolerance * g0) stats.converged = true;
  stats.gradient_norm = gnorm;

  TriggerModel model;
  model.bias = theta.back();
  theta.pop_back();
  model.weights = std::move(theta);
  model.config = config;
  model.stats = stats;
  return model;
}

inline void to_json(nlohmann::json& j, const TrainingConfig& c) {
  j = {{"lambda", c.lambda}, {"tolerance", c.tolerance}, {"max_epochs", c.max_epochs}, {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, TrainingConfig& c) {
  c = TrainingConfig{};
  if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
  if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
  if (j.contains("max_epochs")) c.max_epochs = j.at("max_epochs").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
}

inline constexpr int kTriggerModelFormatVersion = 1;

inline void to_json(nlohmann::json& j, const TriggerModel& m) {
  j = {{"format", "wordease.trigger_model"},
       {"format_version", kTriggerModelFormatVersion},
       {"dimension", m.dimension()},
       {"weights", m.weights},
       {"bias", m.bias},
       {"config", m.config},
       {"training", {{"epochs", m.stats.epochs},
                     {"converged", m.stats.converged},
                     {"gradient_norm", m.stats.gradient_norm}}},
       {"embedding_fingerprint", m.embedding_fingerprint}};
}

inline void from_json(const nlohmann::json& j, TriggerModel& m) {
  try {
    if (j.at("format").get<std::string>() != "wordease.trigger_model") {
      throw Error(ErrorCode::InvalidFormat, "not a trigger model document");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kTriggerModelFormatVersion) {
      throw Error(ErrorCode::InvalidFormat,
                  "unsupported trigger model format_version " + std::to_string(version));
    }
    m.weights = j.at("weights").get<std::vector<double>>();
    if (j.at("dimension").get<std::size_t>() != m.weights.size()) {
      throw Error(ErrorCode::DimensionMismatch, "trigger model weights/dimension disagree");
    }
    m.bias = j.at("bias").get<double>();
    m.config = j.at("config").get<TrainingConfig>();
    const auto& t = j.at("training");
    m.stats.epochs = t.at("epochs").get<int>();
    m.stats.converged = t.at("converged").get<bool>();
    m.stats.gradient_norm = t.at("gradient_norm").get<double>();
    m.embedding_fingerprint = j.at("embedding_fingerprint").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidFormat, std::string("trigger model: ") + e.what());
  }
}

}  // namespace wordease
