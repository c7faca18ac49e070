#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "htps/matrix.hpp"

namespace htps {

inline constexpr double kLeakyReluSlope = 0.01;

inline double leaky_relu(double x, double slope) {
  return x > 0.0 ? x : slope * x;
}

// Derivative at 0 is defined as the slope.
inline double leaky_relu_grad(double x, double slope) {
  return x > 0.0 ? 1.0 : slope;
}

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
};

// Fully connected stack with LeakyReLU between layers and a bare final
// Linear.
struct Mlp {
  std::vector<DenseLayer> layers;
  double slope = kLeakyReluSlope;

  std::size_t input_dim() const { return layers.front().weights.cols; }
  std::size_t output_dim() const { return layers.back().weights.rows; }
};

// Weights ~ Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)), bias 0, drawn from a
// seeded deterministic generator. dims lists layer widths input-first.
Mlp init_mlp(const std::vector<std::size_t>& dims, double slope,
             std::uint64_t seed);

// Same shapes, all parameters zero; used as a gradient accumulator.
Mlp zero_like(const Mlp& mlp);
void set_zero(Mlp& mlp);

struct MlpCache {
  std::vector<Vector> inputs;   // inputs[i] feeds layer i
  std::vector<Vector> preacts;  // preacts[i] = W_i inputs[i] + b_i
  const Vector& output() const { return preacts.back(); }
};

Vector forward(const Mlp& mlp, const Vector& input);
void forward(const Mlp& mlp, const Vector& input, MlpCache& cache);

// Accumulates parameter gradients into `grads` (zero_like-shaped) and
// returns the gradient w.r.t. the input, so composed networks can chain.
Vector backward(const Mlp& mlp, const MlpCache& cache,
                const Vector& output_grad, Mlp& grads);

struct LossResult {
  double value = 0.0;
  Vector grad;  // d loss / d pred
};

// Mean |pred - target|; subgradient sign(pred - target) / len, sign(0) = 0.
LossResult mae_loss(const Vector& pred, const Vector& target);
// Mean (pred - target)^2; gradient 2 (pred - target) / len.
LossResult mse_loss(const Vector& pred, const Vector& target);

// Fixed-order views over every parameter of a model (per layer: weights,
// then bias). Adam state indexes parameters in exactly this order.
struct ParamRefs {
  std::vector<std::span<double>> blocks;
  std::size_t total = 0;
};

ParamRefs param_refs(Mlp& mlp);
std::size_t param_count(const Mlp& mlp);

struct AdamState {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step_count = 0;
  Vector first_moment;
  Vector second_moment;
};

AdamState make_adam(std::size_t n_params, double learning_rate);

// Standard bias-corrected update: p -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(AdamState& state, const ParamRefs& params,
               const ParamRefs& grads);

}  // namespace htps
