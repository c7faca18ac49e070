#include "htps/nnengine.hpp"

#include <cmath>
#include <stdexcept>

#include "htps/rng.hpp"

namespace htps {

Mlp init_mlp(const std::vector<std::size_t>& dims, double slope,
             std::uint64_t seed) {
  if (dims.size() < 2) {
    throw std::invalid_argument("init_mlp: need at least input and output dims");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("init_mlp: zero layer width");
  }
  Mlp mlp;
  mlp.slope = slope;
  Rng rng(seed);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const std::size_t fan_in = dims[i];
    const std::size_t fan_out = dims[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    DenseLayer layer;
    layer.weights = Matrix(fan_out, fan_in);
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    layer.bias.assign(fan_out, 0.0);
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

Mlp zero_like(const Mlp& mlp) {
  Mlp out;
  out.slope = mlp.slope;
  out.layers.reserve(mlp.layers.size());
  for (const DenseLayer& layer : mlp.layers) {
    DenseLayer z;
    z.weights = Matrix(layer.weights.rows, layer.weights.cols);
    z.bias.assign(layer.bias.size(), 0.0);
    out.layers.push_back(std::move(z));
  }
  return out;
}

void set_zero(Mlp& mlp) {
  for (DenseLayer& layer : mlp.layers) {
    std::fill(layer.weights.data.begin(), layer.weights.data.end(), 0.0);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
}

void forward(const Mlp& mlp, const Vector& input, MlpCache& cache) {
  if (input.size() != mlp.input_dim()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  const std::size_t n_layers = mlp.layers.size();
  cache.inputs.resize(n_layers);
  cache.preacts.resize(n_layers);

  cache.inputs[0] = input;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const DenseLayer& layer = mlp.layers[i];
    Vector& z = cache.preacts[i];
    z.resize(layer.weights.rows);
    const Vector& x = cache.inputs[i];
    for (std::size_t r = 0; r < layer.weights.rows; ++r) {
      z[r] = layer.bias[r] + dot(layer.weights.row(r), x.data(), x.size());
    }
    if (i + 1 < n_layers) {
      Vector& next = cache.inputs[i + 1];
      next.resize(z.size());
      for (std::size_t k = 0; k < z.size(); ++k) {
        next[k] = leaky_relu(z[k], mlp.slope);
      }
    }
  }
}

Vector forward(const Mlp& mlp, const Vector& input) {
  MlpCache cache;
  forward(mlp, input, cache);
  return cache.output();
}

Vector backward(const Mlp& mlp, const MlpCache& cache,
                const Vector& output_grad, Mlp& grads) {
  const std::size_t n_layers = mlp.layers.size();
  if (grads.layers.size() != n_layers) {
    throw std::invalid_argument("backward: gradient accumulator shape mismatch");
  }
  if (output_grad.size() != mlp.output_dim()) {
    throw std::invalid_argument("backward: output gradient dimension mismatch");
  }

  Vector dz = output_grad;
  Vector dx;
  for (std::size_t i = n_layers; i-- > 0;) {
    const DenseLayer& layer = mlp.layers[i];
    DenseLayer& grad = grads.layers[i];
    const Vector& x = cache.inputs[i];

    for (std::size_t r = 0; r < layer.weights.rows; ++r) {
      const double g = dz[r];
      grad.bias[r] += g;
      double* wrow = grad.weights.row(r);
      for (std::size_t c = 0; c < layer.weights.cols; ++c) {
        wrow[c] += g * x[c];
      }
    }

    dx.assign(layer.weights.cols, 0.0);
    for (std::size_t r = 0; r < layer.weights.rows; ++r) {
      const double g = dz[r];
      const double* wrow = layer.weights.row(r);
      for (std::size_t c = 0; c < layer.weights.cols; ++c) {
        dx[c] += g * wrow[c];
      }
    }

    if (i > 0) {
      const Vector& z_prev = cache.preacts[i - 1];
      dz.resize(dx.size());
      for (std::size_t k = 0; k < dx.size(); ++k) {
        dz[k] = dx[k] * leaky_relu_grad(z_prev[k], mlp.slope);
      }
    }
  }
  return dx;
}

LossResult mae_loss(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw std::invalid_argument("mae_loss: length mismatch");
  }
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  LossResult out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    out.value += std::abs(diff) * inv_n;
    out.grad[i] = diff > 0.0 ? inv_n : (diff < 0.0 ? -inv_n : 0.0);
  }
  return out;
}

LossResult mse_loss(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw std::invalid_argument("mse_loss: length mismatch");
  }
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  LossResult out;
  out.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    out.value += diff * diff * inv_n;
    out.grad[i] = 2.0 * diff * inv_n;
  }
  return out;
}

ParamRefs param_refs(Mlp& mlp) {
  ParamRefs refs;
  for (DenseLayer& layer : mlp.layers) {
    refs.blocks.emplace_back(layer.weights.data);
    refs.blocks.emplace_back(layer.bias);
    refs.total += layer.weights.data.size() + layer.bias.size();
  }
  return refs;
}

std::size_t param_count(const Mlp& mlp) {
  std::size_t total = 0;
  for (const DenseLayer& layer : mlp.layers) {
    total += layer.weights.data.size() + layer.bias.size();
  }
  return total;
}

AdamState make_adam(std::size_t n_params, double learning_rate) {
  AdamState state;
  state.learning_rate = learning_rate;
  state.first_moment.assign(n_params, 0.0);
  state.second_moment.assign(n_params, 0.0);
  return state;
}

void adam_step(AdamState& state, const ParamRefs& params,
               const ParamRefs& grads) {
  if (params.total != state.first_moment.size() ||
      params.total != grads.total ||
      params.blocks.size() != grads.blocks.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.step_count += 1;
  const double bias1 =
      1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bias2 =
      1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

  std::size_t offset = 0;
  for (std::size_t b = 0; b < params.blocks.size(); ++b) {
    std::span<double> p = params.blocks[b];
    std::span<double> g = grads.blocks[b];
    if (p.size() != g.size()) {
      throw std::invalid_argument("adam_step: block shape mismatch");
    }
    double* m = state.first_moment.data() + offset;
    double* v = state.second_moment.data() + offset;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      p[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    offset += p.size();
  }
}

}  // namespace htps
