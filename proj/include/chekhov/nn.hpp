// Copyright 2026 The chekhov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal dense multilayer perceptron: forward pass with cached
// activations, exact reverse-mode gradients, initializers and Adam.
//
// Batches are row-major in the sense that each row is one sample; a layer
// computes act(X * W^T + b^T) with W stored out x in.

#ifndef CHEKHOV_NN_HPP_
#define CHEKHOV_NN_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chekhov/common.hpp"

namespace chekhov::nn {

enum class Activation { kTanh, kRelu, kLeakyRelu, kSigmoid, kLinear, kProbit };
enum class InitKind { kOrthogonal, kXavier };

inline constexpr double kLeakySlope = 0.3;

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);
std::string to_string(InitKind k);
InitKind init_kind_from_string(const std::string& s);

struct LayerSpec {
  int units = 0;
  Activation activation = Activation::kLinear;
};

struct MlpSpec {
  int input_dim = 0;
  std::vector<LayerSpec> layers;
  InitKind init = InitKind::kOrthogonal;
  double init_scale = 1.0;

  // Throws DimensionError on an empty or zero-width spec.
  void validate() const;
  int output_dim() const { return layers.empty() ? input_dim : layers.back().units; }
  Eigen::Index param_count() const;

  // `hidden` layers of the given width and activation followed by a
  // linear projection to `output_dim`.
  static MlpSpec dense(int input_dim, std::vector<int> hidden, Activation hidden_act, int output_dim,
                       Activation output_act = Activation::kLinear, InitKind init = InitKind::kOrthogonal,
                       double init_scale = 1.0);

  friend bool operator==(const MlpSpec& a, const MlpSpec& b);
};

struct ParamSlice {
  int layer = 0;
  bool is_bias = false;
  Eigen::Index offset = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index size() const { return rows * cols; }
};

// Flat parameter vector with a shape table. Weights of layer l occupy
// slices[2l], biases slices[2l+1].
template <typename Scalar>
struct ParamVectorT {
  VectorX<Scalar> flat;
  std::vector<ParamSlice> slices;

  static ParamVectorT zeros(const MlpSpec& spec) {
    spec.validate();
    ParamVectorT p;
    Eigen::Index offset = 0;
    int in = spec.input_dim;
    for (int l = 0; l < static_cast<int>(spec.layers.size()); ++l) {
      const int out = spec.layers[l].units;
      p.slices.push_back({l, false, offset, out, in});
      offset += static_cast<Eigen::Index>(out) * in;
      p.slices.push_back({l, true, offset, out, 1});
      offset += out;
      in = out;
    }
    p.flat = VectorX<Scalar>::Zero(offset);
    return p;
  }

  // A parameter vector with the same shape table and zero entries.
  ParamVectorT zeros_like() const {
    ParamVectorT p;
    p.slices = slices;
    p.flat = VectorX<Scalar>::Zero(flat.size());
    return p;
  }

  Eigen::Index size() const { return flat.size(); }
  int num_layers() const { return static_cast<int>(slices.size() / 2); }

  Eigen::Map<MatrixX<Scalar>> weight(int layer) {
    const auto& s = slices[2 * layer];
    return {flat.data() + s.offset, s.rows, s.cols};
  }
  Eigen::Map<const MatrixX<Scalar>> weight(int layer) const {
    const auto& s = slices[2 * layer];
    return {flat.data() + s.offset, s.rows, s.cols};
  }
  Eigen::Map<VectorX<Scalar>> bias(int layer) {
    const auto& s = slices[2 * layer + 1];
    return {flat.data() + s.offset, s.rows};
  }
  Eigen::Map<const VectorX<Scalar>> bias(int layer) const {
    const auto& s = slices[2 * layer + 1];
    return {flat.data() + s.offset, s.rows};
  }

  // Cheap identity tag used to detect a forward cache that no longer
  // matches the parameters handed to backward.
  std::uint64_t tag() const {
    const double s = static_cast<double>(flat.sum());
    const double q = static_cast<double>(flat.squaredNorm());
    std::uint64_t a, b;
    std::memcpy(&a, &s, sizeof a);
    std::memcpy(&b, &q, sizeof b);
    return (a * 0x9e3779b97f4a7c15ULL) ^ b ^ static_cast<std::uint64_t>(flat.size());
  }

  bool same_shape(const ParamVectorT& other) const {
    if (flat.size() != other.flat.size() || slices.size() != other.slices.size()) return false;
    for (std::size_t i = 0; i < slices.size(); ++i)
      if (slices[i].rows != other.slices[i].rows || slices[i].cols != other.slices[i].cols) return false;
    return true;
  }
};

using ParamVector = ParamVectorT<double>;

// Scalar activation and its derivative expressed through (pre, post).
template <typename Scalar>
Scalar activate(Activation a, Scalar z) {
  using std::erfc;
  using std::exp;
  using std::tanh;
  switch (a) {
    case Activation::kTanh: return tanh(z);
    case Activation::kRelu: return z > Scalar(0) ? z : Scalar(0);
    case Activation::kLeakyRelu: return z > Scalar(0) ? z : Scalar(kLeakySlope) * z;
    case Activation::kSigmoid:
      return z >= Scalar(0) ? Scalar(1) / (Scalar(1) + exp(-z)) : exp(z) / (Scalar(1) + exp(z));
    case Activation::kLinear: return z;
    case Activation::kProbit: return Scalar(0.5) * erfc(-z / Scalar(M_SQRT2));
  }
  return z;
}

template <typename Scalar>
Scalar activation_derivative(Activation a, Scalar z, Scalar y) {
  using std::exp;
  switch (a) {
    case Activation::kTanh: return Scalar(1) - y * y;
    case Activation::kRelu: return z > Scalar(0) ? Scalar(1) : Scalar(0);
    case Activation::kLeakyRelu: return z > Scalar(0) ? Scalar(1) : Scalar(kLeakySlope);
    case Activation::kSigmoid: return y * (Scalar(1) - y);
    case Activation::kLinear: return Scalar(1);
    case Activation::kProbit: return exp(Scalar(-0.5) * z * z) / Scalar(std::sqrt(2.0 * M_PI));
  }
  return Scalar(1);
}

template <typename Scalar>
MatrixX<Scalar> apply_activation(Activation act, const MatrixX<Scalar>& z) {
  switch (act) {
    case Activation::kLinear: return z;
    // 1 - 2 / (e^{2z} + 1) vectorizes through exp; agrees with std::tanh to
    // a few ulp and saturates correctly when e^{2z} overflows.
    case Activation::kTanh: return (Scalar(1) - Scalar(2) / ((Scalar(2) * z.array()).exp() + Scalar(1))).matrix();
    case Activation::kRelu: return z.cwiseMax(Scalar(0));
    default: return z.unaryExpr([act](Scalar s) { return activate(act, s); });
  }
}

// delta <- delta .* act'(z), with y = act(z).
template <typename Scalar>
void scale_by_derivative(Activation act, const MatrixX<Scalar>& z, const MatrixX<Scalar>& y, MatrixX<Scalar>& delta) {
  switch (act) {
    case Activation::kLinear: return;
    case Activation::kTanh: delta.array() *= Scalar(1) - y.array().square(); return;
    case Activation::kSigmoid: delta.array() *= y.array() * (Scalar(1) - y.array()); return;
    default:
      for (Eigen::Index j = 0; j < delta.cols(); ++j)
        for (Eigen::Index i = 0; i < delta.rows(); ++i) delta(i, j) *= activation_derivative(act, z(i, j), y(i, j));
  }
}

template <typename Scalar>
struct ForwardPass {
  // activations[0] is the input; activations[l + 1] the output of layer l.
  std::vector<MatrixX<Scalar>> activations;
  std::vector<MatrixX<Scalar>> preactivations;
  std::uint64_t param_tag = 0;

  const MatrixX<Scalar>& output() const { return activations.back(); }
};

template <typename Scalar>
struct BackwardResult {
  ParamVectorT<Scalar> grad;
  MatrixX<Scalar> input_grad;
};

template <typename Scalar>
void check_params(const MlpSpec& spec, const ParamVectorT<Scalar>& params) {
  require_dims(params.size() == spec.param_count() && params.num_layers() == static_cast<int>(spec.layers.size()),
               "parameter vector does not match network spec");
}

template <typename Scalar>
ForwardPass<Scalar> mlp_forward(const MlpSpec& spec, const ParamVectorT<Scalar>& params,
                                const MatrixX<Scalar>& input) {
  check_params(spec, params);
  require_dims(input.cols() == spec.input_dim, "input width " + std::to_string(input.cols()) +
                                                   " does not match network input " +
                                                   std::to_string(spec.input_dim));
  ForwardPass<Scalar> pass;
  pass.param_tag = params.tag();
  pass.activations.reserve(spec.layers.size() + 1);
  pass.preactivations.reserve(spec.layers.size());
  pass.activations.push_back(input);
  for (int l = 0; l < static_cast<int>(spec.layers.size()); ++l) {
    MatrixX<Scalar> z = pass.activations.back() * params.weight(l).transpose();
    z.rowwise() += params.bias(l).transpose();
    const Activation act = spec.layers[l].activation;
    MatrixX<Scalar> y = apply_activation(act, z);
    if (!y.allFinite()) throw NonFiniteError("non-finite activation in layer " + std::to_string(l));
    pass.preactivations.push_back(std::move(z));
    pass.activations.push_back(std::move(y));
  }
  return pass;
}

template <typename Scalar>
BackwardResult<Scalar> mlp_backward(const MlpSpec& spec, const ParamVectorT<Scalar>& params,
                                    const ForwardPass<Scalar>& pass, const MatrixX<Scalar>& upstream) {
  check_params(spec, params);
  if (pass.activations.size() != spec.layers.size() + 1 || pass.param_tag != params.tag())
    throw Error("stale forward cache: parameters changed since the forward pass");
  require_dims(upstream.rows() == pass.output().rows() && upstream.cols() == pass.output().cols(),
               "upstream gradient shape does not match network output");
  BackwardResult<Scalar> out{params.zeros_like(), {}};
  MatrixX<Scalar> delta = upstream;
  for (int l = static_cast<int>(spec.layers.size()) - 1; l >= 0; --l) {
    const Activation act = spec.layers[l].activation;
    scale_by_derivative(act, pass.preactivations[l], pass.activations[l + 1], delta);
    out.grad.weight(l).noalias() = delta.transpose() * pass.activations[l];
    out.grad.bias(l) = delta.colwise().sum().transpose();
    MatrixX<Scalar> next = delta * params.weight(l);
    delta = std::move(next);
  }
  out.input_grad = std::move(delta);
  return out;
}

// Orthogonal matrix scaled by `scale`: for rows >= cols the columns are
// orthonormal (W^T W = scale^2 I), otherwise the rows are.
MatrixX<double> orthogonal_init(Eigen::Index rows, Eigen::Index cols, double scale, std::uint64_t seed);

// Glorot-uniform entries with variance 2 / (fan_in + fan_out).
MatrixX<double> xavier_init(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

// Weights per spec.init, biases zero. Layer l uses a seed derived from
// (seed, l) so adding layers does not reshuffle earlier ones.
ParamVector init_params(const MlpSpec& spec, std::uint64_t seed);

template <typename Scalar>
struct AdamStateT {
  VectorX<Scalar> m;
  VectorX<Scalar> v;
  std::int64_t step = 0;
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamStateT for_params(Eigen::Index n, double lr, double beta1, double beta2 = 0.999,
                               double epsilon = 1e-8) {
    AdamStateT s;
    s.m = VectorX<Scalar>::Zero(n);
    s.v = VectorX<Scalar>::Zero(n);
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.epsilon = epsilon;
    return s;
  }
};

using AdamState = AdamStateT<double>;

// One bias-corrected Adam descent step, in place.
template <typename Scalar>
void adam_step(AdamStateT<Scalar>& state, ParamVectorT<Scalar>& params, const ParamVectorT<Scalar>& grads) {
  require_dims(grads.size() == params.size() && state.m.size() == params.size() && state.v.size() == params.size(),
               "adam: moment/parameter/gradient sizes differ");
  state.step += 1;
  const Scalar b1 = Scalar(state.beta1), b2 = Scalar(state.beta2);
  state.m = b1 * state.m + (Scalar(1) - b1) * grads.flat;
  state.v = b2 * state.v + (Scalar(1) - b2) * grads.flat.cwiseProduct(grads.flat);
  const Scalar c1 = Scalar(1) - Scalar(std::pow(state.beta1, static_cast<double>(state.step)));
  const Scalar c2 = Scalar(1) - Scalar(std::pow(state.beta2, static_cast<double>(state.step)));
  const Scalar lr = Scalar(state.lr), eps = Scalar(state.epsilon);
  params.flat.array() -= lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + eps);
  if (!params.flat.allFinite()) throw NonFiniteError("adam produced non-finite parameters");
}

// Three-point stencils have O(h^2) truncation error; five-point ones
// O(h^4), which permits a larger h and less cancellation.
enum class Stencil { kThreePoint, kFivePoint };

// Central-difference check of `analytic` against `loss` at `probes`
// random coordinates. Returns the largest |a - n| / max(|a|, |n|, floor).
double finite_diff_check(const Vec& params, const std::function<double(const Vec&)>& loss, const Vec& analytic,
                         int probes, std::uint64_t seed, double h = 1e-5, double floor = 1e-7,
                         Stencil stencil = Stencil::kThreePoint);

nlohmann::json spec_to_json(const MlpSpec& spec);
MlpSpec spec_from_json(const nlohmann::json& j);

// Versioned {"version", "spec", "flat"} document. Doubles are written in
// shortest round-trip form, so save/load is bit-exact.
nlohmann::json params_to_json(const MlpSpec& spec, const ParamVector& params);
ParamVector params_from_json(const nlohmann::json& j, MlpSpec* spec_out = nullptr);

}  // namespace chekhov::nn

#endif  // CHEKHOV_NN_HPP_
