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

#include "chekhov/nn.hpp"

#include <algorithm>
#include <set>

namespace chekhov::nn {

namespace {
constexpr int kParamsFormatVersion = 1;

struct ActName {
  Activation act;
  const char* name;
};
constexpr ActName kActNames[] = {
    {Activation::kTanh, "tanh"},       {Activation::kRelu, "relu"},     {Activation::kLeakyRelu, "leaky_relu"},
    {Activation::kSigmoid, "sigmoid"}, {Activation::kLinear, "linear"}, {Activation::kProbit, "probit"},
};
}  // namespace

std::string to_string(Activation a) {
  for (const auto& e : kActNames)
    if (e.act == a) return e.name;
  return "linear";
}

Activation activation_from_string(const std::string& s) {
  for (const auto& e : kActNames)
    if (s == e.name) return e.act;
  throw Error("unknown activation '" + s + "'");
}

std::string to_string(InitKind k) { return k == InitKind::kOrthogonal ? "orthogonal" : "xavier"; }

InitKind init_kind_from_string(const std::string& s) {
  if (s == "orthogonal") return InitKind::kOrthogonal;
  if (s == "xavier") return InitKind::kXavier;
  throw Error("unknown initializer '" + s + "'");
}

void MlpSpec::validate() const {
  if (input_dim < 1) throw DimensionError("network input width must be >= 1");
  if (layers.empty()) throw DimensionError("network needs at least one layer");
  for (std::size_t l = 0; l < layers.size(); ++l)
    if (layers[l].units < 1) throw DimensionError("layer " + std::to_string(l) + " has no units");
}

Eigen::Index MlpSpec::param_count() const {
  Eigen::Index n = 0;
  Eigen::Index in = input_dim;
  for (const auto& layer : layers) {
    n += static_cast<Eigen::Index>(layer.units) * (in + 1);
    in = layer.units;
  }
  return n;
}

MlpSpec MlpSpec::dense(int input_dim, std::vector<int> hidden, Activation hidden_act, int output_dim,
                       Activation output_act, InitKind init, double init_scale) {
  MlpSpec spec;
  spec.input_dim = input_dim;
  for (int h : hidden) spec.layers.push_back({h, hidden_act});
  spec.layers.push_back({output_dim, output_act});
  spec.init = init;
  spec.init_scale = init_scale;
  return spec;
}

bool operator==(const MlpSpec& a, const MlpSpec& b) {
  if (a.input_dim != b.input_dim || a.init != b.init || a.init_scale != b.init_scale ||
      a.layers.size() != b.layers.size())
    return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i)
    if (a.layers[i].units != b.layers[i].units || a.layers[i].activation != b.layers[i].activation) return false;
  return true;
}

MatrixX<double> orthogonal_init(Eigen::Index rows, Eigen::Index cols, double scale, std::uint64_t seed) {
  Rng rng(seed);
  const bool tall = rows >= cols;
  const Eigen::Index n = tall ? rows : cols;
  const Eigen::Index k = tall ? cols : rows;
  Mat g = rng.normal_matrix(n, k);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, k);
  // Sign fix makes the result distributed uniformly (Haar).
  const Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  q *= scale;
  if (tall) return q;
  return q.transpose();
}

MatrixX<double> xavier_init(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = rng.uniform(-limit, limit);
  return w;
}

ParamVector init_params(const MlpSpec& spec, std::uint64_t seed) {
  ParamVector p = ParamVector::zeros(spec);
  for (int l = 0; l < p.num_layers(); ++l) {
    const auto& s = p.slices[2 * l];
    const std::uint64_t layer_seed = Rng::stream(seed, "layer" + std::to_string(l)).next_u64();
    if (spec.init == InitKind::kOrthogonal)
      p.weight(l) = orthogonal_init(s.rows, s.cols, spec.init_scale, layer_seed);
    else
      p.weight(l) = xavier_init(s.rows, s.cols, layer_seed);
  }
  return p;
}

double finite_diff_check(const Vec& params, const std::function<double(const Vec&)>& loss, const Vec& analytic,
                         int probes, std::uint64_t seed, double h, double floor, Stencil stencil) {
  require_dims(analytic.size() == params.size(), "analytic gradient size differs from parameter size");
  if (params.size() == 0) return 0.0;
  Rng rng(seed);
  std::vector<Eigen::Index> coords;
  if (probes >= params.size()) {
    for (Eigen::Index i = 0; i < params.size(); ++i) coords.push_back(i);
  } else {
    std::set<Eigen::Index> picked;
    while (static_cast<int>(picked.size()) < probes)
      picked.insert(static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(params.size())));
    coords.assign(picked.begin(), picked.end());
  }
  double worst = 0.0;
  Vec probe = params;
  for (Eigen::Index i : coords) {
    const auto at = [&](double offset) {
      probe(i) = params(i) + offset;
      const double v = loss(probe);
      probe(i) = params(i);
      return v;
    };
    const double numeric = stencil == Stencil::kThreePoint
                               ? (at(h) - at(-h)) / (2.0 * h)
                               : (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
    const double denom = std::max({std::abs(numeric), std::abs(analytic(i)), floor});
    worst = std::max(worst, std::abs(numeric - analytic(i)) / denom);
  }
  return worst;
}

nlohmann::json spec_to_json(const MlpSpec& spec) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : spec.layers) layers.push_back({{"units", l.units}, {"activation", to_string(l.activation)}});
  return {{"input_dim", spec.input_dim},
          {"layers", layers},
          {"init", to_string(spec.init)},
          {"init_scale", spec.init_scale}};
}

MlpSpec spec_from_json(const nlohmann::json& j) {
  MlpSpec spec;
  spec.input_dim = j.at("input_dim").get<int>();
  for (const auto& l : j.at("layers"))
    spec.layers.push_back({l.at("units").get<int>(), activation_from_string(l.at("activation").get<std::string>())});
  spec.init = init_kind_from_string(j.at("init").get<std::string>());
  spec.init_scale = j.at("init_scale").get<double>();
  spec.validate();
  return spec;
}

nlohmann::json params_to_json(const MlpSpec& spec, const ParamVector& params) {
  check_params(spec, params);
  return {{"version", kParamsFormatVersion},
          {"spec", spec_to_json(spec)},
          {"flat", std::vector<double>(params.flat.data(), params.flat.data() + params.flat.size())}};
}

ParamVector params_from_json(const nlohmann::json& j, MlpSpec* spec_out) {
  const int version = j.at("version").get<int>();
  if (version != kParamsFormatVersion)
    throw Error("unsupported parameter format version " + std::to_string(version));
  const MlpSpec spec = spec_from_json(j.at("spec"));
  const auto flat = j.at("flat").get<std::vector<double>>();
  ParamVector p = ParamVector::zeros(spec);
  require_dims(static_cast<Eigen::Index>(flat.size()) == p.size(), "flat parameter array has the wrong length");
  p.flat = Eigen::Map<const Vec>(flat.data(), static_cast<Eigen::Index>(flat.size()));
  if (spec_out) *spec_out = spec;
  return p;
}

}  // namespace chekhov::nn
