#include "tmc/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tmc {

namespace {

double softplus(double x) {
  // log(1 + e^x), overflow-safe.
  return x > 30.0 ? x : std::log1p(std::exp(x));
}

double softplus_derivative(double x) {
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

const char* to_string(EvidenceActivation a) {
  return a == EvidenceActivation::rectifier ? "relu" : "softplus";
}

EvidenceActivation evidence_activation_from_string(const std::string& s) {
  if (s == "relu") return EvidenceActivation::rectifier;
  if (s == "softplus") return EvidenceActivation::softplus;
  throw std::invalid_argument("unknown evidence activation: " + s);
}

void MlpGrads::set_zero() {
  for (auto& w : weight) w.setZero();
  for (auto& b : bias) b.setZero();
}

void MlpGrads::scale(double factor) {
  for (auto& w : weight) w *= factor;
  for (auto& b : bias) b *= factor;
}

std::vector<TensorRef> MlpGrads::tensors() {
  std::vector<TensorRef> refs;
  refs.reserve(2 * weight.size());
  for (std::size_t i = 0; i < weight.size(); ++i) {
    refs.push_back({weight[i].data(), weight[i].size()});
    refs.push_back({bias[i].data(), bias[i].size()});
  }
  return refs;
}

Mlp::Mlp(int input_dim, const std::vector<int>& hidden_dims, int output_dim)
    : input_dim_(input_dim), hidden_dims_(hidden_dims), output_dim_(output_dim) {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("Mlp: dimensions must be positive");
  }
  int in = input_dim;
  for (int h : hidden_dims_) {
    if (h < 1) throw std::invalid_argument("Mlp: hidden width must be positive");
    layers_.push_back({Eigen::MatrixXd::Zero(h, in), Eigen::VectorXd::Zero(h)});
    in = h;
  }
  layers_.push_back({Eigen::MatrixXd::Zero(output_dim, in), Eigen::VectorXd::Zero(output_dim)});
}

Mlp Mlp::glorot_init(int input_dim, const std::vector<int>& hidden_dims, int output_dim,
                     std::mt19937_64& rng) {
  Mlp net(input_dim, hidden_dims, output_dim);
  for (LinearLayer& layer : net.layers_) {
    const double fan_in = static_cast<double>(layer.weight.cols());
    const double fan_out = static_cast<double>(layer.weight.rows());
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    // Row-major fill order so the draw sequence is independent of Eigen's
    // storage layout.
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = dist(rng);
      }
    }
  }
  return net;
}

Eigen::VectorXd Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& x, Cache* cache) const {
  if (x.size() != input_dim_) {
    throw std::invalid_argument("Mlp::forward: input has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_dim_));
  }
  if (cache) {
    cache->input = x;
    cache->pre.clear();
    cache->post.clear();
  }
  Eigen::VectorXd h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd pre = layers_[i].weight * h + layers_[i].bias;
    if (cache) cache->pre.push_back(pre);
    if (i + 1 < layers_.size()) {
      h = pre.cwiseMax(0.0);
      if (cache) cache->post.push_back(h);
    } else {
      h = std::move(pre);
    }
  }
  return h;
}

void Mlp::backward(const Cache& cache, const Eigen::Ref<const Eigen::VectorXd>& grad_output,
                   MlpGrads& grads) const {
  if (cache.pre.size() != layers_.size()) {
    throw std::invalid_argument("Mlp::backward: cache does not match this network");
  }
  Eigen::VectorXd delta = grad_output;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Eigen::VectorXd& layer_input = i == 0 ? cache.input : cache.post[i - 1];
    grads.weight[i].noalias() += delta * layer_input.transpose();
    grads.bias[i] += delta;
    if (i > 0) {
      delta = layers_[i].weight.transpose() * delta;
      // Rectifier gate; subgradient at exactly 0 is 0.
      delta.array() *= (cache.pre[i - 1].array() > 0.0).cast<double>();
    }
  }
}

MlpGrads Mlp::make_grads() const {
  MlpGrads grads;
  for (const LinearLayer& layer : layers_) {
    grads.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    grads.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return grads;
}

std::vector<TensorRef> Mlp::parameters() {
  std::vector<TensorRef> refs;
  refs.reserve(2 * layers_.size());
  for (LinearLayer& layer : layers_) {
    refs.push_back({layer.weight.data(), layer.weight.size()});
    refs.push_back({layer.bias.data(), layer.bias.size()});
  }
  return refs;
}

EvidentialNet::EvidentialNet(Mlp mlp, EvidenceActivation activation)
    : mlp_(std::move(mlp)), activation_(activation) {}

EvidentialNet EvidentialNet::glorot_init(int input_dim, const std::vector<int>& hidden_dims,
                                         int class_count, EvidenceActivation activation,
                                         std::mt19937_64& rng) {
  return EvidentialNet(Mlp::glorot_init(input_dim, hidden_dims, class_count, rng), activation);
}

Eigen::VectorXd EvidentialNet::forward(const Eigen::Ref<const Eigen::VectorXd>& x,
                                       Mlp::Cache* cache) const {
  Eigen::VectorXd out = mlp_.forward(x, cache);
  if (activation_ == EvidenceActivation::rectifier) {
    return out.cwiseMax(0.0);
  }
  return out.unaryExpr([](double v) { return softplus(v); });
}

void EvidentialNet::backward(const Mlp::Cache& cache,
                             const Eigen::Ref<const Eigen::VectorXd>& grad_evidence,
                             MlpGrads& grads) const {
  const Eigen::VectorXd& head_pre = cache.pre.back();
  Eigen::VectorXd grad_out = grad_evidence;
  if (activation_ == EvidenceActivation::rectifier) {
    grad_out.array() *= (head_pre.array() > 0.0).cast<double>();
  } else {
    grad_out.array() *=
        head_pre.unaryExpr([](double v) { return softplus_derivative(v); }).array();
  }
  mlp_.backward(cache, grad_out, grads);
}

}  // namespace tmc
