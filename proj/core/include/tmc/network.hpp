#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tmc {

enum class EvidenceActivation { rectifier, softplus };

const char* to_string(EvidenceActivation a);
EvidenceActivation evidence_activation_from_string(const std::string& s);

/// One fully connected layer; weight is (out x in).
struct LinearLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Flat view of one parameter (or gradient) tensor, for the optimizer.
struct TensorRef {
  double* data = nullptr;
  std::ptrdiff_t size = 0;
};

/// Gradient buffers mirroring an Mlp's layer shapes.
struct MlpGrads {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;

  void set_zero();
  void scale(double factor);
  std::vector<TensorRef> tensors();
};

/// Multilayer perceptron with rectifier hidden activations and a linear
/// output layer. Forward with frozen weights is pure; the activation cache
/// needed for the backward pass is kept outside the model.
class Mlp {
 public:
  struct Cache {
    Eigen::VectorXd input;
    std::vector<Eigen::VectorXd> pre;   // pre-activation per layer
    std::vector<Eigen::VectorXd> post;  // rectified output per hidden layer
  };

  Mlp(int input_dim, const std::vector<int>& hidden_dims, int output_dim);

  /// Glorot-uniform weights (+- sqrt(6 / (fan_in + fan_out))), zero biases.
  static Mlp glorot_init(int input_dim, const std::vector<int>& hidden_dims, int output_dim,
                         std::mt19937_64& rng);

  Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Cache* cache = nullptr) const;

  /// Accumulates parameter gradients for one sample into grads.
  /// The rectifier subgradient at 0 is taken as 0.
  void backward(const Cache& cache, const Eigen::Ref<const Eigen::VectorXd>& grad_output,
                MlpGrads& grads) const;

  MlpGrads make_grads() const;
  std::vector<TensorRef> parameters();

  const std::vector<LinearLayer>& layers() const { return layers_; }
  std::vector<LinearLayer>& layers() { return layers_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const std::vector<int>& hidden_dims() const { return hidden_dims_; }

 private:
  int input_dim_;
  std::vector<int> hidden_dims_;
  int output_dim_;
  std::vector<LinearLayer> layers_;
};

/// Per-view evidential classifier: an Mlp followed by a non-negative
/// evidence head (rectifier by default, softplus behind the config switch).
class EvidentialNet {
 public:
  EvidentialNet(Mlp mlp, EvidenceActivation activation);

  static EvidentialNet glorot_init(int input_dim, const std::vector<int>& hidden_dims,
                                   int class_count, EvidenceActivation activation,
                                   std::mt19937_64& rng);

  /// Evidence vector: component-wise >= 0 and finite for finite inputs.
  Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& x,
                          Mlp::Cache* cache = nullptr) const;

  /// Backprop of d(loss)/d(evidence) through the head activation and the Mlp.
  void backward(const Mlp::Cache& cache, const Eigen::Ref<const Eigen::VectorXd>& grad_evidence,
                MlpGrads& grads) const;

  Mlp& mlp() { return mlp_; }
  const Mlp& mlp() const { return mlp_; }
  EvidenceActivation activation() const { return activation_; }
  int class_count() const { return mlp_.output_dim(); }
  int input_dim() const { return mlp_.input_dim(); }

 private:
  Mlp mlp_;
  EvidenceActivation activation_;
};

}  // namespace tmc
