#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "draftbots/card_set.hpp"
#include "draftbots/random.hpp"

namespace draftbots::nn {

enum class Mode { train, infer };

/// Row-major dense matrix; rows are batch entries.
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, T fill = T(0)) : rows(r), cols(c), data(r * c, fill) {}

  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  T operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<T> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const T> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

struct NetworkShape {
  std::size_t inputs = 0;
  std::size_t width = 0;
  std::size_t outputs = 0;
  std::size_t hidden_layers = 3;
  double leak = 0.01;
  double dropout = 0.5;
  double bn_epsilon = 1e-5;
  double bn_momentum = 0.1;

  /// The drafting architecture: input, width and output all equal the set size.
  static NetworkShape for_set(std::size_t set_size) { return {set_size, set_size, set_size}; }
};

template <typename T>
constexpr T leaky_relu(T x, T leak) {
  return x > T(0) ? x : leak * x;
}

/// weights: out x in, row-major.
template <typename T>
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<T> weights;
  std::vector<T> bias;
};

template <typename T>
struct BatchNormLayer {
  std::vector<T> scale;
  std::vector<T> shift;
  std::vector<T> running_mean;
  std::vector<T> running_var;
};

/// Trainable parameters, also used as the gradient container.
template <typename T>
struct Parameters {
  std::vector<DenseLayer<T>> dense;
  std::vector<BatchNormLayer<T>> norms;
  DenseLayer<T> output;

  /// Zeroed parameters of the given shape (batchnorm scale 1, running variance 1).
  static Parameters zeros(const NetworkShape& shape);

  /// Visits every trainable array with a stable name such as "dense2.weight".
  void visit(const std::function<void(const std::string&, std::vector<T>&)>& fn);
  void visit(const std::function<void(const std::string&, const std::vector<T>&)>& fn) const;
};

/// Mean softmax cross-entropy of integer targets (accumulated in double) and
/// its gradient with respect to the logits.
template <typename T>
double softmax_cross_entropy(const Matrix<T>& logits, std::span<const CardIndex> targets,
                             Matrix<T>* grad_logits);

/// Dense -> batchnorm -> leaky ReLU -> dropout, repeated, then a linear output.
template <typename T>
class Network {
 public:
  Network() = default;
  /// All weights zero; produces all-zero logits.
  explicit Network(const NetworkShape& shape);

  /// He-uniform weights, zero biases.
  static Network he_uniform(const NetworkShape& shape, std::uint64_t seed);

  const NetworkShape& shape() const { return shape_; }
  Parameters<T>& params() { return params_; }
  const Parameters<T>& params() const { return params_; }

  /// Train mode uses batch statistics, updates the running statistics and
  /// draws dropout masks from `rng`. Infer mode is pure.
  Matrix<T> forward(const Matrix<T>& x, Mode mode, Rng* rng = nullptr);
  Matrix<T> infer(const Matrix<T>& x) const;
  std::vector<T> infer_one(std::span<const T> x) const;

  /// Train-mode forward and backward pass. Returns the mean cross-entropy
  /// and writes the gradient of every parameter into `grads`.
  double loss_and_grad(const Matrix<T>& x, std::span<const CardIndex> targets, Rng& rng,
                       Parameters<T>& grads);

 private:
  struct BlockCache {
    Matrix<T> input;
    Matrix<T> xhat;
    Matrix<T> normed;
    Matrix<T> mask;
    std::vector<T> inv_std;
  };

  Matrix<T> run(const Matrix<T>& x, Mode mode, Rng* rng, std::vector<BlockCache>* cache,
                bool update_running);

  NetworkShape shape_;
  Parameters<T> params_;
};

/// Adam with bias correction. Shapes follow the network it was created for.
template <typename T>
class Adam {
 public:
  Adam(const NetworkShape& shape, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);

  /// Throws TrainingError naming the array when a gradient is not finite;
  /// parameters are left untouched in that case.
  void step(Parameters<T>& params, const Parameters<T>& grads);

  long steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Parameters<T> m_;
  Parameters<T> v_;
};

extern template struct Parameters<float>;
extern template struct Parameters<double>;
extern template class Network<float>;
extern template class Network<double>;
extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace draftbots::nn

namespace draftbots {

/// Trained next-pick network for one card set.
struct NNetModel {
  std::string set_code;
  nn::Network<float> network;
};

}  // namespace draftbots
