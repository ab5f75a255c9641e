#include "draftbots/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "draftbots/error.hpp"

namespace draftbots::nn {

namespace {

template <typename T>
DenseLayer<T> dense_zeros(std::size_t in, std::size_t out) {
  return {in, out, std::vector<T>(in * out, T(0)), std::vector<T>(out, T(0))};
}

template <typename T>
void dense_forward(const DenseLayer<T>& layer, const Matrix<T>& x, Matrix<T>& z) {
  z = Matrix<T>(x.rows, layer.out);
  for (std::size_t b = 0; b < x.rows; ++b) {
    const T* xr = x.data.data() + b * x.cols;
    T* zr = z.data.data() + b * z.cols;
    for (std::size_t o = 0; o < layer.out; ++o) {
      const T* w = layer.weights.data() + o * layer.in;
      T acc = layer.bias[o];
      for (std::size_t i = 0; i < layer.in; ++i) acc += w[i] * xr[i];
      zr[o] = acc;
    }
  }
}

/// Accumulates weight/bias gradients of a dense layer and, if `dx` is given,
/// the gradient with respect to its input.
template <typename T>
void dense_backward(const DenseLayer<T>& layer, const Matrix<T>& x, const Matrix<T>& dz,
                    DenseLayer<T>& grad, Matrix<T>* dx) {
  grad = dense_zeros<T>(layer.in, layer.out);
  if (dx != nullptr) *dx = Matrix<T>(x.rows, layer.in);
  for (std::size_t b = 0; b < x.rows; ++b) {
    const T* xr = x.data.data() + b * x.cols;
    const T* dzr = dz.data.data() + b * dz.cols;
    T* dxr = dx != nullptr ? dx->data.data() + b * dx->cols : nullptr;
    for (std::size_t o = 0; o < layer.out; ++o) {
      const T g = dzr[o];
      if (g == T(0)) continue;
      grad.bias[o] += g;
      T* gw = grad.weights.data() + o * layer.in;
      const T* w = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) gw[i] += g * xr[i];
      if (dxr != nullptr) {
        for (std::size_t i = 0; i < layer.in; ++i) dxr[i] += g * w[i];
      }
    }
  }
}

template <typename T>
void require_shape(const Matrix<T>& x, std::size_t cols, const char* what) {
  if (x.cols != cols) {
    throw Error(std::string(what) + ": expected " + std::to_string(cols) + " input columns, got " +
                std::to_string(x.cols));
  }
}

template <typename T>
bool all_finite(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](T x) { return std::isfinite(x); });
}

}  // namespace

template <typename T>
Parameters<T> Parameters<T>::zeros(const NetworkShape& shape) {
  Parameters<T> p;
  for (std::size_t k = 0; k < shape.hidden_layers; ++k) {
    const std::size_t in = k == 0 ? shape.inputs : shape.width;
    p.dense.push_back(dense_zeros<T>(in, shape.width));
    p.norms.push_back({std::vector<T>(shape.width, T(1)), std::vector<T>(shape.width, T(0)),
                       std::vector<T>(shape.width, T(0)), std::vector<T>(shape.width, T(1))});
  }
  p.output = dense_zeros<T>(shape.hidden_layers > 0 ? shape.width : shape.inputs, shape.outputs);
  return p;
}

template <typename T>
void Parameters<T>::visit(const std::function<void(const std::string&, std::vector<T>&)>& fn) {
  for (std::size_t k = 0; k < dense.size(); ++k) {
    const std::string n = std::to_string(k + 1);
    fn("dense" + n + ".weight", dense[k].weights);
    fn("dense" + n + ".bias", dense[k].bias);
    fn("norm" + n + ".scale", norms[k].scale);
    fn("norm" + n + ".shift", norms[k].shift);
  }
  fn("output.weight", output.weights);
  fn("output.bias", output.bias);
}

template <typename T>
void Parameters<T>::visit(
    const std::function<void(const std::string&, const std::vector<T>&)>& fn) const {
  const_cast<Parameters<T>*>(this)->visit(
      [&](const std::string& name, std::vector<T>& v) { fn(name, v); });
}

template <typename T>
double softmax_cross_entropy(const Matrix<T>& logits, std::span<const CardIndex> targets,
                             Matrix<T>* grad_logits) {
  if (targets.size() != logits.rows) throw Error("softmax_cross_entropy: target count mismatch");
  if (grad_logits != nullptr) *grad_logits = Matrix<T>(logits.rows, logits.cols);
  const double inv_batch = 1.0 / static_cast<double>(logits.rows);
  double total = 0.0;
  std::vector<double> e(logits.cols);
  for (std::size_t b = 0; b < logits.rows; ++b) {
    const auto row = logits.row(b);
    if (targets[b] >= logits.cols) throw Error("softmax_cross_entropy: target outside output");
    const double mx = static_cast<double>(*std::max_element(row.begin(), row.end()));
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      e[c] = std::exp(static_cast<double>(row[c]) - mx);
      sum += e[c];
    }
    total += std::log(sum) + mx - static_cast<double>(row[targets[b]]);
    if (grad_logits != nullptr) {
      auto g = grad_logits->row(b);
      for (std::size_t c = 0; c < row.size(); ++c) {
        const double p = e[c] / sum - (c == targets[b] ? 1.0 : 0.0);
        g[c] = static_cast<T>(p * inv_batch);
      }
    }
  }
  return total * inv_batch;
}

template <typename T>
Network<T>::Network(const NetworkShape& shape)
    : shape_(shape), params_(Parameters<T>::zeros(shape)) {}

template <typename T>
Network<T> Network<T>::he_uniform(const NetworkShape& shape, std::uint64_t seed) {
  Network<T> net(shape);
  Rng rng(seed);
  auto init = [&](DenseLayer<T>& layer) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.in));
    for (T& w : layer.weights) w = static_cast<T>((2.0 * rng.uniform() - 1.0) * limit);
  };
  for (auto& layer : net.params_.dense) init(layer);
  init(net.params_.output);
  return net;
}

template <typename T>
Matrix<T> Network<T>::run(const Matrix<T>& x, Mode mode, Rng* rng,
                          std::vector<BlockCache>* cache, bool update_running) {
  require_shape(x, shape_.inputs, "network forward");
  const bool train = mode == Mode::train;
  if (train && shape_.dropout > 0.0 && rng == nullptr) {
    throw Error("network forward: train mode with dropout needs a random stream");
  }
  const T leak = static_cast<T>(shape_.leak);
  const T keep_scale = static_cast<T>(1.0 / (1.0 - shape_.dropout));
  const std::size_t batch = x.rows;

  Matrix<T> h = x;
  for (std::size_t k = 0; k < shape_.hidden_layers; ++k) {
    const DenseLayer<T>& dense = params_.dense[k];
    BatchNormLayer<T>& norm = params_.norms[k];
    const std::size_t width = dense.out;

    Matrix<T> z;
    dense_forward(dense, h, z);

    BlockCache blk;
    blk.xhat = Matrix<T>(batch, width);
    blk.normed = Matrix<T>(batch, width);
    blk.mask = Matrix<T>(batch, width, T(1));
    blk.inv_std.assign(width, T(0));

    for (std::size_t o = 0; o < width; ++o) {
      double mean, var;
      if (train) {
        double s = 0.0;
        for (std::size_t b = 0; b < batch; ++b) s += static_cast<double>(z(b, o));
        mean = s / static_cast<double>(batch);
        double ss = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
          const double d = static_cast<double>(z(b, o)) - mean;
          ss += d * d;
        }
        var = ss / static_cast<double>(batch);
        if (update_running) {
          const double m = shape_.bn_momentum;
          const double unbiased =
              batch > 1 ? var * static_cast<double>(batch) / static_cast<double>(batch - 1) : var;
          norm.running_mean[o] =
              static_cast<T>((1.0 - m) * static_cast<double>(norm.running_mean[o]) + m * mean);
          norm.running_var[o] =
              static_cast<T>((1.0 - m) * static_cast<double>(norm.running_var[o]) + m * unbiased);
        }
      } else {
        mean = static_cast<double>(norm.running_mean[o]);
        var = static_cast<double>(norm.running_var[o]);
      }
      const T inv = static_cast<T>(1.0 / std::sqrt(var + shape_.bn_epsilon));
      blk.inv_std[o] = inv;
      const T mu = static_cast<T>(mean);
      for (std::size_t b = 0; b < batch; ++b) {
        const T xh = (z(b, o) - mu) * inv;
        blk.xhat(b, o) = xh;
        blk.normed(b, o) = norm.scale[o] * xh + norm.shift[o];
      }
    }

    Matrix<T> a(batch, width);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      T v = leaky_relu(blk.normed.data[i], leak);
      if (train && shape_.dropout > 0.0) {
        blk.mask.data[i] = rng->bernoulli(shape_.dropout) ? T(0) : keep_scale;
        v *= blk.mask.data[i];
      }
      a.data[i] = v;
    }
    if (cache != nullptr) {
      blk.input = std::move(h);
      cache->push_back(std::move(blk));
    }
    h = std::move(a);
  }

  Matrix<T> logits;
  dense_forward(params_.output, h, logits);
  if (cache != nullptr) {
    BlockCache last;
    last.input = std::move(h);
    cache->push_back(std::move(last));
  }
  return logits;
}

template <typename T>
Matrix<T> Network<T>::forward(const Matrix<T>& x, Mode mode, Rng* rng) {
  return run(x, mode, rng, nullptr, mode == Mode::train);
}

template <typename T>
Matrix<T> Network<T>::infer(const Matrix<T>& x) const {
  return const_cast<Network<T>*>(this)->run(x, Mode::infer, nullptr, nullptr, false);
}

template <typename T>
std::vector<T> Network<T>::infer_one(std::span<const T> x) const {
  Matrix<T> m(1, x.size());
  std::copy(x.begin(), x.end(), m.data.begin());
  return infer(m).data;
}

template <typename T>
double Network<T>::loss_and_grad(const Matrix<T>& x, std::span<const CardIndex> targets, Rng& rng,
                                 Parameters<T>& grads) {
  std::vector<BlockCache> cache;
  const Matrix<T> logits = run(x, Mode::train, &rng, &cache, true);
  Matrix<T> dlogits;
  const double loss = softmax_cross_entropy(logits, targets, &dlogits);

  grads = Parameters<T>::zeros(shape_);
  const T leak = static_cast<T>(shape_.leak);
  const std::size_t batch = x.rows;
  const std::size_t blocks = shape_.hidden_layers;

  Matrix<T> dh;
  dense_backward(params_.output, cache[blocks].input, dlogits, grads.output,
                 blocks > 0 ? &dh : nullptr);

  for (std::size_t k = blocks; k-- > 0;) {
    const BlockCache& blk = cache[k];
    const BatchNormLayer<T>& norm = params_.norms[k];
    const std::size_t width = params_.dense[k].out;

    Matrix<T> dxhat(batch, width);
    BatchNormLayer<T>& gnorm = grads.norms[k];
    for (std::size_t o = 0; o < width; ++o) {
      T dscale = 0, dshift = 0;
      for (std::size_t b = 0; b < batch; ++b) {
        const T pre = blk.normed(b, o);
        const T dy = dh(b, o) * blk.mask(b, o) * (pre > T(0) ? T(1) : leak);
        dscale += dy * blk.xhat(b, o);
        dshift += dy;
        dxhat(b, o) = dy * norm.scale[o];
      }
      gnorm.scale[o] = dscale;
      gnorm.shift[o] = dshift;
    }

    Matrix<T> dz(batch, width);
    const T inv_batch = T(1) / static_cast<T>(batch);
    for (std::size_t o = 0; o < width; ++o) {
      T sum_dxhat = 0, sum_dxhat_xhat = 0;
      for (std::size_t b = 0; b < batch; ++b) {
        sum_dxhat += dxhat(b, o);
        sum_dxhat_xhat += dxhat(b, o) * blk.xhat(b, o);
      }
      for (std::size_t b = 0; b < batch; ++b) {
        dz(b, o) = blk.inv_std[o] * inv_batch *
                   (static_cast<T>(batch) * dxhat(b, o) - sum_dxhat - blk.xhat(b, o) * sum_dxhat_xhat);
      }
    }

    Matrix<T> dprev;
    dense_backward(params_.dense[k], blk.input, dz, grads.dense[k], k > 0 ? &dprev : nullptr);
    dh = std::move(dprev);
  }
  return loss;
}

template <typename T>
Adam<T>::Adam(const NetworkShape& shape, double learning_rate, double beta1, double beta2,
              double epsilon)
    : lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon),
      m_(Parameters<T>::zeros(shape)),
      v_(Parameters<T>::zeros(shape)) {
  auto zero = [](const std::string&, std::vector<T>& v) { std::fill(v.begin(), v.end(), T(0)); };
  m_.visit(zero);
  v_.visit(zero);
}

template <typename T>
void Adam<T>::step(Parameters<T>& params, const Parameters<T>& grads) {
  std::vector<const std::vector<T>*> g;
  grads.visit([&](const std::string& name, const std::vector<T>& v) {
    if (!all_finite(v)) throw TrainingError("non-finite gradient in " + name);
    g.push_back(&v);
  });
  std::vector<std::vector<T>*> p, m, v;
  params.visit([&](const std::string&, std::vector<T>& x) { p.push_back(&x); });
  m_.visit([&](const std::string&, std::vector<T>& x) { m.push_back(&x); });
  v_.visit([&](const std::string&, std::vector<T>& x) { v.push_back(&x); });
  if (p.size() != g.size()) throw TrainingError("gradient layout does not match parameters");

  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t a = 0; a < p.size(); ++a) {
    auto& pa = *p[a];
    const auto& ga = *g[a];
    auto& ma = *m[a];
    auto& va = *v[a];
    if (pa.size() != ga.size()) throw TrainingError("gradient shape mismatch");
    for (std::size_t i = 0; i < pa.size(); ++i) {
      const double gi = static_cast<double>(ga[i]);
      const double mi = beta1_ * static_cast<double>(ma[i]) + (1.0 - beta1_) * gi;
      const double vi = beta2_ * static_cast<double>(va[i]) + (1.0 - beta2_) * gi * gi;
      ma[i] = static_cast<T>(mi);
      va[i] = static_cast<T>(vi);
      const double update = lr_ * (mi / c1) / (std::sqrt(vi / c2) + eps_);
      pa[i] = static_cast<T>(static_cast<double>(pa[i]) - update);
    }
  }
}

template struct Parameters<float>;
template struct Parameters<double>;
template class Network<float>;
template class Network<double>;
template class Adam<float>;
template class Adam<double>;
template double softmax_cross_entropy<float>(const Matrix<float>&, std::span<const CardIndex>,
                                             Matrix<float>*);
template double softmax_cross_entropy<double>(const Matrix<double>&, std::span<const CardIndex>,
                                              Matrix<double>*);

}  // namespace draftbots::nn
