#include <cmath>
#include <limits>

#include "doctest.h"
#include "draftbots/error.hpp"
#include "draftbots/nn.hpp"

using namespace draftbots;
using namespace draftbots::nn;

namespace {

Matrix<double> random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix<double> m(r, c);
  for (auto& v : m.data) v = rng.normal();
  return m;
}

// Train-mode loss with a fixed dropout stream, for finite differences.
double train_loss(Network<double> net, const Matrix<double>& x, const std::vector<CardIndex>& t,
                  const Rng& stream) {
  Rng rng = stream;
  return softmax_cross_entropy<double>(net.forward(x, Mode::train, &rng), t, nullptr);
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("uniform logits give a loss of ln S") {
  for (std::size_t S : {2u, 15u, 265u}) {
    Matrix<double> logits(4, S, 0.0);
    const std::vector<CardIndex> t{0, 1, 1, 0};
    CHECK(std::abs(softmax_cross_entropy<double>(logits, t, nullptr) - std::log(static_cast<double>(S))) < 1e-6);
    Matrix<float> flogits(3, S, 2.5f);
    const std::vector<CardIndex> ft{0, 1, 0};
    CHECK(std::abs(softmax_cross_entropy<float>(flogits, ft, nullptr) - std::log(static_cast<double>(S))) < 1e-6);
  }
  Network<float> zero(NetworkShape::for_set(40));
  Matrix<float> x(5, 40, 1.0f);
  Rng rng(1);
  Parameters<float> grads;
  const std::vector<CardIndex> t{1, 2, 3, 4, 5};
  CHECK(std::abs(zero.loss_and_grad(x, t, rng, grads) - std::log(40.0)) < 1e-6);
}

TEST_CASE("softmax cross-entropy gradient is (p - onehot) / B") {
  Matrix<double> logits(2, 3);
  logits.data = {1.0, 2.0, 3.0, 0.0, 0.0, 0.0};
  const std::vector<CardIndex> t{2, 0};
  Matrix<double> g;
  const double loss = softmax_cross_entropy(logits, t, &g);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(loss == doctest::Approx((-(3.0 - std::log(z)) + std::log(3.0)) / 2.0));
  CHECK(g(0, 0) == doctest::Approx(std::exp(1.0) / z / 2.0));
  CHECK(g(0, 2) == doctest::Approx((std::exp(3.0) / z - 1.0) / 2.0));
  CHECK(g(1, 0) == doctest::Approx((1.0 / 3.0 - 1.0) / 2.0));
  CHECK(g(1, 1) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("analytic gradients match central differences") {
  NetworkShape shape{6, 5, 4};
  shape.dropout = 0.3;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Network<double> net = Network<double>::he_uniform(shape, seed);
    Rng init(seed, 9);
    net.params().visit([&](const std::string&, std::vector<double>& v) {
      for (auto& w : v) w += 0.1 * init.normal();
    });
    Rng data(seed, 4);
    const Matrix<double> x = random_matrix(7, shape.inputs, data);
    const std::vector<CardIndex> t{0, 3, 1, 2, 2, 0, 1};
    const Rng stream(seed, 77);

    Rng rng = stream;
    Parameters<double> grads;
    Network<double> copy = net;
    copy.loss_and_grad(x, t, rng, grads);

    std::vector<std::vector<double>*> analytic;
    grads.visit([&](const std::string&, std::vector<double>& v) { analytic.push_back(&v); });
    std::size_t array = 0;
    double worst = 0.0;
    net.params().visit([&](const std::string& name, std::vector<double>& v) {
      const std::vector<double>& a = *analytic[array++];
      REQUIRE(a.size() == v.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double saved = v[k];
        const double h = 1e-5;
        v[k] = saved + h;
        const double up = train_loss(net, x, t, stream);
        v[k] = saved - h;
        const double down = train_loss(net, x, t, stream);
        v[k] = saved;
        const double numeric = (up - down) / (2 * h);
        const double err = relative_error(a[k], numeric);
        worst = std::max(worst, err);
        if (err >= 1e-4) {
          FAIL_CHECK(name << "[" << k << "]: analytic " << a[k] << " numeric " << numeric);
        }
      }
    });
    MESSAGE("worst relative error " << worst);
  }
}

TEST_CASE("inverted dropout zeroes about half and keeps the mean") {
  NetworkShape shape{4, 1000, 1000};
  shape.hidden_layers = 1;
  Network<double> net(shape);
  net.params().norms[0].shift.assign(1000, 1.0);
  auto& w = net.params().output.weights;
  for (std::size_t i = 0; i < 1000; ++i) w[i * 1000 + i] = 1.0;
  const Matrix<double> x(8, 4, 0.0);
  Rng rng(5);
  const Matrix<double> y = net.forward(x, Mode::train, &rng);
  std::size_t zeros = 0;
  double sum = 0.0;
  for (double v : y.data) {
    CHECK((v == 0.0 || std::abs(v - 2.0) < 1e-12));
    zeros += v == 0.0 ? 1 : 0;
    sum += v;
  }
  const double n = static_cast<double>(y.data.size());
  CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) < 0.02);
  CHECK(std::abs(sum / n - 1.0) < 0.04);
  for (double v : net.infer(x).data) CHECK(v == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("batchnorm running statistics use momentum 0.1 and unbiased variance") {
  NetworkShape shape{2, 2, 2};
  shape.hidden_layers = 1;
  shape.dropout = 0.0;
  Network<double> net(shape);
  auto& d = net.params().dense[0].weights;
  d = {1.0, 0.0, 0.0, 1.0};
  Matrix<double> x(3, 2);
  x.data = {1.0, 10.0, 2.0, 20.0, 6.0, 60.0};
  net.forward(x, Mode::train);
  const auto& bn = net.params().norms[0];
  CHECK(bn.running_mean[0] == doctest::Approx(0.1 * 3.0));
  CHECK(bn.running_mean[1] == doctest::Approx(0.1 * 30.0));
  CHECK(bn.running_var[0] == doctest::Approx(0.9 + 0.1 * 7.0));
  CHECK(bn.running_var[1] == doctest::Approx(0.9 + 0.1 * 700.0));
}

TEST_CASE("inference is pure and batch-independent") {
  Network<float> net = Network<float>::he_uniform(NetworkShape::for_set(12), 3);
  Rng rng(2);
  Matrix<float> x(5, 12);
  for (auto& v : x.data) v = static_cast<float>(rng.below(3));
  const auto a = net.infer(x);
  const auto b = net.infer(x);
  CHECK(a.data == b.data);
  const auto one = net.infer_one(x.row(2));
  for (std::size_t k = 0; k < 12; ++k) CHECK(one[k] == doctest::Approx(a(2, k)));
}

TEST_CASE("train mode with dropout needs a random stream") {
  Network<float> net = Network<float>::he_uniform(NetworkShape::for_set(6), 3);
  Matrix<float> x(2, 6, 1.0f);
  CHECK_THROWS_AS(net.forward(x, Mode::train, nullptr), Error);
}

TEST_CASE("he-uniform bounds and scale") {
  const NetworkShape shape = NetworkShape::for_set(200);
  const auto net = Network<double>::he_uniform(shape, 11);
  const double bound = std::sqrt(6.0 / 200.0);
  double sq = 0.0;
  const auto& w = net.params().dense[1].weights;
  for (double v : w) {
    CHECK(std::abs(v) <= bound);
    sq += v * v;
  }
  CHECK(sq / static_cast<double>(w.size()) == doctest::Approx(2.0 / 200.0).epsilon(0.05));
  for (double b : net.params().dense[0].bias) CHECK(b == 0.0);
  CHECK(Network<double>::he_uniform(shape, 11).params().output.weights == net.params().output.weights);
}

TEST_CASE("adam learns a three-class problem") {
  NetworkShape shape{3, 8, 3};
  shape.dropout = 0.0;
  Network<double> net = Network<double>::he_uniform(shape, 1);
  Adam<double> adam(shape, 1e-2);
  Matrix<double> x(6, 3, 0.0);
  std::vector<CardIndex> t;
  for (std::size_t r = 0; r < 6; ++r) {
    x(r, r % 3) = 1.0;
    t.push_back(static_cast<CardIndex>((r + 1) % 3));
  }
  Rng rng(1);
  Parameters<double> grads;
  double first = 0.0, last = 0.0;
  for (int it = 0; it < 300; ++it) {
    last = net.loss_and_grad(x, t, rng, grads);
    if (it == 0) first = last;
    adam.step(net.params(), grads);
  }
  CHECK(adam.steps() == 300);
  CHECK(last < 0.05);
  CHECK(last < first);
  const auto y = net.infer(x);
  for (std::size_t r = 0; r < 6; ++r) {
    const auto row = y.row(r);
    CHECK(static_cast<CardIndex>(std::max_element(row.begin(), row.end()) - row.begin()) == t[r]);
  }
}

TEST_CASE("non-finite gradients are rejected before any update") {
  NetworkShape shape{3, 4, 3};
  Network<double> net = Network<double>::he_uniform(shape, 1);
  Adam<double> adam(shape, 1e-3);
  Parameters<double> grads = Parameters<double>::zeros(shape);
  grads.dense[1].bias[2] = std::numeric_limits<double>::quiet_NaN();
  const Network<double> before = net;
  CHECK_THROWS_WITH_AS(adam.step(net.params(), grads), doctest::Contains("dense2.bias"), TrainingError);
  CHECK(net.params().dense[0].weights == before.params().dense[0].weights);
  CHECK(adam.steps() == 0);
}

}
