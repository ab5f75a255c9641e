#include <fstream>

#include "bayes_oracle.hpp"
#include "doctest.h"
#include "draftbots/error.hpp"
#include "draftbots/model_io.hpp"
#include "draftbots/training.hpp"
#include "test_support.hpp"

using namespace draftbots;

namespace {

const CardSet& desk() {
  static const CardSet set = load_set(testing::data_file("desk.json"));
  return set;
}

BayesModel toy_bayes() {
  return BayesModel::from_counts("DESK", count_pairs(testing::toy_drafts(40, 10, 2, "DESK"), 40));
}

NNetModel toy_nnet() {
  nn::Network<float> net = nn::Network<float>::he_uniform(nn::NetworkShape::for_set(40), 6);
  // move the running statistics away from their defaults
  Rng rng(1);
  nn::Matrix<float> x(16, 40);
  for (auto& v : x.data) v = static_cast<float>(rng.below(3));
  net.forward(x, nn::Mode::train, &rng);
  return {"DESK", std::move(net)};
}

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("bayes model round-trips exactly") {
  const BayesModel model = toy_bayes();
  const std::string bytes = model_to_bytes(model);
  CHECK(bytes.rfind("DRFTMODL", 0) == 0);
  CHECK(model_kind(bytes) == ModelKind::bayes);
  const BayesModel back = bayes_from_bytes(bytes, &desk());
  CHECK(back.set_code == "DESK");
  CHECK(back.counts == model.counts);
  CHECK(back.q == model.q);
  CHECK(back.first_pick_scores == model.first_pick_scores);
  CHECK(model_to_bytes(back) == bytes);
}

TEST_CASE("nnet model round-trips with identical outputs") {
  const NNetModel model = toy_nnet();
  const std::string bytes = model_to_bytes(model);
  CHECK(model_kind(bytes) == ModelKind::nnet);
  const NNetModel back = nnet_from_bytes(bytes, &desk());
  nn::Matrix<float> x(3, 40, 0.0f);
  x(1, 4) = 2.0f;
  x(2, 39) = 1.0f;
  CHECK(back.network.infer(x).data == model.network.infer(x).data);
  CHECK(back.network.params().norms[1].running_mean == model.network.params().norms[1].running_mean);
  CHECK(back.network.shape().dropout == model.network.shape().dropout);
  CHECK(model_to_bytes(back) == bytes);
}

TEST_CASE("files and kind sniffing") {
  testing::TempDir dir;
  save_model(toy_bayes(), dir / "b.model");
  save_model(toy_nnet(), dir / "n.model");
  CHECK(peek_model_kind(dir / "b.model") == ModelKind::bayes);
  CHECK(peek_model_kind(dir / "n.model") == ModelKind::nnet);
  CHECK_NOTHROW(load_bayes_model(dir / "b.model", &desk()));
  CHECK_NOTHROW(load_nnet_model(dir / "n.model", &desk()));
  CHECK_THROWS_AS(load_bayes_model(dir / "n.model"), ModelError);
  CHECK_THROWS_AS(load_nnet_model(dir / "b.model"), ModelError);
  CHECK_THROWS_AS(load_bayes_model(dir / "missing.model"), ModelError);
}

TEST_CASE("corrupt containers are rejected") {
  const std::string bytes = model_to_bytes(toy_bayes());
  CHECK_THROWS_WITH_AS(bayes_from_bytes(bytes.substr(0, bytes.size() - 3)),
                       doctest::Contains("corrupt"), ModelError);
  CHECK_THROWS_WITH_AS(bayes_from_bytes(bytes + "x"), doctest::Contains("corrupt"), ModelError);
  CHECK_THROWS_AS(bayes_from_bytes(bytes.substr(0, 5)), ModelError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(bayes_from_bytes(bad_magic), ModelError);
  std::string v2 = bytes;
  v2[8] = 2;
  CHECK_THROWS_WITH_AS(bayes_from_bytes(v2), doctest::Contains("unsupported"), ModelError);
}

TEST_CASE("set mismatch is reported") {
  const CardSet other = testing::minimal_set();
  CHECK_THROWS_WITH_AS(bayes_from_bytes(model_to_bytes(toy_bayes()), &other),
                       doctest::Contains("set mismatch"), ModelError);
  CHECK_THROWS_WITH_AS(nnet_from_bytes(model_to_bytes(toy_nnet()), &other),
                       doctest::Contains("set mismatch"), ModelError);
}

}
