#include "draftbots/training.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "draftbots/error.hpp"
#include "json.hpp"

namespace draftbots {

using nlohmann::json;

namespace {

std::vector<const DraftLog*> select(const std::vector<DraftLog>& logs, bool human_only) {
  std::vector<const DraftLog*> out;
  for (const DraftLog& log : logs) {
    if (!human_only || log.seat_kind == SeatKind::human) out.push_back(&log);
  }
  return out;
}

/// Examples addressed as (log, pick) so collections are rebuilt per batch.
struct Example {
  const DraftLog* log;
  std::size_t event;
};

struct ExampleBatch {
  nn::Matrix<float> inputs;
  std::vector<CardIndex> targets;
};

ExampleBatch build_batch(std::span<const Example> examples, std::size_t set_size) {
  ExampleBatch batch{nn::Matrix<float>(examples.size(), set_size), {}};
  batch.targets.reserve(examples.size());
  for (std::size_t b = 0; b < examples.size(); ++b) {
    const auto& ex = examples[b];
    auto row = batch.inputs.row(b);
    for (std::size_t k = 0; k < ex.event; ++k) row[ex.log->events[k].picked] += 1.0f;
    batch.targets.push_back(ex.log->events[ex.event].picked);
  }
  return batch;
}

std::vector<Example> examples_of(const std::vector<const DraftLog*>& logs) {
  std::vector<Example> out;
  for (const DraftLog* log : logs) {
    for (std::size_t k = 0; k < log->events.size(); ++k) out.push_back({log, k});
  }
  return out;
}

double unmasked_accuracy(const nn::Network<float>& net, const std::vector<Example>& examples,
                         std::size_t set_size, std::size_t batch_size) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < examples.size(); start += batch_size) {
    const std::size_t len = std::min(batch_size, examples.size() - start);
    const ExampleBatch batch = build_batch({examples.data() + start, len}, set_size);
    const nn::Matrix<float> logits = net.infer(batch.inputs);
    for (std::size_t b = 0; b < len; ++b) {
      const auto row = logits.row(b);
      const auto best = static_cast<CardIndex>(std::max_element(row.begin(), row.end()) - row.begin());
      if (best == batch.targets[b]) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

/// Trains a fresh network; reports each epoch through `report`.
nn::Network<float> fit(const std::vector<Example>& train, const std::vector<Example>* validation,
                       std::size_t set_size, const TrainConfig& config, std::uint64_t seed,
                       const std::function<void(int, double, double)>& report) {
  nn::NetworkShape shape = nn::NetworkShape::for_set(set_size);
  if (config.width != 0) shape.width = config.width;
  shape.dropout = config.dropout;
  nn::Network<float> net = nn::Network<float>::he_uniform(shape, Rng::mix(seed, 1));
  nn::Adam<float> adam(shape, config.learning_rate);
  nn::Parameters<float> grads;
  Rng shuffle_rng(seed, 2);
  Rng dropout_rng(seed, 3);

  std::vector<Example> order = train;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      const ExampleBatch batch = build_batch({order.data() + start, len}, set_size);
      const double loss = net.loss_and_grad(batch.inputs, batch.targets, dropout_rng, grads);
      adam.step(net.params(), grads);
      loss_sum += loss * static_cast<double>(len);
      seen += len;
    }
    const double accuracy = unmasked_accuracy(net, validation != nullptr ? *validation : train,
                                              set_size, config.batch_size);
    report(epoch, loss_sum / static_cast<double>(std::max<std::size_t>(seen, 1)), accuracy);
  }
  return net;
}

}  // namespace

BayesCounts count_pairs(const std::vector<DraftLog>& logs, std::size_t set_size,
                        const BayesTrainOptions& options) {
  BayesCounts counts(set_size);
  std::vector<std::uint32_t> pack_mult(set_size, 0);
  std::vector<CardIndex> distinct, held;
  for (const DraftLog* log : select(logs, options.human_only)) {
    held.clear();
    replay(*log, set_size, [&](const PickEvent& ev, const Collection& before) {
      const CardIndex picked = ev.picked;
      distinct.clear();
      for (CardIndex c : ev.pack) {
        if (pack_mult[c]++ == 0) distinct.push_back(c);
      }

      if (ev.global_pick == 1) {
        for (CardIndex i : distinct) {
          for (CardIndex j : distinct) {
            if (j != i) counts.m[counts.at(i, j)] += pack_mult[i] * pack_mult[j];
          }
        }
        // the taken copy beats every copy of every other card
        for (CardIndex j : distinct) {
          if (j != picked) counts.m_gt[counts.at(picked, j)] += pack_mult[j];
        }
      }

      const auto have = before.counts();
      for (CardIndex i : distinct) {
        for (CardIndex j : held) {
          counts.n[counts.at(i, j)] += pack_mult[i] * have[j];
          if (i == picked) counts.n_to[counts.at(i, j)] += have[j];
        }
      }
      for (CardIndex c : distinct) pack_mult[c] = 0;
      if (have[picked] == 0) held.push_back(picked);
    });
  }
  return counts;
}

BayesModel train_bayes(const std::vector<DraftLog>& logs, const CardSet& set,
                       const BayesTrainOptions& options) {
  const auto selected = select(logs, options.human_only);
  if (selected.empty()) {
    throw Error(options.human_only ? "no human-seat logs to train on (corpus empty or bots only)"
                                   : "cannot train on an empty corpus");
  }
  for (const DraftLog* log : selected) validate_log(*log, set);
  return BayesModel::from_counts(set.code(), count_pairs(logs, set.size(), options));
}

TrainConfig parse_train_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("train config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("train config must be a JSON object");
  TrainConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "epochs") c.epochs = value.get<int>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "folds") c.folds = value.get<int>();
      else if (key == "cross_validate") c.cross_validate = value.get<bool>();
      else if (key == "human_only") c.human_only = value.get<bool>();
      else if (key == "width") c.width = value.get<std::size_t>();
      else if (key == "dropout") c.dropout = value.get<double>();
      else throw SchemaError("train config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("train config: ") + e.what());
  }
  if (c.epochs < 1) throw SchemaError("train config: epochs must be >= 1");
  if (c.batch_size < 1) throw SchemaError("train config: batch_size must be >= 1");
  if (c.cross_validate && c.folds < 2) throw SchemaError("train config: folds must be >= 2");
  if (!(c.learning_rate > 0.0)) throw SchemaError("train config: learning_rate must be positive");
  if (!(c.dropout >= 0.0 && c.dropout < 1.0)) throw SchemaError("train config: dropout in [0,1)");
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open train config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_train_config(buf.str());
}

NNetTrainResult train_nnet(const std::vector<DraftLog>& logs, const CardSet& set,
                           const TrainConfig& config,
                           const std::function<void(const EpochMetrics&)>& on_epoch) {
  const auto selected = select(logs, config.human_only);
  if (selected.empty()) {
    throw Error(config.human_only ? "no human-seat logs to train on (corpus empty or bots only)"
                                  : "cannot train on an empty corpus");
  }
  for (const DraftLog* log : selected) validate_log(*log, set);

  NNetTrainResult result;
  auto emit = [&](int fold) {
    return [&, fold](int epoch, double loss, double acc) {
      EpochMetrics m{epoch, fold, loss, acc};
      result.metrics.push_back(m);
      if (on_epoch) on_epoch(m);
    };
  };

  if (config.cross_validate) {
    if (selected.size() < static_cast<std::size_t>(config.folds)) {
      throw Error("fewer logs than cross-validation folds");
    }
    std::vector<std::size_t> order(selected.size());
    std::iota(order.begin(), order.end(), 0);
    Rng fold_rng(config.seed, 7);
    std::shuffle(order.begin(), order.end(), fold_rng.engine());
    for (int fold = 0; fold < config.folds; ++fold) {
      std::vector<const DraftLog*> train, held;
      for (std::size_t k = 0; k < order.size(); ++k) {
        (static_cast<int>(k % static_cast<std::size_t>(config.folds)) == fold ? held : train)
            .push_back(selected[order[k]]);
      }
      const auto train_ex = examples_of(train);
      const auto held_ex = examples_of(held);
      double last = 0.0;
      auto report = emit(fold + 1);
      fit(train_ex, &held_ex, set.size(), config, Rng::mix(config.seed, 100 + fold),
          [&](int e, double l, double a) {
            last = a;
            report(e, l, a);
          });
      result.fold_accuracy.push_back(last);
    }
  }

  const auto all = examples_of(selected);
  result.model.set_code = set.code();
  result.model.network = fit(all, nullptr, set.size(), config, config.seed, emit(0));
  return result;
}

void write_metrics_csv(const std::vector<EpochMetrics>& metrics, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "epoch,fold,loss,accuracy\n";
  out.precision(9);
  for (const auto& m : metrics) {
    out << m.epoch << ',' << (m.fold == 0 ? std::string("all") : std::to_string(m.fold)) << ','
        << m.loss << ',' << m.accuracy << '\n';
  }
}

}  // namespace draftbots
