#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "draftbots/bayes_model.hpp"
#include "draftbots/card_set.hpp"
#include "draftbots/draft_log.hpp"
#include "draftbots/nn.hpp"

namespace draftbots {

struct BayesTrainOptions {
  /// Count only logs recorded for human seats.
  bool human_only = true;
};

/// Pair counts of a corpus. First-pick counts (m, m_gt) come from global
/// pick 1 only: the taken card beats every other copy in the same pack.
/// Synergy counts (n, n_to) come from every pick. Multiplicities count.
BayesCounts count_pairs(const std::vector<DraftLog>& logs, std::size_t set_size,
                        const BayesTrainOptions& options = {});

/// Throws Error when no log survives the filter.
BayesModel train_bayes(const std::vector<DraftLog>& logs, const CardSet& set,
                       const BayesTrainOptions& options = {});

struct TrainConfig {
  int epochs = 20;
  std::size_t batch_size = 256;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  int folds = 3;
  bool cross_validate = false;
  bool human_only = true;
  /// Hidden width; 0 means the set size.
  std::size_t width = 0;
  double dropout = 0.5;
};

/// Strict JSON config; unknown keys are rejected. Missing keys keep defaults.
TrainConfig parse_train_config(std::string_view json_text);
TrainConfig load_train_config(const std::filesystem::path& path);

struct EpochMetrics {
  int epoch = 0;
  /// 1-based cross-validation fold, 0 for the final model on all data.
  int fold = 0;
  double loss = 0.0;
  /// Unmasked next-pick accuracy: validation fold for CV, training data otherwise.
  double accuracy = 0.0;
};

struct NNetTrainResult {
  NNetModel model;
  std::vector<EpochMetrics> metrics;
  /// Final-epoch validation accuracy per fold (empty without CV).
  std::vector<double> fold_accuracy;
};

/// One example per pick: input = collection before the pick, target = the pick.
NNetTrainResult train_nnet(const std::vector<DraftLog>& logs, const CardSet& set,
                           const TrainConfig& config,
                           const std::function<void(const EpochMetrics&)>& on_epoch = {});

void write_metrics_csv(const std::vector<EpochMetrics>& metrics, const std::filesystem::path& path);

}  // namespace draftbots
