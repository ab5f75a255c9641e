#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "draftbots/bayes_model.hpp"
#include "draftbots/card_set.hpp"
#include "draftbots/nn.hpp"
#include "draftbots/random.hpp"

namespace draftbots {

/// One score per pack entry (pack order) and the chosen card.
struct AgentRanking {
  std::vector<double> scores;
  CardIndex chosen = 0;
};

/// Highest score wins; exact ties go to the lowest card index.
CardIndex choose_card(std::span<const CardIndex> pack, std::span<const double> scores);

/// Uniform random ranking. Scores are drawn per distinct card in ascending
/// index order, so the choice does not depend on pack order.
AgentRanking random_rank(std::span<const CardIndex> pack, const Collection& collection,
                         int global_pick, Rng& rng);

/// Rarest card first; within the top rarity prefers cards sharing the most
/// common color of the collection, then breaks ties at random.
AgentRanking raredraft_rank(std::span<const CardIndex> pack, const Collection& collection,
                            int global_pick, const CardSet& set, Rng& rng);

struct DraftsimParams {
  double strength_floor = 2.0;
  double commit_slope = 0.257;
  double speculation_cap = 0.9;
  double multicolor_penalty = 0.6;
  double commit_threshold = 3.5;
  double oncolor_bonus = 2.0;
  double offcolor_symbol_penalty = 1.0;
  int phase_switch_pick = 19;
  /// Use max(slope * commit, cap) instead of the capped min() for the
  /// single-color speculation bonus.
  bool literal_max_bonus = false;
};

using ColorCommit = std::array<double, kColorCount>;

/// strength above the floor, never negative
double card_pull(const Card& card, const DraftsimParams& params = {});

/// Sum of pull over collected cards (with multiplicity) that contain each color.
ColorCommit color_commit(const Collection& collection, const CardSet& set,
                         const DraftsimParams& params = {});

/// True once two colors pass the commit threshold or the phase-switch pick is reached.
bool draftsim_committed(const ColorCommit& commit, int global_pick,
                        const DraftsimParams& params = {});

/// Two largest commitments; ties resolved in WUBRG order.
std::array<int, 2> primary_colors(const ColorCommit& commit);

double draftsim_color_bias(const Card& card, const ColorCommit& commit, int global_pick,
                           const DraftsimParams& params = {});

AgentRanking draftsim_rank(std::span<const CardIndex> pack, const Collection& collection,
                           int global_pick, const CardSet& set,
                           const DraftsimParams& params = {});

/// First pick: first-pick log-likelihoods. Later picks: (Q . c) restricted to the pack.
/// Throws Error when the collection or pack does not fit the model's set size.
AgentRanking bayes_rank(std::span<const CardIndex> pack, const Collection& collection,
                        int global_pick, const BayesModel& model);

/// Network scores on the collection vector, masked to cards present in the pack.
AgentRanking nnet_rank(std::span<const CardIndex> pack, const Collection& collection,
                       int global_pick, const NNetModel& model);

/// Common interface of every drafting agent. Implementations are immutable;
/// all randomness comes from the stream passed to rank().
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                            int global_pick, Rng& rng) const = 0;
};

class RandomAgent final : public Agent {
 public:
  std::string name() const override { return "random"; }
  AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                    int global_pick, Rng& rng) const override {
    return random_rank(pack, collection, global_pick, rng);
  }
};

class RaredraftAgent final : public Agent {
 public:
  explicit RaredraftAgent(std::shared_ptr<const CardSet> set) : set_(std::move(set)) {}
  std::string name() const override { return "raredraft"; }
  AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                    int global_pick, Rng& rng) const override {
    return raredraft_rank(pack, collection, global_pick, *set_, rng);
  }

 private:
  std::shared_ptr<const CardSet> set_;
};

class DraftsimAgent final : public Agent {
 public:
  explicit DraftsimAgent(std::shared_ptr<const CardSet> set, DraftsimParams params = {})
      : set_(std::move(set)), params_(params) {}
  std::string name() const override { return "draftsim"; }
  AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                    int global_pick, Rng&) const override {
    return draftsim_rank(pack, collection, global_pick, *set_, params_);
  }

 private:
  std::shared_ptr<const CardSet> set_;
  DraftsimParams params_;
};

/// Draftsim heuristic plus Gumbel noise of the given scale on every distinct
/// card; a stand-in for human pick logs in synthetic corpora.
class NoisyDraftsimAgent final : public Agent {
 public:
  NoisyDraftsimAgent(std::shared_ptr<const CardSet> set, double noise, DraftsimParams params = {})
      : set_(std::move(set)), noise_(noise), params_(params) {}
  std::string name() const override { return "noisy-draftsim"; }
  AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                    int global_pick, Rng& rng) const override;

 private:
  std::shared_ptr<const CardSet> set_;
  double noise_;
  DraftsimParams params_;
};

class BayesAgent final : public Agent {
 public:
  explicit BayesAgent(std::shared_ptr<const BayesModel> model) : model_(std::move(model)) {}
  std::string name() const override { return "bayes"; }
  AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                    int global_pick, Rng&) const override {
    return bayes_rank(pack, collection, global_pick, *model_);
  }

 private:
  std::shared_ptr<const BayesModel> model_;
};

class NNetAgent final : public Agent {
 public:
  explicit NNetAgent(std::shared_ptr<const NNetModel> model) : model_(std::move(model)) {}
  std::string name() const override { return "nnet"; }
  AgentRanking rank(std::span<const CardIndex> pack, const Collection& collection,
                    int global_pick, Rng&) const override {
    return nnet_rank(pack, collection, global_pick, *model_);
  }

 private:
  std::shared_ptr<const NNetModel> model_;
};

}  // namespace draftbots
