#include "draftbots/agents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "draftbots/error.hpp"

namespace draftbots {

namespace {

void require_nonempty(std::span<const CardIndex> pack) {
  if (pack.empty()) throw Error("cannot rank an empty pack");
}

/// One uniform draw per distinct card, consumed in ascending card order.
std::map<CardIndex, double> draws_per_card(std::span<const CardIndex> pack, Rng& rng) {
  std::vector<CardIndex> distinct(pack.begin(), pack.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<CardIndex, double> out;
  for (CardIndex c : distinct) out[c] = rng.uniform();
  return out;
}

AgentRanking finish(std::span<const CardIndex> pack, std::vector<double> scores) {
  AgentRanking r;
  r.chosen = choose_card(pack, scores);
  r.scores = std::move(scores);
  return r;
}

double speculation_bonus(double commit, const DraftsimParams& p) {
  const double scaled = p.commit_slope * commit;
  return p.literal_max_bonus ? std::max(scaled, p.speculation_cap)
                             : std::min(scaled, p.speculation_cap);
}

}  // namespace

CardIndex choose_card(std::span<const CardIndex> pack, std::span<const double> scores) {
  require_nonempty(pack);
  if (scores.size() != pack.size()) throw Error("score count does not match pack size");
  std::size_t best = 0;
  for (std::size_t k = 1; k < pack.size(); ++k) {
    if (scores[k] > scores[best] || (scores[k] == scores[best] && pack[k] < pack[best])) best = k;
  }
  return pack[best];
}

AgentRanking random_rank(std::span<const CardIndex> pack, const Collection&, int, Rng& rng) {
  require_nonempty(pack);
  const auto draws = draws_per_card(pack, rng);
  std::vector<double> scores;
  scores.reserve(pack.size());
  for (CardIndex c : pack) scores.push_back(draws.at(c));
  return finish(pack, std::move(scores));
}

AgentRanking raredraft_rank(std::span<const CardIndex> pack, const Collection& collection, int,
                            const CardSet& set, Rng& rng) {
  require_nonempty(pack);
  // cards per color in the collection
  std::array<std::uint64_t, kColorCount> per_color{};
  for (CardIndex c = 0; c < collection.set_size(); ++c) {
    const auto n = collection.count(c);
    if (n == 0) continue;
    for (int col = 0; col < kColorCount; ++col) {
      if (set[c].colors.has(col)) per_color[static_cast<std::size_t>(col)] += n;
    }
  }
  const std::uint64_t top = *std::max_element(per_color.begin(), per_color.end());
  auto matches = [&](const Card& card) {
    if (top == 0) return false;
    for (int col = 0; col < kColorCount; ++col) {
      if (per_color[static_cast<std::size_t>(col)] == top && card.colors.has(col)) return true;
    }
    return false;
  };

  const auto draws = draws_per_card(pack, rng);
  std::vector<double> scores;
  scores.reserve(pack.size());
  for (CardIndex c : pack) {
    const Card& card = set.at(c);
    scores.push_back(4.0 * static_cast<double>(card.rarity) + (matches(card) ? 2.0 : 0.0) +
                     draws.at(c));
  }
  return finish(pack, std::move(scores));
}

double card_pull(const Card& card, const DraftsimParams& params) {
  return std::max(0.0, card.strength - params.strength_floor);
}

ColorCommit color_commit(const Collection& collection, const CardSet& set,
                         const DraftsimParams& params) {
  ColorCommit commit{};
  for (CardIndex c = 0; c < collection.set_size(); ++c) {
    const auto n = collection.count(c);
    if (n == 0) continue;
    const double pull = card_pull(set[c], params) * static_cast<double>(n);
    for (int col = 0; col < kColorCount; ++col) {
      if (set[c].colors.has(col)) commit[static_cast<std::size_t>(col)] += pull;
    }
  }
  return commit;
}

bool draftsim_committed(const ColorCommit& commit, int global_pick, const DraftsimParams& params) {
  if (global_pick >= params.phase_switch_pick) return true;
  const auto above = std::count_if(commit.begin(), commit.end(),
                                   [&](double v) { return v > params.commit_threshold; });
  return above >= 2;
}

std::array<int, 2> primary_colors(const ColorCommit& commit) {
  std::array<int, kColorCount> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return commit[static_cast<std::size_t>(a)] > commit[static_cast<std::size_t>(b)];
  });
  return {order[0], order[1]};
}

double draftsim_color_bias(const Card& card, const ColorCommit& commit, int global_pick,
                           const DraftsimParams& params) {
  const int ncolors = card.colors.num_colors();
  const auto primaries = primary_colors(commit);
  auto is_primary = [&](int col) { return col == primaries[0] || col == primaries[1]; };

  if (draftsim_committed(commit, global_pick, params)) {
    int off_symbols = 0;
    for (int col = 0; col < kColorCount; ++col) {
      if (!is_primary(col)) off_symbols += card.colors[col];
    }
    if (off_symbols == 0) return params.oncolor_bonus;
    return -params.offcolor_symbol_penalty * std::max(0, off_symbols - 1);
  }

  auto bonus = [&](int col) { return speculation_bonus(commit[static_cast<std::size_t>(col)], params); };
  if (ncolors == 0) {
    double best = bonus(0);
    for (int col = 1; col < kColorCount; ++col) best = std::max(best, bonus(col));
    return best;
  }
  if (ncolors == 1) {
    for (int col = 0; col < kColorCount; ++col) {
      if (card.colors.has(col)) return bonus(col);
    }
  }
  if (ncolors <= 3) {
    double sum = 0.0;
    for (int col = 0; col < kColorCount; ++col) {
      if (!card.colors.has(col)) continue;
      sum += is_primary(col) ? bonus(col) : -bonus(col);
    }
    return sum - params.multicolor_penalty;
  }
  return 0.0;
}

AgentRanking draftsim_rank(std::span<const CardIndex> pack, const Collection& collection,
                           int global_pick, const CardSet& set, const DraftsimParams& params) {
  require_nonempty(pack);
  const ColorCommit commit = color_commit(collection, set, params);
  std::vector<double> scores;
  scores.reserve(pack.size());
  for (CardIndex c : pack) {
    const Card& card = set.at(c);
    scores.push_back(card.strength + draftsim_color_bias(card, commit, global_pick, params));
  }
  return finish(pack, std::move(scores));
}

AgentRanking NoisyDraftsimAgent::rank(std::span<const CardIndex> pack,
                                      const Collection& collection, int global_pick,
                                      Rng& rng) const {
  AgentRanking base = draftsim_rank(pack, collection, global_pick, *set_, params_);
  std::vector<CardIndex> distinct(pack.begin(), pack.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::map<CardIndex, double> noise;
  for (CardIndex c : distinct) noise[c] = noise_ * rng.gumbel();
  for (std::size_t k = 0; k < pack.size(); ++k) base.scores[k] += noise.at(pack[k]);
  base.chosen = choose_card(pack, base.scores);
  return base;
}

AgentRanking bayes_rank(std::span<const CardIndex> pack, const Collection& collection,
                        int global_pick, const BayesModel& model) {
  require_nonempty(pack);
  const std::size_t s = model.set_size();
  if (collection.set_size() != s) {
    throw Error("bayes model covers " + std::to_string(s) + " cards, collection has " +
                std::to_string(collection.set_size()));
  }
  for (CardIndex c : pack) {
    if (c >= s) throw Error("pack card " + std::to_string(c) + " outside the model's set");
  }
  std::vector<double> scores;
  scores.reserve(pack.size());
  if (global_pick == 1) {
    for (CardIndex c : pack) scores.push_back(model.first_pick_scores[c]);
  } else {
    const auto counts = collection.counts();
    for (CardIndex i : pack) {
      const double* row = model.q.data() + std::size_t{i} * s;
      double acc = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        if (counts[j] != 0) acc += row[j] * static_cast<double>(counts[j]);
      }
      scores.push_back(acc);
    }
  }
  return finish(pack, std::move(scores));
}

AgentRanking nnet_rank(std::span<const CardIndex> pack, const Collection& collection, int,
                       const NNetModel& model) {
  require_nonempty(pack);
  const auto& shape = model.network.shape();
  if (collection.set_size() != shape.inputs) {
    throw Error("network expects " + std::to_string(shape.inputs) + " inputs, collection has " +
                std::to_string(collection.set_size()));
  }
  std::vector<float> x(collection.set_size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = static_cast<float>(collection.counts()[j]);
  const std::vector<float> y = model.network.infer_one(x);
  std::vector<double> scores;
  scores.reserve(pack.size());
  for (CardIndex c : pack) {
    if (c >= y.size()) throw Error("pack card " + std::to_string(c) + " outside network output");
    scores.push_back(static_cast<double>(y[c]));
  }
  return finish(pack, std::move(scores));
}

}  // namespace draftbots
