#include "draftbots/draft_engine.hpp"

#include <algorithm>
#include <string>

#include "draftbots/error.hpp"

namespace draftbots {

namespace {

void sample_slots(std::vector<CardIndex>& pool, int count, Rng& rng, std::vector<CardIndex>& out) {
  // partial Fisher-Yates over a scratch copy
  for (int k = 0; k < count; ++k) {
    std::size_t j = static_cast<std::size_t>(k) + rng.below(pool.size() - static_cast<std::size_t>(k));
    std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
    out.push_back(pool[static_cast<std::size_t>(k)]);
  }
}

void require(const CardSet& set, std::size_t have, int need, const char* what) {
  if (have < static_cast<std::size_t>(need)) {
    throw ConfigError("set '" + set.code() + "' has " + std::to_string(have) + " " + what +
                      " cards, pack recipe needs " + std::to_string(need));
  }
}

}  // namespace

Pack generate_pack(const CardSet& set, Rng& rng, const PackRecipe& recipe) {
  std::vector<CardIndex> commons = set.indices_of(Rarity::common);
  if (recipe.include_basics) {
    auto basics = set.indices_of(Rarity::basic);
    commons.insert(commons.end(), basics.begin(), basics.end());
  }
  std::vector<CardIndex> uncommons = set.indices_of(Rarity::uncommon);
  std::vector<CardIndex> rares = set.indices_of(Rarity::rare);
  std::vector<CardIndex> mythics = set.indices_of(Rarity::mythic);

  require(set, commons.size(), recipe.commons, "common");
  require(set, uncommons.size(), recipe.uncommons, "uncommon");
  if (recipe.rare_slots > 0) {
    require(set, rares.size(), recipe.rare_slots, "rare");
    if (recipe.mythic_probability > 0.0) require(set, mythics.size(), recipe.rare_slots, "mythic");
  }

  std::vector<CardIndex> cards;
  cards.reserve(static_cast<std::size_t>(recipe.size()));
  sample_slots(commons, recipe.commons, rng, cards);
  sample_slots(uncommons, recipe.uncommons, rng, cards);
  // each rare slot independently upgrades to mythic; no duplicates within a rarity
  int mythic_slots = 0;
  for (int k = 0; k < recipe.rare_slots; ++k) {
    if (rng.bernoulli(recipe.mythic_probability)) ++mythic_slots;
  }
  sample_slots(rares, recipe.rare_slots - mythic_slots, rng, cards);
  sample_slots(mythics, mythic_slots, rng, cards);
  return Pack(std::move(cards));
}

DraftState::DraftState(const CardSet& set, std::uint64_t seed, PackRecipe recipe)
    : set_(&set),
      seed_(seed),
      recipe_(recipe),
      rng_(seed),
      collections_(kSeats, Collection(set.size())),
      packs_(kSeats) {
  if (recipe_.size() != kPackSize) {
    throw ConfigError("pack recipe must have " + std::to_string(kPackSize) + " slots, got " +
                      std::to_string(recipe_.size()));
  }
  open_round();
}

void DraftState::open_round() {
  for (auto& pack : packs_) {
    pack = generate_pack(*set_, rng_, recipe_);
    ++packs_opened_;
  }
}

void DraftState::step(std::span<const CardIndex> picks) {
  if (terminal_) throw DraftError("draft is finished; no further picks accepted");
  if (picks.size() != static_cast<std::size_t>(kSeats)) {
    throw DraftError("expected " + std::to_string(kSeats) + " picks, got " +
                     std::to_string(picks.size()));
  }
  for (int seat = 0; seat < kSeats; ++seat) {
    const CardIndex card = picks[static_cast<std::size_t>(seat)];
    if (!packs_[static_cast<std::size_t>(seat)].contains(card)) {
      throw DraftError("illegal pick at seat " + std::to_string(seat) + ": card " +
                       std::to_string(card) + " is not in its pack");
    }
  }
  for (int seat = 0; seat < kSeats; ++seat) {
    const auto s = static_cast<std::size_t>(seat);
    packs_[s].remove_one(picks[s]);
    collections_[s].add(picks[s]);
  }

  if (pick_in_pack_ == kPackSize) {
    if (pack_number_ == kPacksPerDraft) {
      terminal_ = true;
      return;
    }
    ++pack_number_;
    pick_in_pack_ = 1;
    open_round();
    return;
  }

  std::vector<Pack> rotated(kSeats);
  const PassDirection dir = pass_direction(pack_number_);
  for (int seat = 0; seat < kSeats; ++seat) {
    rotated[static_cast<std::size_t>(pass_target(seat, dir))] =
        std::move(packs_[static_cast<std::size_t>(seat)]);
  }
  packs_ = std::move(rotated);
  ++pick_in_pack_;
}

}  // namespace draftbots
