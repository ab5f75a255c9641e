#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "draftbots/card_set.hpp"
#include "draftbots/random.hpp"

namespace draftbots {

inline constexpr int kSeats = 8;
inline constexpr int kPackSize = 15;
inline constexpr int kPacksPerDraft = 3;
inline constexpr int kPicksPerDraft = kPackSize * kPacksPerDraft;

/// Size of the pack presented at a 1-based global pick: 15..1 within each pack.
constexpr int pack_size_at(int global_pick) { return kPackSize - (global_pick - 1) % kPackSize; }

/// Slot layout of one booster. Rare slot is mythic with `mythic_probability`.
struct PackRecipe {
  int commons = 11;
  int uncommons = 3;
  int rare_slots = 1;
  double mythic_probability = 1.0 / 8.0;
  /// When set, basic lands join the common pool.
  bool include_basics = false;

  int size() const { return commons + uncommons + rare_slots; }
};

/// Samples one booster: each slot uniformly without replacement within its rarity.
/// Throws ConfigError when a rarity pool is too small for the recipe.
Pack generate_pack(const CardSet& set, Rng& rng, const PackRecipe& recipe = {});

enum class PassDirection { left, right };

/// Direction packs travel during a 1-based pack number: left, right, left.
constexpr PassDirection pass_direction(int pack_number) {
  return pack_number % 2 == 1 ? PassDirection::left : PassDirection::right;
}

/// Seat that receives the pack held by `seat` after a pick.
constexpr int pass_target(int seat, PassDirection dir) {
  return dir == PassDirection::left ? (seat + 1) % kSeats : (seat + kSeats - 1) % kSeats;
}

/// Full 8-seat draft. Single owner, mutated only through step().
class DraftState {
 public:
  /// Opens the first round of packs. The same (set, seed) always yields the same draft.
  DraftState(const CardSet& set, std::uint64_t seed, PackRecipe recipe = {});

  const CardSet& set() const { return *set_; }
  std::uint64_t seed() const { return seed_; }
  int pack_number() const { return pack_number_; }
  int pick_in_pack() const { return pick_in_pack_; }
  int global_pick() const { return (pack_number_ - 1) * kPackSize + pick_in_pack_; }
  bool terminal() const { return terminal_; }
  int packs_opened() const { return packs_opened_; }

  const Pack& pack(int seat) const { return packs_.at(static_cast<std::size_t>(seat)); }
  const Collection& collection(int seat) const {
    return collections_.at(static_cast<std::size_t>(seat));
  }

  /// Applies one pick per seat, rotates the packs and opens a new round after
  /// the last card of a pack. Throws DraftError on an illegal pick (naming the
  /// seat) or when the draft is already finished; the state is unchanged then.
  void step(std::span<const CardIndex> picks);

 private:
  void open_round();

  const CardSet* set_;
  std::uint64_t seed_;
  PackRecipe recipe_;
  Rng rng_;
  std::vector<Collection> collections_;
  std::vector<Pack> packs_;
  int pack_number_ = 1;
  int pick_in_pack_ = 1;
  int packs_opened_ = 0;
  bool terminal_ = false;
};

inline DraftState new_draft(const CardSet& set, std::uint64_t seed, PackRecipe recipe = {}) {
  return DraftState(set, seed, recipe);
}

inline DraftState step(DraftState state, std::span<const CardIndex> picks) {
  state.step(picks);
  return state;
}

}  // namespace draftbots
