#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "draftbots/agents.hpp"
#include "draftbots/draft_engine.hpp"
#include "draftbots/draft_log.hpp"

namespace draftbots {

struct BotDraftOptions {
  std::string id_prefix = "sim";
  std::array<SeatKind, kSeats> seat_kinds{SeatKind::bot, SeatKind::bot, SeatKind::bot,
                                          SeatKind::bot, SeatKind::bot, SeatKind::bot,
                                          SeatKind::bot, SeatKind::bot};
  PackRecipe recipe;
};

/// Seed of the random stream handed to the agent at `seat` in a draft.
inline std::uint64_t seat_stream_seed(std::uint64_t draft_seed, int seat) {
  return Rng::mix(draft_seed, 1000 + static_cast<std::uint64_t>(seat));
}

/// Drives a full 45-pick draft with one agent per seat and returns one log
/// per seat. Deterministic in (set, agents, seed).
std::vector<DraftLog> run_bot_draft(const CardSet& set, std::span<const Agent* const> agents,
                                    std::uint64_t seed, const BotDraftOptions& options = {});

/// `pods` independent drafts; pod p is seeded with Rng::mix(seed, p). Logs are
/// returned pod by pod, seat by seat, regardless of `jobs`.
std::vector<DraftLog> simulate_drafts(const CardSet& set, std::span<const Agent* const> agents,
                                      std::size_t pods, std::uint64_t seed, int jobs = 1,
                                      const BotDraftOptions& options = {});

}  // namespace draftbots
