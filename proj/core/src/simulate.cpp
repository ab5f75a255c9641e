#include "draftbots/simulate.hpp"

#include "draftbots/error.hpp"
#include "draftbots/parallel.hpp"

namespace draftbots {

std::vector<DraftLog> run_bot_draft(const CardSet& set, std::span<const Agent* const> agents,
                                    std::uint64_t seed, const BotDraftOptions& options) {
  if (agents.size() != static_cast<std::size_t>(kSeats)) {
    throw Error("a draft needs exactly " + std::to_string(kSeats) + " agents");
  }
  DraftState state(set, seed, options.recipe);
  std::vector<DraftLog> logs(kSeats);
  std::vector<Rng> streams;
  for (int seat = 0; seat < kSeats; ++seat) {
    DraftLog& log = logs[static_cast<std::size_t>(seat)];
    log.draft_id = options.id_prefix + "-" + std::to_string(seed) + "-" + std::to_string(seat);
    log.set_code = set.code();
    log.seat_kind = options.seat_kinds[static_cast<std::size_t>(seat)];
    log.events.reserve(kPicksPerDraft);
    streams.emplace_back(seat_stream_seed(seed, seat));
  }

  std::array<CardIndex, kSeats> picks{};
  while (!state.terminal()) {
    const int pick = state.global_pick();
    for (int seat = 0; seat < kSeats; ++seat) {
      const auto s = static_cast<std::size_t>(seat);
      const Pack& pack = state.pack(seat);
      const AgentRanking r = agents[s]->rank(pack.cards(), state.collection(seat), pick, streams[s]);
      picks[s] = r.chosen;
      logs[s].events.push_back(
          PickEvent{pick, std::vector<CardIndex>(pack.cards().begin(), pack.cards().end()),
                    r.chosen});
    }
    state.step(picks);
  }
  return logs;
}

std::vector<DraftLog> simulate_drafts(const CardSet& set, std::span<const Agent* const> agents,
                                      std::size_t pods, std::uint64_t seed, int jobs,
                                      const BotDraftOptions& options) {
  std::vector<std::vector<DraftLog>> per_pod(pods);
  parallel_for(pods, jobs, [&](std::size_t p) {
    per_pod[p] = run_bot_draft(set, agents, Rng::mix(seed, p), options);
  });
  std::vector<DraftLog> out;
  out.reserve(pods * kSeats);
  for (auto& pod : per_pod) {
    for (auto& log : pod) out.push_back(std::move(log));
  }
  return out;
}

}  // namespace draftbots
