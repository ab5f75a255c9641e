#pragma once

#include <cmath>
#include <vector>

#include "draftbots/draft_engine.hpp"
#include "draftbots/draft_log.hpp"
#include "draftbots/random.hpp"

namespace testing {

/// Counts recomputed copy by copy, straight from their definitions.
struct OracleCounts {
  std::size_t S;
  std::vector<double> m, m_gt, n, n_to;
  explicit OracleCounts(std::size_t s) : S(s), m(s * s), m_gt(s * s), n(s * s), n_to(s * s) {}
};

inline OracleCounts oracle_counts(const std::vector<draftbots::DraftLog>& logs, std::size_t S) {
  OracleCounts o(S);
  for (const auto& log : logs) {
    std::vector<draftbots::CardIndex> held;
    for (const auto& ev : log.events) {
      const auto& pack = ev.pack;
      if (ev.global_pick == 1) {
        for (std::size_t a = 0; a < pack.size(); ++a) {
          for (std::size_t b = 0; b < pack.size(); ++b) {
            if (a == b || pack[a] == pack[b]) continue;
            o.m[pack[a] * S + pack[b]] += 1;
          }
        }
        for (std::size_t b = 0; b < pack.size(); ++b) {
          if (pack[b] != ev.picked) o.m_gt[ev.picked * S + pack[b]] += 1;
        }
      }
      for (auto i : pack) {
        for (auto j : held) o.n[i * S + j] += 1;
      }
      for (auto j : held) o.n_to[ev.picked * S + j] += 1;
      held.push_back(ev.picked);
    }
  }
  return o;
}

/// Score of card i given collection counts c, one log term at a time.
inline double oracle_score(const OracleCounts& o, draftbots::CardIndex i,
                           const std::vector<std::uint32_t>& c, int global_pick) {
  double s = 0.0;
  if (global_pick == 1) {
    for (std::size_t j = 0; j < o.S; ++j) {
      if (j == i) continue;
      s += std::log((o.m_gt[i * o.S + j] + 1.0) / (o.m[i * o.S + j] + 2.0));
    }
    return s;
  }
  for (std::size_t j = 0; j < o.S; ++j) {
    for (std::uint32_t copy = 0; copy < c[j]; ++copy) {
      s += std::log((o.n_to[i * o.S + j] + 1.0) / (o.n[i * o.S + j] + 2.0));
    }
  }
  return s;
}

/// Drafts over a tiny set: packs follow the 15..1 schedule and are drawn with
/// replacement, so duplicates occur; picks are uniform.
inline std::vector<draftbots::DraftLog> toy_drafts(std::size_t S, std::size_t drafts,
                                                   std::uint64_t seed, const std::string& code) {
  draftbots::Rng rng(seed);
  std::vector<draftbots::DraftLog> logs;
  for (std::size_t d = 0; d < drafts; ++d) {
    draftbots::DraftLog log;
    log.draft_id = "toy-" + std::to_string(d);
    log.set_code = code;
    log.seat_kind = draftbots::SeatKind::human;
    for (int p = 1; p <= draftbots::kPicksPerDraft; ++p) {
      draftbots::PickEvent ev;
      ev.global_pick = p;
      for (int k = 0; k < draftbots::pack_size_at(p); ++k) {
        ev.pack.push_back(static_cast<draftbots::CardIndex>(rng.below(S)));
      }
      ev.picked = ev.pack[rng.below(ev.pack.size())];
      log.events.push_back(std::move(ev));
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace testing
