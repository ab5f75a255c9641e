#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "draftbots/agents.hpp"
#include "draftbots/card_set.hpp"
#include "draftbots/draft_engine.hpp"
#include "draftbots/draft_log.hpp"

namespace draftbots {

struct AccuracyCell {
  std::uint64_t correct = 0;
  std::uint64_t events = 0;

  double accuracy() const {
    return events == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(events);
  }
};

/// Cards grouped by expert strength into half-open bins [k*w, (k+1)*w); the
/// top bin is closed at 5.
struct StrengthBins {
  double width = 0.5;
  std::vector<std::size_t> card_bin;
  std::vector<std::size_t> population;

  std::size_t bin_count() const { return population.size(); }
  double lower(std::size_t bin) const { return width * static_cast<double>(bin); }
  double upper(std::size_t bin) const { return std::min(5.0, width * static_cast<double>(bin + 1)); }
};

StrengthBins strength_bins(const CardSet& set, double width = 0.5);

struct EvalReport {
  std::string agent;
  /// Fingerprint of the evaluated corpus; comparisons require equal values.
  std::string corpus_id;
  std::uint64_t seed = 0;
  std::uint64_t n_events = 0;
  std::uint64_t n_correct = 0;
  /// Correct picks over all events.
  double overall_accuracy = 0.0;
  /// Mean of per-draft accuracies.
  double draft_mean_accuracy = 0.0;
  std::array<AccuracyCell, kPicksPerDraft> per_pick{};
  StrengthBins bins;
  std::vector<AccuracyCell> per_strength_bin;
  /// Per-log tallies, used for draft-level resampling.
  std::vector<std::uint32_t> draft_correct;
  std::vector<std::uint32_t> draft_events;
};

struct EvalOptions {
  /// Base seed of the agent's random streams; log k uses stream k.
  std::uint64_t seed = 0;
  int jobs = 1;
  bool human_only = false;
  double bin_width = 0.5;
};

/// Replays every pick of every log through the agent and scores a hit when
/// the chosen card is the recorded pick (by card identity).
EvalReport evaluate(const Agent& agent, const std::vector<DraftLog>& logs, const CardSet& set,
                    const EvalOptions& options = {});

struct ComparisonEntry {
  std::string agent;
  double accuracy = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct PairwiseDifference {
  std::string first;
  std::string second;
  /// accuracy(first) - accuracy(second)
  double difference = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct Comparison {
  std::vector<ComparisonEntry> ranked;
  std::vector<PairwiseDifference> pairwise;
  std::size_t resamples = 0;
  double confidence = 0.0;
};

struct CompareOptions {
  std::size_t resamples = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 12345;
};

/// Ranks agents by accuracy and attaches paired draft-level bootstrap
/// percentile intervals. Throws Error for fewer than two reports or reports
/// over different corpora.
Comparison compare_agents(const std::vector<EvalReport>& reports, const CompareOptions& options = {});

/// Percentile of sorted data with linear interpolation between order statistics.
double percentile_sorted(const std::vector<double>& sorted, double q);

void write_report_json(const EvalReport& report, const std::filesystem::path& path);
void write_per_pick_csv(const EvalReport& report, const std::filesystem::path& path);
void write_strength_csv(const EvalReport& report, const std::filesystem::path& path);
void write_comparison_csv(const Comparison& comparison, const std::filesystem::path& path);
std::string comparison_table(const Comparison& comparison);

}  // namespace draftbots
