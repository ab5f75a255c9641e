#include "draftbots/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "draftbots/error.hpp"
#include "draftbots/parallel.hpp"
#include "json.hpp"

namespace draftbots {

using nlohmann::json;

namespace {

std::string fingerprint(const std::vector<const DraftLog*>& logs) {
  // FNV-1a over ids and picks
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  for (const DraftLog* log : logs) {
    for (char c : log->draft_id) mix(static_cast<unsigned char>(c));
    for (const PickEvent& ev : log->events) mix(ev.picked);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h << "-" << std::dec << logs.size();
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(10);
  return out;
}

}  // namespace

StrengthBins strength_bins(const CardSet& set, double width) {
  if (!(width > 0.0)) throw Error("bin width must be positive");
  StrengthBins bins;
  bins.width = width;
  const auto n = static_cast<std::size_t>(std::ceil(5.0 / width - 1e-9));
  bins.population.assign(n, 0);
  for (const Card& card : set.cards()) {
    auto b = static_cast<std::size_t>(std::floor(card.strength / width + 1e-9));
    b = std::min(b, n - 1);
    bins.card_bin.push_back(b);
    ++bins.population[b];
  }
  return bins;
}

EvalReport evaluate(const Agent& agent, const std::vector<DraftLog>& logs, const CardSet& set,
                    const EvalOptions& options) {
  std::vector<const DraftLog*> selected;
  for (const DraftLog& log : logs) {
    if (!options.human_only || log.seat_kind == SeatKind::human) selected.push_back(&log);
  }
  for (const DraftLog* log : selected) {
    if (log->set_code != set.code()) {
      throw Error("set mismatch: log " + log->draft_id + " is for '" + log->set_code +
                  "', evaluating against '" + set.code() + "'");
    }
  }

  EvalReport report;
  report.agent = agent.name();
  report.corpus_id = fingerprint(selected);
  report.seed = options.seed;
  report.bins = strength_bins(set, options.bin_width);
  report.per_strength_bin.assign(report.bins.bin_count(), {});
  report.draft_correct.assign(selected.size(), 0);
  report.draft_events.assign(selected.size(), 0);

  // per-log hit flags, merged afterwards so the result is independent of `jobs`
  std::vector<std::vector<std::uint8_t>> hits(selected.size());
  parallel_for(selected.size(), options.jobs, [&](std::size_t d) {
    Rng rng(options.seed, d);
    const DraftLog& log = *selected[d];
    auto& h = hits[d];
    h.reserve(log.events.size());
    replay(log, set.size(), [&](const PickEvent& ev, const Collection& before) {
      const AgentRanking r = agent.rank(ev.pack, before, ev.global_pick, rng);
      h.push_back(r.chosen == ev.picked ? 1 : 0);
    });
  });

  double draft_acc_sum = 0.0;
  for (std::size_t d = 0; d < selected.size(); ++d) {
    const DraftLog& log = *selected[d];
    for (std::size_t k = 0; k < log.events.size(); ++k) {
      const PickEvent& ev = log.events[k];
      const bool hit = hits[d][k] != 0;
      const auto p = static_cast<std::size_t>(ev.global_pick - 1);
      if (p < report.per_pick.size()) {
        report.per_pick[p].events++;
        report.per_pick[p].correct += hit;
      }
      auto& bin = report.per_strength_bin[report.bins.card_bin.at(ev.picked)];
      bin.events++;
      bin.correct += hit;
      report.draft_correct[d] += hit;
      report.draft_events[d]++;
    }
    report.n_correct += report.draft_correct[d];
    report.n_events += report.draft_events[d];
    if (report.draft_events[d] > 0) {
      draft_acc_sum += static_cast<double>(report.draft_correct[d]) /
                       static_cast<double>(report.draft_events[d]);
    }
  }
  if (report.n_events > 0) {
    report.overall_accuracy =
        static_cast<double>(report.n_correct) / static_cast<double>(report.n_events);
    report.draft_mean_accuracy = draft_acc_sum / static_cast<double>(selected.size());
  }
  return report;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error("percentile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Comparison compare_agents(const std::vector<EvalReport>& reports, const CompareOptions& options) {
  if (reports.size() < 2) throw Error("comparison needs at least two reports");
  for (const auto& r : reports) {
    if (r.corpus_id != reports.front().corpus_id ||
        r.draft_events.size() != reports.front().draft_events.size()) {
      throw Error("reports cover different corpora (" + reports.front().corpus_id + " vs " +
                  r.corpus_id + ")");
    }
  }
  if (options.resamples == 0) throw Error("resample count must be positive");
  const std::size_t drafts = reports.front().draft_events.size();
  if (drafts == 0) throw Error("reports cover an empty corpus");

  const std::size_t a = reports.size();
  std::vector<std::vector<double>> boot(a);
  std::vector<std::vector<std::vector<double>>> diffs(a, std::vector<std::vector<double>>(a));
  Rng rng(options.seed);
  std::vector<std::size_t> draw(drafts);
  std::vector<double> acc(a);
  for (std::size_t r = 0; r < options.resamples; ++r) {
    for (auto& d : draw) d = rng.below(drafts);
    for (std::size_t k = 0; k < a; ++k) {
      std::uint64_t c = 0, e = 0;
      for (std::size_t d : draw) {
        c += reports[k].draft_correct[d];
        e += reports[k].draft_events[d];
      }
      acc[k] = e == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(e);
      boot[k].push_back(acc[k]);
    }
    for (std::size_t i = 0; i < a; ++i) {
      for (std::size_t j = i + 1; j < a; ++j) diffs[i][j].push_back(acc[i] - acc[j]);
    }
  }

  const double alpha = 1.0 - options.confidence;
  Comparison out;
  out.resamples = options.resamples;
  out.confidence = options.confidence;
  for (std::size_t k = 0; k < a; ++k) {
    std::sort(boot[k].begin(), boot[k].end());
    out.ranked.push_back({reports[k].agent, reports[k].overall_accuracy,
                          percentile_sorted(boot[k], alpha / 2), percentile_sorted(boot[k], 1 - alpha / 2)});
  }
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = i + 1; j < a; ++j) {
      auto& v = diffs[i][j];
      std::sort(v.begin(), v.end());
      out.pairwise.push_back({reports[i].agent, reports[j].agent,
                              reports[i].overall_accuracy - reports[j].overall_accuracy,
                              percentile_sorted(v, alpha / 2), percentile_sorted(v, 1 - alpha / 2)});
    }
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const auto& x, const auto& y) { return x.accuracy > y.accuracy; });
  return out;
}

void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
  json per_pick = json::array();
  for (std::size_t p = 0; p < report.per_pick.size(); ++p) {
    per_pick.push_back({{"pick", p + 1},
                        {"accuracy", report.per_pick[p].accuracy()},
                        {"events", report.per_pick[p].events}});
  }
  json bins = json::array();
  for (std::size_t b = 0; b < report.per_strength_bin.size(); ++b) {
    bins.push_back({{"lower", report.bins.lower(b)},
                    {"upper", report.bins.upper(b)},
                    {"accuracy", report.per_strength_bin[b].accuracy()},
                    {"events", report.per_strength_bin[b].events},
                    {"cards", report.bins.population[b]}});
  }
  json j{{"agent", report.agent},
         {"corpus_id", report.corpus_id},
         {"seed", report.seed},
         {"n_events", report.n_events},
         {"n_drafts", report.draft_events.size()},
         {"overall_accuracy", report.overall_accuracy},
         {"draft_mean_accuracy", report.draft_mean_accuracy},
         {"per_pick", per_pick},
         {"per_strength_bin", bins}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_per_pick_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "pick,accuracy,correct,events\n";
  for (std::size_t p = 0; p < report.per_pick.size(); ++p) {
    const auto& c = report.per_pick[p];
    out << p + 1 << ',' << c.accuracy() << ',' << c.correct << ',' << c.events << '\n';
  }
}

void write_strength_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "lower,upper,accuracy,correct,events,cards\n";
  for (std::size_t b = 0; b < report.per_strength_bin.size(); ++b) {
    const auto& c = report.per_strength_bin[b];
    out << report.bins.lower(b) << ',' << report.bins.upper(b) << ',' << c.accuracy() << ','
        << c.correct << ',' << c.events << ',' << report.bins.population[b] << '\n';
  }
}

void write_comparison_csv(const Comparison& comparison, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "agent,accuracy,ci_low,ci_high\n";
  for (const auto& e : comparison.ranked) {
    out << e.agent << ',' << e.accuracy << ',' << e.ci_low << ',' << e.ci_high << '\n';
  }
}

std::string comparison_table(const Comparison& comparison) {
  std::ostringstream os;
  int width = 18;
  for (const auto& e : comparison.ranked) width = std::max(width, static_cast<int>(e.agent.size()) + 2);
  os << std::fixed << std::setprecision(2);
  os << std::left << std::setw(width) << "agent" << std::right << std::setw(10) << "acc %"
     << std::setw(18) << "95% CI" << '\n';
  for (const auto& e : comparison.ranked) {
    os << std::left << std::setw(width) << e.agent << std::right << std::setw(10) << 100 * e.accuracy
       << "    [" << std::setw(6) << 100 * e.ci_low << ", " << std::setw(6) << 100 * e.ci_high
       << "]\n";
  }
  for (const auto& d : comparison.pairwise) {
    os << d.first << " - " << d.second << ": " << 100 * d.difference << " [" << 100 * d.ci_low
       << ", " << 100 * d.ci_high << "]\n";
  }
  return os.str();
}

}  // namespace draftbots
