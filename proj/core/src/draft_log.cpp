#include "draftbots/draft_log.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "draftbots/draft_engine.hpp"
#include "draftbots/error.hpp"
#include "draftbots/random.hpp"
#include "json.hpp"
#include "line_reader.hpp"

namespace draftbots {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "draftbots-log";
constexpr int kFormatVersion = 1;

SeatKind parse_seat_kind(const std::string& s, std::size_t line_number) {
  if (s == "human") return SeatKind::human;
  if (s == "bot") return SeatKind::bot;
  throw ParseError("line " + std::to_string(line_number) + ": unknown seat_kind '" + s + "'");
}

std::string where(const DraftLog& log, int pick) {
  return "draft " + log.draft_id + ", pick " + std::to_string(pick);
}

}  // namespace

std::string_view to_string(SeatKind kind) { return kind == SeatKind::human ? "human" : "bot"; }

void replay(const DraftLog& log, std::size_t set_size,
            const std::function<void(const PickEvent&, const Collection&)>& fn) {
  Collection collection(set_size);
  for (const PickEvent& ev : log.events) {
    fn(ev, collection);
    collection.add(ev.picked);
  }
}

Collection final_collection(const DraftLog& log, std::size_t set_size) {
  Collection collection(set_size);
  for (const PickEvent& ev : log.events) collection.add(ev.picked);
  return collection;
}

void validate_log(const DraftLog& log, const CardSet& set) {
  if (log.set_code != set.code()) {
    throw ValidationError("draft " + log.draft_id + ": set code '" + log.set_code +
                          "' does not match set '" + set.code() + "'");
  }
  if (log.events.size() != static_cast<std::size_t>(kPicksPerDraft)) {
    throw ValidationError("draft " + log.draft_id + ": expected " +
                          std::to_string(kPicksPerDraft) + " events, got " +
                          std::to_string(log.events.size()));
  }
  for (std::size_t k = 0; k < log.events.size(); ++k) {
    const PickEvent& ev = log.events[k];
    const int expected_pick = static_cast<int>(k) + 1;
    if (ev.global_pick != expected_pick) {
      throw ValidationError(where(log, expected_pick) + ": event numbered " +
                            std::to_string(ev.global_pick));
    }
    const auto expected_size = static_cast<std::size_t>(pack_size_at(expected_pick));
    if (ev.pack.size() != expected_size) {
      throw ValidationError(where(log, expected_pick) + ": pack has " +
                            std::to_string(ev.pack.size()) + " cards, expected " +
                            std::to_string(expected_size));
    }
    for (CardIndex c : ev.pack) {
      if (c >= set.size()) {
        throw ValidationError(where(log, expected_pick) + ": card index " + std::to_string(c) +
                              " outside set");
      }
    }
    if (std::find(ev.pack.begin(), ev.pack.end(), ev.picked) == ev.pack.end()) {
      throw ValidationError(where(log, expected_pick) + ": picked card " +
                            std::to_string(ev.picked) + " is not in the pack");
    }
  }
}

std::string serialize_log(const DraftLog& log) {
  json picks = json::array();
  for (const PickEvent& ev : log.events) {
    picks.push_back({{"pack", ev.pack}, {"pick", ev.picked}});
  }
  json j{{"draft_id", log.draft_id},
         {"seat_kind", std::string(to_string(log.seat_kind))},
         {"picks", std::move(picks)}};
  return j.dump();
}

DraftLog parse_log_line(std::string_view line, std::size_t line_number) {
  const std::string at = "line " + std::to_string(line_number) + ": ";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(at + "invalid JSON (" + e.what() + ")");
  }
  try {
    if (!j.is_object()) throw ParseError(at + "record is not an object");
    DraftLog log;
    log.draft_id = j.at("draft_id").get<std::string>();
    log.seat_kind = parse_seat_kind(j.at("seat_kind").get<std::string>(), line_number);
    const json& picks = j.at("picks");
    if (!picks.is_array()) throw ParseError(at + "'picks' must be an array");
    int n = 0;
    for (const json& p : picks) {
      PickEvent ev;
      ev.global_pick = ++n;
      ev.pack = p.at("pack").get<std::vector<CardIndex>>();
      ev.picked = p.at("pick").get<CardIndex>();
      log.events.push_back(std::move(ev));
    }
    return log;
  } catch (const json::exception& e) {
    throw ParseError(at + "malformed draft record (" + e.what() + ")");
  }
}

std::string serialize_header(const LogFileHeader& header) {
  json h{{"type", "header"},
         {"format", kFormatName},
         {"version", kFormatVersion},
         {"set_code", header.set_code}};
  if (header.seed) h["seed"] = *header.seed;
  return h.dump();
}

void write_logs(const std::vector<DraftLog>& logs, const std::filesystem::path& path,
                const LogFileHeader& header) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << serialize_header(header) << '\n';
  for (const DraftLog& log : logs) {
    if (log.set_code != header.set_code) {
      throw ValidationError("draft " + log.draft_id + ": set code '" + log.set_code +
                            "' differs from file set '" + header.set_code + "'");
    }
    out << serialize_log(log) << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

LogFile read_logs(const std::filesystem::path& path) {
  detail::LineReader reader(path);
  if (!reader.ok()) throw ParseError("cannot open log file " + path.string());
  LogFile file;
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  while (reader.next(line)) {
    ++line_number;
    if (line.empty()) continue;
    if (!have_header) {
      json h;
      try {
        h = json::parse(line);
        if (h.at("type") != "header" || h.at("format") != kFormatName) {
          throw ParseError("line " + std::to_string(line_number) + ": missing header record");
        }
        if (h.at("version").get<int>() != kFormatVersion) {
          throw ParseError("line " + std::to_string(line_number) + ": unsupported log version " +
                           h.at("version").dump());
        }
        file.header.set_code = h.at("set_code").get<std::string>();
        if (h.contains("seed")) file.header.seed = h["seed"].get<std::uint64_t>();
      } catch (const json::exception& e) {
        throw ParseError("line " + std::to_string(line_number) + ": bad header (" + e.what() + ")");
      }
      have_header = true;
      continue;
    }
    DraftLog log = parse_log_line(line, line_number);
    log.set_code = file.header.set_code;
    file.logs.push_back(std::move(log));
  }
  if (!have_header) throw ParseError(path.string() + ": empty log file (no header record)");
  return file;
}

LogFile read_logs(const std::filesystem::path& path, const CardSet& set) {
  LogFile file = read_logs(path);
  for (const DraftLog& log : file.logs) validate_log(log, set);
  return file;
}

std::pair<std::vector<DraftLog>, std::vector<DraftLog>> split_dataset(
    const std::vector<DraftLog>& logs, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie in (0,1)");
  }
  if (logs.empty()) throw Error("cannot split an empty corpus");

  // distinct draft ids in first-seen order
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> slot;
  for (const DraftLog& log : logs) {
    if (slot.emplace(log.draft_id, ids.size()).second) ids.push_back(log.draft_id);
  }
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng.engine());

  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(ids.size())));
  std::vector<bool> in_train(ids.size(), false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;

  std::pair<std::vector<DraftLog>, std::vector<DraftLog>> out;
  for (const DraftLog& log : logs) {
    (in_train[slot.at(log.draft_id)] ? out.first : out.second).push_back(log);
  }
  return out;
}

std::vector<DraftLog> human_logs(const std::vector<DraftLog>& logs) {
  std::vector<DraftLog> out;
  std::copy_if(logs.begin(), logs.end(), std::back_inserter(out),
               [](const DraftLog& l) { return l.seat_kind == SeatKind::human; });
  return out;
}

}  // namespace draftbots
