#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "draftbots/card_set.hpp"

namespace draftbots {

enum class SeatKind { human, bot };

std::string_view to_string(SeatKind kind);

/// One observed decision. The collection before the pick is not stored; it is
/// the running sum of earlier picks in the same log (see replay()).
struct PickEvent {
  int global_pick = 0;
  std::vector<CardIndex> pack;
  CardIndex picked = 0;

  friend bool operator==(const PickEvent&, const PickEvent&) = default;
};

struct DraftLog {
  std::string draft_id;
  std::string set_code;
  SeatKind seat_kind = SeatKind::bot;
  std::vector<PickEvent> events;

  friend bool operator==(const DraftLog&, const DraftLog&) = default;
};

/// Walks the events of a log, handing each one to `fn` together with the
/// collection held before that pick.
void replay(const DraftLog& log, std::size_t set_size,
            const std::function<void(const PickEvent&, const Collection&)>& fn);

/// Final 45-card collection of a log.
Collection final_collection(const DraftLog& log, std::size_t set_size);

/// Throws ValidationError citing draft_id and pick on the first broken invariant.
void validate_log(const DraftLog& log, const CardSet& set);

/// Optional metadata carried by the header record of a log file.
struct LogFileHeader {
  std::string set_code;
  std::optional<std::uint64_t> seed;
};

struct LogFile {
  LogFileHeader header;
  std::vector<DraftLog> logs;
};

/// One JSON object per line: a header record, then one DraftLog per line.
std::string serialize_log(const DraftLog& log);
std::string serialize_header(const LogFileHeader& header);
DraftLog parse_log_line(std::string_view line, std::size_t line_number = 0);

void write_logs(const std::vector<DraftLog>& logs, const std::filesystem::path& path,
                const LogFileHeader& header);
/// Reads a JSONL log file (gzip when the path ends in ".gz"). Throws ParseError
/// with the line number on malformed input.
LogFile read_logs(const std::filesystem::path& path);
/// As above, then validates every log against the set.
LogFile read_logs(const std::filesystem::path& path, const CardSet& set);

/// Disjoint partition by draft_id; the train side gets round(fraction * n) drafts.
std::pair<std::vector<DraftLog>, std::vector<DraftLog>> split_dataset(
    const std::vector<DraftLog>& logs, double train_fraction, std::uint64_t seed);

/// Keeps only logs recorded for human seats.
std::vector<DraftLog> human_logs(const std::vector<DraftLog>& logs);

struct ImportResult {
  std::vector<DraftLog> logs;
  std::size_t skipped_truncated = 0;
};

/// Converts a Draftsim-style CSV export into canonical logs. The column
/// mapping lives in one place (see docs/draftsim_export.md). Throws ParseError
/// listing every card name that does not resolve against the set.
ImportResult import_draftsim_export(const std::filesystem::path& path, const CardSet& set);
ImportResult import_draftsim_export_text(std::string_view text, const CardSet& set);

}  // namespace draftbots
