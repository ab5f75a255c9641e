#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "draftbots/draft_engine.hpp"
#include "draftbots/draft_log.hpp"
#include "draftbots/error.hpp"
#include "line_reader.hpp"

namespace draftbots {

namespace {

// Column mapping of the Draftsim export. Adjust here if the public dump differs.
struct ExportColumns {
  static constexpr std::string_view draft_id = "draft_id";
  static constexpr std::string_view seat_kind = "seat_kind";  // optional, defaults to human
  static constexpr std::string_view pick_number = "pick_number";
  static constexpr std::string_view pack_cards = "pack_cards";
  static constexpr std::string_view picked = "picked";
  static constexpr char name_separator = '|';
};

std::vector<std::string> split_csv_row(std::string_view row, std::size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const char ch = row[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < row.size() && row[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_number) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ExportColumns::name_separator)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

struct RawRow {
  int pick = 0;
  std::vector<std::string> pack;
  std::string picked;
};

struct RawDraft {
  SeatKind seat_kind = SeatKind::human;
  std::vector<RawRow> rows;
};

template <typename NextLine>
ImportResult import_rows(NextLine&& next_line, const CardSet& set) {
  ImportResult result;
  std::string line;
  std::size_t line_number = 0;
  std::map<std::string_view, std::size_t> col;
  bool have_header = false;
  std::vector<std::string> order;
  std::map<std::string, RawDraft> drafts;
  std::set<std::string> unknown;

  auto resolve = [&](const std::string& name) -> CardIndex {
    auto idx = set.find(name);
    if (!idx) {
      unknown.insert(name);
      return 0;
    }
    return *idx;
  };

  while (next_line(line)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = split_csv_row(line, line_number);
    if (!have_header) {
      // keys are the static column names, so they outlive `fields`
      for (std::size_t i = 0; i < fields.size(); ++i) {
        for (auto key : {ExportColumns::draft_id, ExportColumns::seat_kind,
                         ExportColumns::pick_number, ExportColumns::pack_cards,
                         ExportColumns::picked}) {
          if (fields[i] == key) col[key] = i;
        }
      }
      for (auto required : {ExportColumns::draft_id, ExportColumns::pick_number,
                            ExportColumns::pack_cards, ExportColumns::picked}) {
        if (!col.contains(required)) {
          throw ParseError("line " + std::to_string(line_number) + ": missing column '" +
                           std::string(required) + "'");
        }
      }
      have_header = true;
      continue;
    }
    auto get = [&](std::string_view key) -> const std::string& {
      const std::size_t i = col.at(key);
      if (i >= fields.size()) {
        throw ParseError("line " + std::to_string(line_number) + ": missing field '" +
                         std::string(key) + "'");
      }
      return fields[i];
    };
    const std::string& id = get(ExportColumns::draft_id);
    auto [it, inserted] = drafts.try_emplace(id);
    if (inserted) order.push_back(id);
    if (col.contains(ExportColumns::seat_kind)) {
      const std::string& kind = get(ExportColumns::seat_kind);
      if (kind == "bot") it->second.seat_kind = SeatKind::bot;
    }
    RawRow row;
    try {
      row.pick = std::stoi(get(ExportColumns::pick_number));
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_number) + ": bad pick number");
    }
    row.pack = split_names(get(ExportColumns::pack_cards));
    row.picked = get(ExportColumns::picked);
    it->second.rows.push_back(std::move(row));
  }

  for (const std::string& id : order) {
    RawDraft& raw = drafts.at(id);
    std::sort(raw.rows.begin(), raw.rows.end(),
              [](const RawRow& a, const RawRow& b) { return a.pick < b.pick; });
    bool complete = raw.rows.size() == static_cast<std::size_t>(kPicksPerDraft);
    for (std::size_t k = 0; complete && k < raw.rows.size(); ++k) {
      complete = raw.rows[k].pick == static_cast<int>(k) + 1;
    }
    DraftLog log;
    log.draft_id = id;
    log.set_code = set.code();
    log.seat_kind = raw.seat_kind;
    for (const RawRow& row : raw.rows) {
      PickEvent ev;
      ev.global_pick = row.pick;
      for (const auto& name : row.pack) ev.pack.push_back(resolve(name));
      ev.picked = resolve(row.picked);
      log.events.push_back(std::move(ev));
    }
    if (!complete) {
      ++result.skipped_truncated;
      continue;
    }
    if (unknown.empty()) validate_log(log, set);
    result.logs.push_back(std::move(log));
  }

  if (!unknown.empty()) {
    std::string msg = "unknown card names:";
    for (const auto& n : unknown) msg += " '" + n + "'";
    throw ParseError(msg);
  }
  return result;
}

}  // namespace

ImportResult import_draftsim_export(const std::filesystem::path& path, const CardSet& set) {
  detail::LineReader reader(path);
  if (!reader.ok()) throw ParseError("cannot open export file " + path.string());
  return import_rows([&](std::string& line) { return reader.next(line); }, set);
}

ImportResult import_draftsim_export_text(std::string_view text, const CardSet& set) {
  std::istringstream in{std::string(text)};
  return import_rows(
      [&](std::string& line) {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      },
      set);
}

}  // namespace draftbots
