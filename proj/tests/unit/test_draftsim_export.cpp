#include <fstream>
#include <sstream>

#include "doctest.h"
#include "draftbots/agents.hpp"
#include "draftbots/draft_log.hpp"
#include "draftbots/error.hpp"
#include "draftbots/simulate.hpp"
#include "test_support.hpp"

using namespace draftbots;

namespace {

const CardSet& desk() {
  static const CardSet set = load_set(testing::data_file("desk.json"));
  return set;
}

// Hand-rolled export writer: the reverse of the documented column mapping.
std::string to_export(const std::vector<DraftLog>& logs, bool reverse_rows = false) {
  std::ostringstream os;
  os << "draft_id,seat_kind,pick_number,pack_cards,picked\n";
  for (const DraftLog& log : logs) {
    std::vector<std::string> rows;
    for (const PickEvent& ev : log.events) {
      std::ostringstream r;
      r << log.draft_id << ',' << (log.seat_kind == SeatKind::human ? "human" : "bot") << ','
        << ev.global_pick << ",\"";
      for (std::size_t k = 0; k < ev.pack.size(); ++k) {
        if (k) r << '|';
        r << desk()[ev.pack[k]].name;
      }
      r << "\",\"" << desk()[ev.picked].name << "\"\n";
      rows.push_back(r.str());
    }
    if (reverse_rows) std::reverse(rows.begin(), rows.end());
    for (const auto& r : rows) os << r;
  }
  return os.str();
}

std::vector<DraftLog> sample_logs() {
  static const auto set = std::make_shared<const CardSet>(desk());
  DraftsimAgent agent(set);
  std::vector<const Agent*> agents(kSeats, &agent);
  BotDraftOptions options;
  options.seat_kinds[0] = SeatKind::human;
  auto logs = run_bot_draft(*set, agents, 31, options);
  logs.resize(3);
  return logs;
}

}  // namespace

TEST_SUITE("draftsim_export") {

TEST_CASE("a hand-written export of known logs imports back unchanged") {
  const auto logs = sample_logs();
  const ImportResult r = import_draftsim_export_text(to_export(logs), desk());
  CHECK(r.skipped_truncated == 0);
  CHECK(r.logs == logs);
}

TEST_CASE("row order inside a draft does not matter") {
  const auto logs = sample_logs();
  CHECK(import_draftsim_export_text(to_export(logs, true), desk()).logs == logs);
}

TEST_CASE("file import matches text import") {
  testing::TempDir dir;
  const auto logs = sample_logs();
  std::ofstream(dir / "export.csv") << to_export(logs);
  CHECK(import_draftsim_export(dir / "export.csv", desk()).logs == logs);
  CHECK_THROWS_AS(import_draftsim_export(dir / "none.csv", desk()), ParseError);
}

TEST_CASE("unknown card names are listed together") {
  std::string text = to_export(sample_logs());
  const auto a = text.find("Dawn Sentry");
  const auto b = text.find("Moss Elk");
  REQUIRE(a != std::string::npos);
  REQUIRE(b != std::string::npos);
  text.replace(text.find("Moss Elk"), 8, "Llanowar Elves");
  text.replace(text.find("Dawn Sentry"), 11, "Shivan Dragon");
  CHECK_THROWS_WITH_AS(import_draftsim_export_text(text, desk()),
                       doctest::Contains("Llanowar Elves"), ParseError);
  CHECK_THROWS_WITH_AS(import_draftsim_export_text(text, desk()),
                       doctest::Contains("Shivan Dragon"), ParseError);
}

TEST_CASE("truncated drafts are skipped and counted") {
  const auto logs = sample_logs();
  std::string text = to_export(logs);
  // drop the last row (pick 45 of the last draft)
  text.pop_back();
  text.erase(text.rfind('\n') + 1);
  const ImportResult r = import_draftsim_export_text(text, desk());
  CHECK(r.skipped_truncated == 1);
  CHECK(r.logs.size() == 2);
}

TEST_CASE("empty input gives zero logs") {
  const ImportResult r = import_draftsim_export_text("", desk());
  CHECK(r.logs.empty());
  CHECK(r.skipped_truncated == 0);
}

TEST_CASE("missing required column") {
  CHECK_THROWS_AS(import_draftsim_export_text("draft_id,pick_number,picked\n", desk()), ParseError);
}

TEST_CASE("seat_kind column is optional and defaults to human") {
  auto logs = sample_logs();
  std::istringstream in(to_export(logs));
  std::string line, text;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    text += line.substr(0, a) + line.substr(b) + "\n";
  }
  const ImportResult r = import_draftsim_export_text(text, desk());
  REQUIRE(r.logs.size() == logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    CHECK(r.logs[i].seat_kind == SeatKind::human);
    CHECK(r.logs[i].events == logs[i].events);
  }
}

TEST_CASE("complete drafts that break the rules fail validation") {
  auto logs = sample_logs();
  logs.resize(1);
  auto& ev = logs[0].events[3];
  CardIndex outside = 0;
  while (std::find(ev.pack.begin(), ev.pack.end(), outside) != ev.pack.end()) ++outside;
  ev.picked = outside;
  CHECK_THROWS_AS(import_draftsim_export_text(to_export(logs), desk()), ValidationError);
}

}
