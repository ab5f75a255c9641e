#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "draftbots/draft_log.hpp"
#include "test_support.hpp"

#ifdef DRAFTBOTS_CLI_PATH

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(DRAFTBOTS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string desk() { return testing::data_file("desk.json").string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
  CHECK(run("--help") == 0);
  CHECK(run("frobnicate") == 2);
  CHECK(run("simulate --set " + desk() + " --agents draftsim --no-such-flag") == 2);
  CHECK(run("simulate --agents draftsim") == 2);
}

TEST_CASE("pipeline errors exit with 1") {
  testing::TempDir dir;
  CHECK(run("simulate --set " + desk() + " --agents draftsim --drafts 0 --out " +
            (dir / "x.jsonl").string()) == 1);
  CHECK(run("simulate --set " + desk() + " --agents wizard --drafts 1 --out " +
            (dir / "x.jsonl").string()) == 1);
  CHECK(run("train-bayes --train " + (dir / "missing.jsonl").string() + " --set " + desk() +
            " --out " + (dir / "m.bayes").string()) == 1);
}

TEST_CASE("simulate, split, train and eval end to end") {
  testing::TempDir dir;
  const auto corpus = (dir / "c.jsonl").string();
  REQUIRE(run("simulate --set " + desk() + " --agents noisy-draftsim:0.25 --drafts 2 --seed 3 --human-seats all --out " +
              corpus) == 0);
  const auto file = draftbots::read_logs(corpus);
  CHECK(file.logs.size() == 16);

  // 10 logs split 8/2
  std::vector<draftbots::DraftLog> ten(file.logs.begin(), file.logs.begin() + 10);
  const auto small = (dir / "ten.jsonl").string();
  draftbots::write_logs(ten, small, file.header);
  REQUIRE(run("split --in " + small + " --ratio 0.8 --seed 1 --train-out " + (dir / "tr.jsonl").string() +
              " --test-out " + (dir / "te.jsonl").string()) == 0);
  CHECK(draftbots::read_logs(dir / "tr.jsonl").logs.size() == 8);
  CHECK(draftbots::read_logs(dir / "te.jsonl").logs.size() == 2);

  REQUIRE(run("train-bayes --train " + corpus + " --set " + desk() + " --out " +
              (dir / "m.bayes").string()) == 0);
  REQUIRE(run("eval --test " + corpus + " --set " + desk() + " --agent random --agent bayes:" +
              (dir / "m.bayes").string() + " --report " + (dir / "rep").string()) == 0);
  CHECK(std::filesystem::exists(dir / "rep" / "comparison.csv"));
  CHECK(run("eval --test " + corpus + " --set " + desk() + " --agent random --min-accuracy 0.99 --report " +
            (dir / "rep2").string()) == 1);
}

}

#endif
