#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "draftbots/agents.hpp"
#include "draftbots/error.hpp"
#include "test_support.hpp"

using namespace draftbots;
using testing::make_card;

namespace {

std::shared_ptr<const CardSet> desk() {
  static auto set = std::make_shared<const CardSet>(load_set(testing::data_file("desk.json")));
  return set;
}

// Commitment fixture: pulls of 3 (red), 2 (green) and 1 (blue).
CardSet commit_set() {
  return CardSet("CMT", {
                            make_card("r3", Rarity::common, {0, 0, 0, 1, 0}, 5.0),
                            make_card("g2", Rarity::common, {0, 0, 0, 0, 1}, 4.0),
                            make_card("u1", Rarity::common, {0, 1, 0, 0, 0}, 3.0),
                            make_card("rg", Rarity::common, {0, 0, 0, 1, 1}, 3.0),
                            make_card("ru", Rarity::common, {0, 1, 0, 1, 0}, 3.0),
                            make_card("ub", Rarity::common, {0, 1, 1, 0, 0}, 3.0),
                            make_card("art", Rarity::common, {0, 0, 0, 0, 0}, 3.0),
                            make_card("wubr", Rarity::rare, {1, 1, 1, 1, 0}, 3.0),
                            make_card("uu", Rarity::common, {0, 2, 0, 0, 0}, 3.0),
                            make_card("2u", Rarity::common, {0, 1, 0, 0, 0}, 3.0),
                            make_card("rrg", Rarity::common, {0, 0, 0, 2, 1}, 3.0),
                            make_card("wwb", Rarity::common, {2, 0, 1, 0, 0}, 3.0),
                        });
}

Collection holding(const CardSet& set, std::initializer_list<const char*> names) {
  Collection c(set.size());
  for (const char* n : names) c.add(*set.find(n));
  return c;
}

const Card& named(const CardSet& set, const char* name) { return set[*set.find(name)]; }

}  // namespace

TEST_SUITE("agents") {

TEST_CASE("choose_card: highest score, ties to the lowest card index") {
  const std::vector<CardIndex> pack{7, 3, 5};
  CHECK(choose_card(pack, std::vector<double>{1.0, 2.0, 0.5}) == 3);
  CHECK(choose_card(pack, std::vector<double>{2.0, 2.0, 2.0}) == 3);
  CHECK(choose_card(pack, std::vector<double>{2.0, 1.0, 2.0}) == 5);
}

TEST_CASE("every agent: forced pick, chosen in pack, permutation invariance") {
  const auto set = desk();
  RandomAgent random;
  RaredraftAgent raredraft(set);
  DraftsimAgent draftsim(set);
  NoisyDraftsimAgent noisy(set, 1.0);
  const std::vector<const Agent*> agents{&random, &raredraft, &draftsim, &noisy};
  Rng gen(17);
  for (const Agent* agent : agents) {
    CAPTURE(agent->name());
    Collection empty(set->size());
    const std::vector<CardIndex> single{12};
    Rng r(1);
    CHECK(agent->rank(single, empty, 15, r).chosen == 12);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<CardIndex> pack;
      for (int k = 0; k < 10; ++k) pack.push_back(static_cast<CardIndex>(gen.below(37)));
      Collection coll(set->size());
      for (int k = 0; k < 12; ++k) coll.add(static_cast<CardIndex>(gen.below(37)));
      Rng r1(trial), r2(trial), r3(trial);
      const AgentRanking a = agent->rank(pack, coll, 13, r1);
      CHECK(a.scores.size() == pack.size());
      CHECK(std::find(pack.begin(), pack.end(), a.chosen) != pack.end());
      CHECK(agent->rank(pack, coll, 13, r2).chosen == a.chosen);
      std::vector<CardIndex> shuffled = pack;
      std::reverse(shuffled.begin(), shuffled.end());
      std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
      CHECK(agent->rank(shuffled, coll, 13, r3).chosen == a.chosen);
    }
  }
}

TEST_CASE("random: identical copies share a score and choices are uniform") {
  Collection empty(desk()->size());
  const std::vector<CardIndex> pack{4, 9, 4, 20};
  Rng rng(3);
  const auto r = random_rank(pack, empty, 1, rng);
  CHECK(r.scores[0] == r.scores[2]);
  std::map<CardIndex, int> freq;
  const std::vector<CardIndex> distinct{1, 2, 3, 4, 5};
  for (int i = 0; i < 10000; ++i) ++freq[random_rank(distinct, empty, 1, rng).chosen];
  for (CardIndex c : distinct) CHECK(std::abs(freq[c] - 2000) < 200);
}

TEST_CASE("raredraft: rarity first") {
  const auto set = desk();
  Collection empty(set->size());
  const CardIndex mythic = *set->find("Phoenix Tyrant");
  std::vector<CardIndex> pack = set->indices_of(Rarity::common);
  pack.resize(10);
  pack.push_back(mythic);
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    CHECK(raredraft_rank(pack, empty, 1, *set, rng).chosen == mythic);
  }
}

TEST_CASE("raredraft: prefers the collection's most common color") {
  const auto set = desk();
  Collection mostly_red(set->size());
  for (const char* n : {"Ember Pup", "Rock Hurler", "Ash Runner", "Dawn Sentry"}) {
    mostly_red.add(*set->find(n));
  }
  const std::vector<CardIndex> commons = set->indices_of(Rarity::common);
  Rng gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<CardIndex> pack;
    for (int k = 0; k < 6; ++k) pack.push_back(commons[gen.below(commons.size())]);
    const bool any_red = std::any_of(pack.begin(), pack.end(), [&](CardIndex c) { return (*set)[c].colors.has(3); });
    Rng rng(trial);
    const CardIndex chosen = raredraft_rank(pack, mostly_red, 5, *set, rng).chosen;
    if (any_red) CHECK((*set)[chosen].colors.has(3));
  }
}

TEST_CASE("raredraft: empty collection chooses uniformly among equal rarity") {
  const auto set = desk();
  Collection empty(set->size());
  std::vector<CardIndex> pack = set->indices_of(Rarity::common);
  pack.resize(4);
  std::map<CardIndex, int> freq;
  for (int seed = 0; seed < 4000; ++seed) {
    Rng rng(seed);
    ++freq[raredraft_rank(pack, empty, 1, *set, rng).chosen];
  }
  for (CardIndex c : pack) CHECK(std::abs(freq[c] - 1000) < 150);
}

TEST_CASE("draftsim: pull and commitment") {
  const CardSet set = commit_set();
  CHECK(card_pull(make_card("x", Rarity::common, {}, 3.6)) == doctest::Approx(1.6));
  CHECK(card_pull(make_card("x", Rarity::common, {}, 1.0)) == 0.0);
  Collection c = holding(set, {"r3", "g2", "u1", "rg"});
  c.add(*set.find("r3"));
  const ColorCommit cc = color_commit(c, set);
  CHECK(cc[3] == doctest::Approx(7.0));  // 3 + 3 + rg's 1
  CHECK(cc[4] == doctest::Approx(3.0));
  CHECK(cc[1] == doctest::Approx(1.0));
  CHECK(cc[0] == 0.0);
  CHECK(cc[2] == 0.0);
}

TEST_CASE("draftsim: empty collection ranks by strength") {
  const auto set = desk();
  Collection empty(set->size());
  std::vector<CardIndex> pack{0, 5, 20, 30, 35, 28};
  const auto r = draftsim_rank(pack, empty, 1, *set);
  for (std::size_t k = 0; k < pack.size(); ++k) {
    const Card& card = (*set)[pack[k]];
    const double expected = card.colors.num_colors() == 1 || card.colors.colorless()
                                ? card.strength
                                : card.strength - 0.6;
    CHECK(r.scores[k] == doctest::Approx(expected));
  }
  CHECK(r.chosen == *set->find("Phoenix Tyrant"));
}

TEST_CASE("draftsim: speculation bonuses") {
  const CardSet set = commit_set();
  ColorCommit red4{};
  red4[3] = 4.0;
  CHECK(draftsim_color_bias(named(set, "r3"), red4, 5) == doctest::Approx(0.9));
  DraftsimParams literal;
  literal.literal_max_bonus = true;
  CHECK(draftsim_color_bias(named(set, "r3"), red4, 5, literal) == doctest::Approx(0.257 * 4.0));
  ColorCommit small{};
  small[3] = 1.0;
  CHECK(draftsim_color_bias(named(set, "r3"), small, 5, literal) == doctest::Approx(0.9));

  // red 3, green 2, blue 1: nobody past 3.5 yet
  const ColorCommit cc{0.0, 1.0, 0.0, 3.0, 2.0};
  CHECK_FALSE(draftsim_committed(cc, 10));
  CHECK(draftsim_color_bias(named(set, "r3"), cc, 10) == doctest::Approx(0.771));
  CHECK(draftsim_color_bias(named(set, "u1"), cc, 10) == doctest::Approx(0.257));
  CHECK(draftsim_color_bias(named(set, "art"), cc, 10) == doctest::Approx(0.771));
  CHECK(draftsim_color_bias(named(set, "rg"), cc, 10) == doctest::Approx(0.771 + 0.514 - 0.6));
  CHECK(draftsim_color_bias(named(set, "ru"), cc, 10) == doctest::Approx(0.771 - 0.257 - 0.6));
  CHECK(draftsim_color_bias(named(set, "ub"), cc, 10) == doctest::Approx(-0.257 - 0.0 - 0.6));
  CHECK(draftsim_color_bias(named(set, "wubr"), cc, 10) == 0.0);
}

TEST_CASE("draftsim: committed phase") {
  const CardSet set = commit_set();
  const ColorCommit rg{0.0, 1.0, 0.0, 4.0, 3.6};
  CHECK(draftsim_committed(rg, 2));
  CHECK(primary_colors(rg) == std::array<int, 2>{3, 4});
  CHECK(draftsim_color_bias(named(set, "uu"), rg, 20) == doctest::Approx(-1.0));
  CHECK(draftsim_color_bias(named(set, "2u"), rg, 20) == doctest::Approx(0.0));
  CHECK(draftsim_color_bias(named(set, "rg"), rg, 20) == doctest::Approx(2.0));
  CHECK(draftsim_color_bias(named(set, "rrg"), rg, 20) == doctest::Approx(2.0));
  CHECK(draftsim_color_bias(named(set, "art"), rg, 20) == doctest::Approx(2.0));
  CHECK(draftsim_color_bias(named(set, "wwb"), rg, 20) == doctest::Approx(-2.0));
  CHECK(draftsim_color_bias(named(set, "wubr"), rg, 20) == doctest::Approx(-2.0));
}

TEST_CASE("draftsim: phase switch rules") {
  const ColorCommit zero{};
  CHECK_FALSE(draftsim_committed(zero, 18));
  CHECK(draftsim_committed(zero, 19));
  CHECK(primary_colors(zero) == std::array<int, 2>{0, 1});
  const ColorCommit edge{3.5, 3.5, 0, 0, 0};
  CHECK_FALSE(draftsim_committed(edge, 18));
  const ColorCommit one{5.0, 3.0, 0, 0, 0};
  CHECK_FALSE(draftsim_committed(one, 18));
  const ColorCommit tie{0.0, 2.0, 2.0, 2.0, 1.0};
  CHECK(primary_colors(tie) == std::array<int, 2>{1, 2});
}

TEST_CASE("draftsim: adding an off-color card never raises a mono card's speculation bias") {
  const auto set = desk();
  Rng gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    Collection c(set->size());
    for (int k = 0; k < 3; ++k) c.add(static_cast<CardIndex>(gen.below(37)));
    const Card& x = (*set)[static_cast<CardIndex>(gen.below(20))];
    const Card& y = (*set)[static_cast<CardIndex>(gen.below(37))];
    bool shares = false;
    for (int col = 0; col < 5; ++col) shares = shares || (x.colors.has(col) && y.colors.has(col));
    if (shares) continue;
    const ColorCommit before = color_commit(c, *set);
    const ColorCommit after = color_commit(collection_add(c, y.index), *set);
    if (draftsim_committed(after, 4)) continue;
    CHECK(draftsim_color_bias(x, after, 4) <= draftsim_color_bias(x, before, 4));
  }
}

TEST_CASE("bayes_rank uses first-pick scores at pick 1 and Q.c afterwards") {
  const std::size_t S = 5;
  BayesCounts counts(S);
  Rng gen(8);
  for (CardIndex i = 0; i < S; ++i) {
    for (CardIndex j = 0; j < S; ++j) {
      if (i == j) continue;
      counts.m[counts.at(i, j)] = static_cast<std::uint32_t>(5 + gen.below(20));
      counts.m_gt[counts.at(i, j)] = static_cast<std::uint32_t>(gen.below(5));
      counts.n[counts.at(i, j)] = static_cast<std::uint32_t>(5 + gen.below(20));
      counts.n_to[counts.at(i, j)] = static_cast<std::uint32_t>(gen.below(5));
    }
  }
  const BayesModel model = BayesModel::from_counts("TOY", counts);
  const std::vector<CardIndex> pack{0, 2, 4};

  Collection single(S);
  single.add(3);
  auto r = bayes_rank(pack, single, 2, model);
  for (std::size_t k = 0; k < pack.size(); ++k) CHECK(r.scores[k] == model.q_at(pack[k], 3));

  Collection empty(S);
  r = bayes_rank(pack, empty, 1, model);
  for (std::size_t k = 0; k < pack.size(); ++k) {
    CHECK(r.scores[k] == model.first_pick_scores[pack[k]]);
  }

  Collection c1(S), c2(S), both(S);
  for (CardIndex c : {1u, 1u, 3u}) {
    c1.add(c);
    both.add(c);
  }
  for (CardIndex c : {0u, 3u}) {
    c2.add(c);
    both.add(c);
  }
  const auto s1 = bayes_rank(pack, c1, 9, model).scores;
  const auto s2 = bayes_rank(pack, c2, 9, model).scores;
  const auto s12 = bayes_rank(pack, both, 9, model).scores;
  for (std::size_t k = 0; k < pack.size(); ++k) CHECK(s12[k] == doctest::Approx(s1[k] + s2[k]).epsilon(1e-12));

  Collection wrong(S + 1);
  CHECK_THROWS_AS(bayes_rank(pack, wrong, 2, model), Error);
  const std::vector<CardIndex> outside{0, 7};
  CHECK_THROWS_AS(bayes_rank(outside, empty, 2, model), Error);
}

TEST_CASE("nnet_rank masks the network output to the pack") {
  const auto set = desk();
  NNetModel zero{"DESK", nn::Network<float>(nn::NetworkShape::for_set(set->size()))};
  Collection empty(set->size());
  const std::vector<CardIndex> pack{17, 9, 30, 9};
  const auto r = nnet_rank(pack, empty, 1, zero);
  CHECK(r.chosen == 9);
  for (double s : r.scores) CHECK(s == 0.0);

  NNetModel trained{"DESK", nn::Network<float>::he_uniform(nn::NetworkShape::for_set(set->size()), 4)};
  Collection c(set->size());
  c.add(3);
  c.add(8);
  const auto t = nnet_rank(pack, c, 3, trained);
  CHECK(t.scores[1] == t.scores[3]);
  const auto y = trained.network.infer_one(std::vector<float>(c.counts().begin(), c.counts().end()));
  for (std::size_t k = 0; k < pack.size(); ++k) CHECK(t.scores[k] == doctest::Approx(y[pack[k]]));
  std::vector<double> scaled = t.scores;
  for (auto& s : scaled) s *= 3.5;
  CHECK(choose_card(pack, scaled) == t.chosen);
  const std::vector<CardIndex> single{30};
  CHECK(nnet_rank(single, c, 15, trained).chosen == 30);

  Collection wrong(set->size() + 2);
  CHECK_THROWS_AS(nnet_rank(pack, wrong, 2, trained), Error);
}

}
