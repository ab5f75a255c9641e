#include <benchmark/benchmark.h>

#include <memory>

#include "draftbots/agents.hpp"
#include "draftbots/draft_engine.hpp"
#include "draftbots/nn.hpp"
#include "draftbots/simulate.hpp"
#include "draftbots/synergy.hpp"
#include "draftbots/training.hpp"

using namespace draftbots;

namespace {

std::shared_ptr<const CardSet> m19() {
  static const auto set = std::make_shared<const CardSet>(
      load_set(std::string(DRAFTBOTS_BENCH_DATA_DIR) + "/m19_synthetic.json"));
  return set;
}

std::vector<DraftLog> corpus(std::size_t pods) {
  DraftsimAgent bot(m19());
  std::vector<const Agent*> agents(kSeats, &bot);
  BotDraftOptions options;
  options.seat_kinds.fill(SeatKind::human);
  return simulate_drafts(*m19(), agents, pods, 7, 1, options);
}

void BM_GeneratePack(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(generate_pack(*m19(), rng));
}
BENCHMARK(BM_GeneratePack);

void BM_FullDraftDraftsim(benchmark::State& state) {
  DraftsimAgent bot(m19());
  std::vector<const Agent*> agents(kSeats, &bot);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_bot_draft(*m19(), agents, seed++));
}
BENCHMARK(BM_FullDraftDraftsim)->Unit(benchmark::kMillisecond);

void BM_DraftsimRank(benchmark::State& state) {
  const auto logs = corpus(1);
  const PickEvent& ev = logs[0].events[20];
  const Collection held = [&] {
    Collection c(m19()->size());
    for (int k = 0; k < 20; ++k) c.add(logs[0].events[static_cast<std::size_t>(k)].picked);
    return c;
  }();
  for (auto _ : state) benchmark::DoNotOptimize(draftsim_rank(ev.pack, held, ev.global_pick, *m19()));
}
BENCHMARK(BM_DraftsimRank);

void BM_BayesRank(benchmark::State& state) {
  const auto logs = corpus(20);
  const BayesModel model = train_bayes(logs, *m19());
  Collection held(m19()->size());
  for (int k = 0; k < 20; ++k) held.add(logs[0].events[static_cast<std::size_t>(k)].picked);
  const auto& pack = logs[1].events[20].pack;
  for (auto _ : state) benchmark::DoNotOptimize(bayes_rank(pack, held, 21, model));
}
BENCHMARK(BM_BayesRank);

void BM_BayesCounting(benchmark::State& state) {
  const auto logs = corpus(10);
  for (auto _ : state) benchmark::DoNotOptimize(count_pairs(logs, m19()->size(), {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(logs.size()));
}
BENCHMARK(BM_BayesCounting)->Unit(benchmark::kMillisecond);

void BM_NNetInfer(benchmark::State& state) {
  const auto S = m19()->size();
  const auto net = nn::Network<float>::he_uniform(nn::NetworkShape::for_set(S), 3);
  nn::Matrix<float> x(static_cast<std::size_t>(state.range(0)), S, 0.0f);
  for (std::size_t r = 0; r < x.rows; ++r) x.row(r)[r % S] = 1.0f;
  for (auto _ : state) benchmark::DoNotOptimize(net.infer(x));
}
BENCHMARK(BM_NNetInfer)->Arg(1)->Arg(256);

void BM_NNetTrainStep(benchmark::State& state) {
  const auto S = m19()->size();
  const auto shape = nn::NetworkShape::for_set(S);
  auto net = nn::Network<float>::he_uniform(shape, 3);
  nn::Adam<float> adam(shape, 1e-3);
  nn::Parameters<float> grads;
  Rng rng(4);
  nn::Matrix<float> x(256, S, 0.0f);
  std::vector<CardIndex> targets(256);
  for (std::size_t r = 0; r < 256; ++r) {
    for (int k = 0; k < 10; ++k) x.row(r)[rng.below(S)] += 1.0f;
    targets[r] = static_cast<CardIndex>(rng.below(S));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.loss_and_grad(x, targets, rng, grads));
    adam.step(net.params(), grads);
  }
}
BENCHMARK(BM_NNetTrainStep)->Unit(benchmark::kMillisecond);

void BM_Cooccurrence(benchmark::State& state) {
  const auto logs = corpus(10);
  for (auto _ : state) benchmark::DoNotOptimize(cooccurrence(logs, m19()->size()));
}
BENCHMARK(BM_Cooccurrence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
