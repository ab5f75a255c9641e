#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "draftbots/agent_spec.hpp"
#include "draftbots/draft_log.hpp"
#include "draftbots/error.hpp"
#include "draftbots/evaluation.hpp"
#include "draftbots/model_io.hpp"
#include "draftbots/service.hpp"
#include "draftbots/simulate.hpp"
#include "draftbots/synergy.hpp"
#include "draftbots/training.hpp"

namespace fs = std::filesystem;
using namespace draftbots;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::shared_ptr<const CardSet> load_shared_set(const std::string& path) {
  return std::make_shared<const CardSet>(load_set(path));
}

std::string file_stem_for(const std::string& spec) {
  std::string out;
  for (char c : spec) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

struct SimulateArgs {
  std::string set, agents, out, human_seats, prefix = "sim";
  std::size_t drafts = 0;
  std::uint64_t seed = 1;
  int jobs = 1;
};

int run_simulate(const SimulateArgs& a) {
  if (a.drafts == 0) throw Error("--drafts must be at least 1");
  auto set = load_shared_set(a.set);
  auto specs = split_list(a.agents);
  if (specs.size() == 1) specs.assign(kSeats, specs.front());
  if (specs.size() != static_cast<std::size_t>(kSeats)) {
    throw Error("--agents needs 1 or 8 specs, got " + std::to_string(specs.size()));
  }
  ModelCache cache;
  std::vector<std::unique_ptr<Agent>> owned;
  std::vector<const Agent*> agents;
  for (const auto& s : specs) {
    owned.push_back(make_agent(parse_agent_spec(s), set, cache));
    agents.push_back(owned.back().get());
  }
  BotDraftOptions options;
  options.id_prefix = a.prefix;
  if (a.human_seats == "all") {
    options.seat_kinds.fill(SeatKind::human);
  } else {
    for (const auto& s : split_list(a.human_seats)) {
      const int seat = std::stoi(s);
      if (seat < 0 || seat >= kSeats) throw Error("--human-seats entry out of range: " + s);
      options.seat_kinds[static_cast<std::size_t>(seat)] = SeatKind::human;
    }
  }
  const auto logs = simulate_drafts(*set, agents, a.drafts, a.seed, a.jobs, options);
  write_logs(logs, a.out, {set->code(), a.seed});
  std::cout << "wrote " << logs.size() << " logs (" << a.drafts << " drafts, seed " << a.seed
            << ") to " << a.out << '\n';
  return 0;
}

int run_import(const std::string& in, const std::string& set_path, const std::string& out) {
  const CardSet set = load_set(set_path);
  const ImportResult r = import_draftsim_export(in, set);
  write_logs(r.logs, out, {set.code(), std::nullopt});
  std::cout << "imported " << r.logs.size() << " drafts";
  if (r.skipped_truncated > 0) std::cout << ", skipped " << r.skipped_truncated << " truncated";
  std::cout << '\n';
  return 0;
}

int run_split(const std::string& in, double ratio, std::uint64_t seed, std::string train_out,
              std::string test_out) {
  const LogFile file = read_logs(in);
  auto [train, test] = split_dataset(file.logs, ratio, seed);
  std::string base = in;
  for (const char* ext : {".gz", ".jsonl"}) {
    if (base.size() > std::strlen(ext) && base.ends_with(ext)) base.resize(base.size() - std::strlen(ext));
  }
  if (train_out.empty()) train_out = base + ".train.jsonl";
  if (test_out.empty()) test_out = base + ".test.jsonl";
  write_logs(train, train_out, {file.header.set_code, seed});
  write_logs(test, test_out, {file.header.set_code, seed});
  std::cout << "train " << train.size() << " -> " << train_out << "\ntest " << test.size() << " -> "
            << test_out << '\n';
  return 0;
}

int run_train_bayes(const std::string& train, const std::string& set_path, const std::string& out,
                    bool all_seats) {
  const CardSet set = load_set(set_path);
  const LogFile file = read_logs(train, set);
  BayesTrainOptions options;
  options.human_only = !all_seats;
  const BayesModel model = train_bayes(file.logs, set, options);
  save_model(model, out);
  std::cout << "saved bayes model to " << out << '\n';
  return 0;
}

struct TrainNNetArgs {
  std::string train, set, config, out, metrics;
  int cv = 0;
  bool all_seats = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
};

int run_train_nnet(const TrainNNetArgs& a) {
  const CardSet set = load_set(a.set);
  TrainConfig config = a.config.empty() ? TrainConfig{} : load_train_config(a.config);
  if (a.cv > 0) {
    config.cross_validate = true;
    config.folds = a.cv;
  }
  if (a.all_seats) config.human_only = false;
  if (a.seed) config.seed = *a.seed;
  if (a.epochs) config.epochs = *a.epochs;
  const LogFile file = read_logs(a.train, set);
  const NNetTrainResult result = train_nnet(file.logs, set, config, [](const EpochMetrics& m) {
    std::cerr << (m.fold == 0 ? std::string("final") : "fold " + std::to_string(m.fold)) << " epoch "
              << m.epoch << " loss " << m.loss << " acc " << m.accuracy << '\n';
  });
  save_model(result.model, a.out);
  write_metrics_csv(result.metrics, a.metrics.empty() ? a.out + ".metrics.csv" : a.metrics);
  for (std::size_t f = 0; f < result.fold_accuracy.size(); ++f) {
    std::cout << "fold " << f + 1 << " held-out accuracy " << result.fold_accuracy[f] << '\n';
  }
  std::cout << "saved nnet model to " << a.out << " (seed " << config.seed << ")\n";
  return 0;
}

struct EvalArgs {
  std::string test, set, report, models;
  std::vector<std::string> agents;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool human_only = false;
  std::optional<double> min_accuracy;
  std::size_t resamples = 1000;
};

int run_eval(const EvalArgs& a) {
  auto set = load_shared_set(a.set);
  const LogFile file = read_logs(a.test, *set);
  ModelCache cache(a.models);
  std::vector<EvalReport> reports;
  for (const auto& text : a.agents) {
    const AgentSpec spec = parse_agent_spec(text);
    const auto agent = make_agent(spec, set, cache);
    EvalOptions options;
    options.seed = spec.seed != 0 ? spec.seed : a.seed;
    options.jobs = a.jobs;
    options.human_only = a.human_only;
    EvalReport report = evaluate(*agent, file.logs, *set, options);
    report.agent = text;
    std::cout << std::left << std::setw(24) << text << std::right << std::fixed << std::setprecision(2)
              << 100.0 * report.overall_accuracy << "%  (" << report.n_correct << "/"
              << report.n_events << ")\n";
    if (!a.report.empty()) {
      fs::create_directories(a.report);
      const std::string stem = file_stem_for(text);
      write_report_json(report, fs::path(a.report) / (stem + ".json"));
      write_per_pick_csv(report, fs::path(a.report) / (stem + "_per_pick.csv"));
      write_strength_csv(report, fs::path(a.report) / (stem + "_strength.csv"));
    }
    reports.push_back(std::move(report));
  }
  if (reports.size() >= 2) {
    CompareOptions options;
    options.resamples = a.resamples;
    if (a.seed != 0) options.seed = a.seed;
    const Comparison cmp = compare_agents(reports, options);
    std::cout << '\n' << comparison_table(cmp);
    if (!a.report.empty()) write_comparison_csv(cmp, fs::path(a.report) / "comparison.csv");
  }
  if (a.min_accuracy) {
    bool ok = true;
    for (const auto& r : reports) {
      if (r.overall_accuracy < *a.min_accuracy) {
        std::cerr << "threshold violated: " << r.agent << " accuracy " << r.overall_accuracy << " < "
                  << *a.min_accuracy << '\n';
        ok = false;
      }
    }
    if (!ok) return 1;
  }
  return 0;
}

void write_matrix_csv(const std::vector<double>& m, const CardSet& set, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "card";
  for (const Card& c : set.cards()) out << ',' << '"' << c.name << '"';
  out << '\n';
  const std::size_t n = set.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << '"' << set.at(static_cast<CardIndex>(i)).name << '"';
    for (std::size_t j = 0; j < n; ++j) out << ',' << m[i * n + j];
    out << '\n';
  }
}

int run_synergy(const std::string& in, const std::string& set_path, const std::string& out_dir,
                bool human_only, std::uint64_t seed) {
  const CardSet set = load_set(set_path);
  const LogFile file = read_logs(in, set);
  const SynergyMatrices m = cooccurrence(file.logs, set.size(), human_only);
  const Embedding e = embed_synergy(m, seed);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_matrix_csv(m.synergy, set, dir / "synergy.csv");
  write_matrix_csv(m.distance, set, dir / "distance.csv");
  export_plot_data(m, e, set, dir / "embedding.csv");
  std::ofstream summary(dir / "summary.txt");
  summary << "seed " << seed << "\ncollections " << m.collections << "\ndrafted_cards "
          << m.drafted.size() << "\nmax_synergy " << m.max_synergy << "\npearson_r " << e.r
          << "\niterations " << e.iterations << '\n';
  std::cout << "embedded " << m.drafted.size() << " cards from " << m.collections
            << " collections, r = " << e.r << '\n';
  return 0;
}

struct ServeArgs {
  std::vector<std::string> sets;
  std::string models, snapshots, host = "127.0.0.1", cors = "*";
  int port = 8080;
};

int run_serve(const ServeArgs& a) {
  std::vector<std::shared_ptr<const CardSet>> sets;
  for (const auto& s : a.sets) sets.push_back(load_shared_set(s));
  DraftService service(sets, {a.models, a.snapshots});
  if (!a.snapshots.empty()) {
    const std::size_t n = service.recover();
    if (n > 0) std::cout << "recovered " << n << " drafts\n";
  }
  HttpServer server(service, a.cors);
  const int port = server.bind(a.host, a.port);
  std::cout << "listening on http://" << a.host << ':' << port << std::endl;
  server.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Booster-draft simulation, drafting agents and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "draftbots 0.1.0");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic draft logs with bot pods");
  simulate->add_option("--set", sim.set, "Card set JSON")->required();
  simulate->add_option("--agents", sim.agents, "One spec for all seats, or 8 comma-separated")->required();
  simulate->add_option("--drafts", sim.drafts, "Number of 8-seat drafts")->required();
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--out", sim.out, "Output JSONL")->required();
  simulate->add_option("--human-seats", sim.human_seats, "Seats to label human: 'all' or e.g. 0,3");
  simulate->add_option("--id-prefix", sim.prefix, "Prefix for draft ids");
  simulate->add_option("--jobs", sim.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string imp_in, imp_set, imp_out;
  auto* import = app.add_subcommand("import", "Convert a Draftsim CSV export to JSONL");
  import->add_option("--in", imp_in)->required();
  import->add_option("--set", imp_set)->required();
  import->add_option("--out", imp_out)->required();

  std::string split_in, split_train, split_test;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 1;
  auto* split = app.add_subcommand("split", "Split logs into train and test files by draft id");
  split->add_option("--in", split_in)->required();
  split->add_option("--ratio", split_ratio, "Train fraction in (0,1)");
  split->add_option("--seed", split_seed);
  split->add_option("--train-out", split_train, "Default: <in stem>.train.jsonl");
  split->add_option("--test-out", split_test, "Default: <in stem>.test.jsonl");

  std::string tb_train, tb_set, tb_out;
  bool tb_all = false;
  auto* train_bayes_cmd = app.add_subcommand("train-bayes", "Fit pairwise pick counts");
  train_bayes_cmd->add_option("--train", tb_train)->required();
  train_bayes_cmd->add_option("--set", tb_set)->required();
  train_bayes_cmd->add_option("--out", tb_out)->required();
  train_bayes_cmd->add_flag("--all-seats", tb_all, "Train on bot seats too");

  TrainNNetArgs tn;
  auto* train_nnet_cmd = app.add_subcommand("train-nnet", "Train the pick network");
  train_nnet_cmd->add_option("--train", tn.train)->required();
  train_nnet_cmd->add_option("--set", tn.set)->required();
  train_nnet_cmd->add_option("--config", tn.config, "TrainConfig JSON");
  train_nnet_cmd->add_option("--out", tn.out)->required();
  train_nnet_cmd->add_option("--cv", tn.cv, "Cross-validation folds")->check(CLI::Range(2, 100));
  train_nnet_cmd->add_option("--metrics", tn.metrics, "Default: <out>.metrics.csv");
  train_nnet_cmd->add_option("--seed", tn.seed, "Overrides the config seed");
  train_nnet_cmd->add_option("--epochs", tn.epochs, "Overrides the config epochs");
  train_nnet_cmd->add_flag("--all-seats", tn.all_seats, "Train on bot seats too");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Top-one accuracy of agents on a test file");
  eval->add_option("--test", ev.test)->required();
  eval->add_option("--set", ev.set)->required();
  eval->add_option("--agent", ev.agents, "Agent spec; repeat to compare")->required();
  eval->add_option("--report", ev.report, "Directory for JSON/CSV reports");
  eval->add_option("--models", ev.models, "Base directory for model paths");
  eval->add_option("--seed", ev.seed, "Seed for agent streams and bootstrap");
  eval->add_option("--jobs", ev.jobs)->check(CLI::PositiveNumber);
  eval->add_option("--resamples", ev.resamples, "Bootstrap resamples");
  eval->add_option("--min-accuracy", ev.min_accuracy, "Exit 1 if any agent falls below");
  eval->add_flag("--human-only", ev.human_only, "Score human seats only");

  std::string syn_in, syn_set, syn_out;
  bool syn_human = false;
  std::uint64_t syn_seed = 1;
  auto* synergy = app.add_subcommand("synergy", "Co-occurrence synergy matrices and 2-D embedding");
  synergy->add_option("--in", syn_in)->required();
  synergy->add_option("--set", syn_set)->required();
  synergy->add_option("--out", syn_out)->required();
  synergy->add_flag("--human-only", syn_human);
  synergy->add_option("--seed", syn_seed);

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "HTTP draft service");
  serve->add_option("--set", sv.sets, "Card set JSON (repeatable)")->required();
  serve->add_option("--models", sv.models, "Directory for bayes:/nnet: model paths");
  serve->add_option("--port", sv.port);
  serve->add_option("--host", sv.host);
  serve->add_option("--snapshots", sv.snapshots, "Directory for crash-recovery snapshots");
  serve->add_option("--cors-origin", sv.cors);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*import) return run_import(imp_in, imp_set, imp_out);
    if (*split) return run_split(split_in, split_ratio, split_seed, split_train, split_test);
    if (*train_bayes_cmd) return run_train_bayes(tb_train, tb_set, tb_out, tb_all);
    if (*train_nnet_cmd) return run_train_nnet(tn);
    if (*eval) return run_eval(ev);
    if (*synergy) return run_synergy(syn_in, syn_set, syn_out, syn_human, syn_seed);
    if (*serve) return run_serve(sv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
