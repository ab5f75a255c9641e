#include "draftbots/service.hpp"

#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include "draftbots/draft_engine.hpp"
#include "draftbots/error.hpp"
#include "draftbots/simulate.hpp"
#include "json.hpp"

namespace draftbots {

using nlohmann::json;

struct DraftService::LiveDraft {
  std::string id;
  CreateDraftRequest request;
  std::uint64_t seed = 0;
  std::shared_ptr<const CardSet> set;
  std::unique_ptr<DraftState> state;
  std::array<std::unique_ptr<Agent>, kSeats> agents;
  std::vector<Rng> rngs;
  std::vector<DraftLog> logs;
  mutable std::mutex mutex;
};

namespace {

ServiceError not_found(const std::string& id) {
  return ServiceError(404, "not_found", "no draft with id '" + id + "'");
}

void append_snapshot(const std::filesystem::path& dir, const std::string& id, const json& record) {
  if (dir.empty()) return;
  std::ofstream out(dir / (id + ".jsonl"), std::ios::app);
  if (!out) throw Error("cannot write snapshot for draft " + id);
  out << record.dump() << '\n';
  out.flush();
}

}  // namespace

DraftService::DraftService(std::vector<std::shared_ptr<const CardSet>> sets, Options options)
    : sets_(std::move(sets)), options_(std::move(options)), models_(options_.models_dir) {
  if (!options_.snapshot_dir.empty()) std::filesystem::create_directories(options_.snapshot_dir);
}

DraftService::~DraftService() = default;

std::shared_ptr<const CardSet> DraftService::set(const std::string& code) const {
  for (const auto& s : sets_) {
    if (s->code() == code) return s;
  }
  return nullptr;
}

std::shared_ptr<DraftService::LiveDraft> DraftService::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = drafts_.find(id);
  if (it == drafts_.end()) throw not_found(id);
  return it->second;
}

std::shared_ptr<DraftService::LiveDraft> DraftService::build(const std::string& id,
                                                             const CreateDraftRequest& request,
                                                             std::uint64_t seed) {
  auto set_ptr = set(request.set_code);
  if (!set_ptr) throw ServiceError(400, "bad_request", "unknown set '" + request.set_code + "'");
  if (request.agents.size() != static_cast<std::size_t>(kSeats - 1)) {
    throw ServiceError(400, "bad_request",
                       "expected " + std::to_string(kSeats - 1) + " agent specs, got " +
                           std::to_string(request.agents.size()));
  }
  if (request.human_seat < 0 || request.human_seat >= kSeats) {
    throw ServiceError(400, "bad_request", "human_seat must be in [0,7]");
  }
  auto d = std::make_shared<LiveDraft>();
  d->id = id;
  d->request = request;
  d->seed = seed;
  d->set = set_ptr;
  std::size_t next_agent = 0;
  for (int seat = 0; seat < kSeats; ++seat) {
    if (seat == request.human_seat) continue;
    try {
      d->agents[static_cast<std::size_t>(seat)] =
          make_agent(parse_agent_spec(request.agents[next_agent++]), set_ptr, models_);
    } catch (const ServiceError&) {
      throw;
    } catch (const Error& e) {
      throw ServiceError(400, "bad_request", e.what());
    }
  }
  d->state = std::make_unique<DraftState>(*set_ptr, seed);
  for (int seat = 0; seat < kSeats; ++seat) {
    d->rngs.emplace_back(seat_stream_seed(seed, seat));
    DraftLog log;
    log.draft_id = id + "-" + std::to_string(seat);
    log.set_code = set_ptr->code();
    log.seat_kind = seat == request.human_seat ? SeatKind::human : SeatKind::bot;
    d->logs.push_back(std::move(log));
  }
  return d;
}

HumanView DraftService::create_draft(const CreateDraftRequest& request) {
  std::uint64_t seed;
  if (request.seed) {
    seed = *request.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "d" + std::to_string(next_id_++);
  }
  auto d = build(id, request, seed);
  append_snapshot(options_.snapshot_dir, id,
                  {{"type", "create"},
                   {"id", id},
                   {"set", request.set_code},
                   {"agents", request.agents},
                   {"seed", seed},
                   {"human_seat", request.human_seat}});
  std::lock_guard lock(mutex_);
  drafts_[id] = d;
  std::lock_guard dlock(d->mutex);
  return view(*d);
}

HumanView DraftService::view(const LiveDraft& d) const {
  HumanView v;
  v.draft_id = d.id;
  v.set_code = d.set->code();
  v.finished = d.state->terminal();
  v.pick_number = d.state->global_pick();
  v.pack_number = d.state->pack_number();
  const DraftLog& mine = d.logs[static_cast<std::size_t>(d.request.human_seat)];
  v.picks_made = static_cast<int>(mine.events.size());
  for (const PickEvent& ev : mine.events) v.picks.push_back(ev.picked);
  if (!v.finished) {
    const auto cards = d.state->pack(d.request.human_seat).cards();
    v.pack.assign(cards.begin(), cards.end());
  }
  return v;
}

HumanView DraftService::get_state(const std::string& id) const {
  auto d = find(id);
  std::lock_guard lock(d->mutex);
  return view(*d);
}

void DraftService::apply_pick(LiveDraft& d, CardIndex card, std::optional<int> expected_pick) {
  if (d.state->terminal()) throw ServiceError(409, "conflict", "draft " + d.id + " is finished");
  const int pick = d.state->global_pick();
  if (expected_pick && *expected_pick != pick) {
    throw ServiceError(409, "stale_pick",
                       "pick " + std::to_string(*expected_pick) + " already applied; current pick is " +
                           std::to_string(pick));
  }
  const int human = d.request.human_seat;
  const Pack& human_pack = d.state->pack(human);
  if (!human_pack.contains(card)) {
    std::string legal;
    for (CardIndex c : human_pack.cards()) legal += (legal.empty() ? "" : ",") + std::to_string(c);
    throw ServiceError(400, "illegal_pick",
                       "card " + std::to_string(card) + " is not in your pack; legal picks: " + legal);
  }

  // compute the whole round on copies, then commit
  std::vector<Rng> rngs = d.rngs;
  std::array<CardIndex, kSeats> picks{};
  for (int seat = 0; seat < kSeats; ++seat) {
    const auto s = static_cast<std::size_t>(seat);
    picks[s] = seat == human
                   ? card
                   : d.agents[s]->rank(d.state->pack(seat).cards(), d.state->collection(seat), pick,
                                       rngs[s]).chosen;
  }
  auto next = std::make_unique<DraftState>(*d.state);
  next->step(picks);

  for (int seat = 0; seat < kSeats; ++seat) {
    const auto s = static_cast<std::size_t>(seat);
    const auto cards = d.state->pack(seat).cards();
    d.logs[s].events.push_back(PickEvent{pick, {cards.begin(), cards.end()}, picks[s]});
  }
  d.state = std::move(next);
  d.rngs = std::move(rngs);
}

HumanView DraftService::submit_pick(const std::string& id, CardIndex card,
                                    std::optional<int> expected_pick) {
  auto d = find(id);
  std::lock_guard lock(d->mutex);
  const int pick = d->state->global_pick();
  apply_pick(*d, card, expected_pick);
  append_snapshot(options_.snapshot_dir, id, {{"type", "pick"}, {"card", card}, {"pick", pick}});
  return view(*d);
}

std::vector<Suggestion> DraftService::get_suggestions(const std::string& id,
                                                      const std::string& agent_spec) {
  auto d = find(id);
  AgentSpec spec;
  std::unique_ptr<Agent> agent;
  try {
    spec = parse_agent_spec(agent_spec);
    agent = make_agent(spec, d->set, models_);
  } catch (const Error& e) {
    throw ServiceError(400, "bad_request", e.what());
  }
  std::lock_guard lock(d->mutex);
  if (d->state->terminal()) throw ServiceError(409, "conflict", "draft " + id + " is finished");
  const int human = d->request.human_seat;
  const int pick = d->state->global_pick();
  Rng rng(spec.seed, static_cast<std::uint64_t>(pick));
  const auto pack = d->state->pack(human).cards();
  const AgentRanking r = agent->rank(pack, d->state->collection(human), pick, rng);
  std::vector<Suggestion> out;
  for (std::size_t k = 0; k < pack.size(); ++k) out.push_back({pack[k], r.scores[k]});
  std::stable_sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
    return a.score > b.score || (a.score == b.score && a.card < b.card);
  });
  return out;
}

std::vector<DraftLog> DraftService::get_log(const std::string& id) const {
  auto d = find(id);
  std::lock_guard lock(d->mutex);
  if (!d->state->terminal()) {
    throw ServiceError(409, "conflict", "draft " + id + " is not finished");
  }
  return d->logs;
}

std::string DraftService::state_digest(const std::string& id) const {
  auto d = find(id);
  std::lock_guard lock(d->mutex);
  std::ostringstream os;
  os << d->state->global_pick() << '|' << d->state->terminal();
  for (int seat = 0; seat < kSeats; ++seat) {
    os << '|';
    for (CardIndex c : d->state->pack(seat).cards()) os << c << ',';
    os << '/';
    for (auto n : d->state->collection(seat).counts()) os << n << ',';
  }
  for (const auto& log : d->logs) os << '|' << serialize_log(log);
  for (auto rng : d->rngs) os << '|' << rng.engine()();
  return os.str();
}

std::size_t DraftService::recover() {
  if (options_.snapshot_dir.empty()) return 0;
  std::size_t restored = 0;
  for (const auto& entry : std::filesystem::directory_iterator(options_.snapshot_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    std::shared_ptr<LiveDraft> d;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception&) {
        break;  // torn final line
      }
      if (rec.at("type") == "create") {
        CreateDraftRequest req;
        req.set_code = rec.at("set").get<std::string>();
        req.agents = rec.at("agents").get<std::vector<std::string>>();
        req.seed = rec.at("seed").get<std::uint64_t>();
        req.human_seat = rec.at("human_seat").get<int>();
        d = build(rec.at("id").get<std::string>(), req, *req.seed);
      } else if (d && rec.at("type") == "pick") {
        apply_pick(*d, rec.at("card").get<CardIndex>(), rec.at("pick").get<int>());
      }
    }
    if (!d) continue;
    std::lock_guard lock(mutex_);
    drafts_[d->id] = d;
    if (d->id.size() > 1 && d->id[0] == 'd') {
      try {
        next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(d->id.substr(1)) + 1);
      } catch (const std::logic_error&) {
      }
    }
    ++restored;
  }
  return restored;
}

}  // namespace draftbots
