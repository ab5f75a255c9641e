#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "draftbots/agent_spec.hpp"
#include "draftbots/card_set.hpp"
#include "draftbots/draft_log.hpp"
#include "draftbots/error.hpp"

namespace draftbots {

/// Error surfaced to service clients with an HTTP-style status.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

struct CreateDraftRequest {
  std::string set_code;
  /// One spec per bot seat (7).
  std::vector<std::string> agents;
  std::optional<std::uint64_t> seed;
  int human_seat = 0;
};

/// What the human seat may see: never another seat's pack or collection.
struct HumanView {
  std::string draft_id;
  std::string set_code;
  int pick_number = 1;
  int pack_number = 1;
  int picks_made = 0;
  bool finished = false;
  std::vector<CardIndex> pack;
  /// cards taken so far, in pick order
  std::vector<CardIndex> picks;
};

struct Suggestion {
  CardIndex card = 0;
  double score = 0.0;
};

/// In-memory store of live drafts: one human seat against seven agents in
/// lockstep rounds. Per-draft mutations are serialized; different drafts are
/// independent.
class DraftService {
 public:
  struct Options {
    std::filesystem::path models_dir;
    /// When non-empty, each draft appends its create request and picks to
    /// <dir>/<id>.jsonl so recover() can rebuild it.
    std::filesystem::path snapshot_dir;
  };

  DraftService(std::vector<std::shared_ptr<const CardSet>> sets, Options options);
  ~DraftService();

  std::vector<std::shared_ptr<const CardSet>> sets() const { return sets_; }
  std::shared_ptr<const CardSet> set(const std::string& code) const;

  HumanView create_draft(const CreateDraftRequest& request);
  HumanView get_state(const std::string& id) const;
  /// Applies the human pick and all bot picks as one round. `expected_pick`
  /// guards retries: a stale value is rejected without changing state.
  HumanView submit_pick(const std::string& id, CardIndex card,
                        std::optional<int> expected_pick = std::nullopt);
  /// Ranked scores of the named agent for the human's current pack; no state change.
  std::vector<Suggestion> get_suggestions(const std::string& id, const std::string& agent_spec);
  /// All eight seat logs, only once the draft has finished.
  std::vector<DraftLog> get_log(const std::string& id) const;
  /// Digest of the full hidden state, for side-effect checks.
  std::string state_digest(const std::string& id) const;

  /// Rebuilds drafts from the snapshot directory; returns how many were restored.
  std::size_t recover();

 private:
  struct LiveDraft;

  std::shared_ptr<LiveDraft> find(const std::string& id) const;
  std::shared_ptr<LiveDraft> build(const std::string& id, const CreateDraftRequest& request,
                                   std::uint64_t seed);
  HumanView view(const LiveDraft& d) const;
  void apply_pick(LiveDraft& d, CardIndex card, std::optional<int> expected_pick);

  std::vector<std::shared_ptr<const CardSet>> sets_;
  Options options_;
  ModelCache models_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<LiveDraft>> drafts_;
  std::uint64_t next_id_ = 1;
};

/// JSON-over-HTTP front end for a DraftService (CORS enabled).
class HttpServer {
 public:
  explicit HttpServer(DraftService& service, std::string cors_origin = "*");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves on a background thread.
  void start();
  /// Serves on the calling thread until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace draftbots
