#include <thread>

#include "draftbots/service.hpp"
#include "httplib.h"
#include "json.hpp"

namespace draftbots {

using nlohmann::json;

namespace {

json card_json(const Card& c) {
  return {{"index", c.index},
          {"name", c.name},
          {"rarity", to_string(c.rarity)},
          {"colors", c.colors.color_class()},
          {"mana", c.colors.mana},
          {"strength", c.strength}};
}

json view_json(const HumanView& v, const CardSet& set) {
  json pack = json::array();
  for (CardIndex c : v.pack) pack.push_back(card_json(set.at(c)));
  json picks = json::array();
  for (CardIndex c : v.picks) picks.push_back(card_json(set.at(c)));
  return {{"draft_id", v.draft_id},
          {"set_code", v.set_code},
          {"status", v.finished ? "finished" : "awaiting_human"},
          {"pick_number", v.pick_number},
          {"pack_number", v.pack_number},
          {"picks_made", v.picks_made},
          {"pack", pack},
          {"collection", picks}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

}  // namespace

struct HttpServer::Impl {
  DraftService& service;
  std::string cors_origin;
  httplib::Server server;
  std::thread thread;

  Impl(DraftService& s, std::string origin) : service(s), cors_origin(std::move(origin)) {}

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ServiceError& e) {
        send_error(res, e.status(), e.code(), e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/sets", guarded([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& set : service.sets()) {
        json cards = json::array();
        for (const Card& c : set->cards()) cards.push_back(card_json(c));
        out.push_back({{"code", set->code()}, {"size", set->size()}, {"cards", cards}});
      }
      send_json(res, 200, out);
    }));

    server.Post("/drafts", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = json::parse(req.body);
      CreateDraftRequest r;
      r.set_code = body.at("set_code").get<std::string>();
      r.agents = body.at("agents").get<std::vector<std::string>>();
      if (body.contains("seed") && !body.at("seed").is_null()) r.seed = body.at("seed").get<std::uint64_t>();
      if (body.contains("human_seat")) r.human_seat = body.at("human_seat").get<int>();
      const HumanView v = service.create_draft(r);
      send_json(res, 201, view_json(v, *service.set(v.set_code)));
    }));

    server.Get(R"(/drafts/([^/]+)/state)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const HumanView v = service.get_state(req.matches[1]);
                 send_json(res, 200, view_json(v, *service.set(v.set_code)));
               }));

    server.Post(R"(/drafts/([^/]+)/pick)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = json::parse(req.body);
                  std::optional<int> expected;
                  if (body.contains("pick") && !body.at("pick").is_null()) expected = body.at("pick").get<int>();
                  const HumanView v =
                      service.submit_pick(req.matches[1], body.at("card").get<CardIndex>(), expected);
                  send_json(res, 200, view_json(v, *service.set(v.set_code)));
                }));

    server.Get(R"(/drafts/([^/]+)/suggestions)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 if (!req.has_param("agent")) {
                   throw ServiceError(400, "bad_request", "missing query parameter 'agent'");
                 }
                 const std::string agent = req.get_param_value("agent");
                 json out = json::array();
                 for (const Suggestion& s : service.get_suggestions(req.matches[1], agent)) {
                   out.push_back({{"card", s.card}, {"score", s.score}});
                 }
                 send_json(res, 200, {{"agent", agent}, {"suggestions", out}});
               }));

    server.Get(R"(/drafts/([^/]+)/log)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto logs = service.get_log(req.matches[1]);
                 std::string body = serialize_header({logs.front().set_code, std::nullopt}) + '\n';
                 for (const DraftLog& log : logs) {
                   body += serialize_log(log);
                   body += '\n';
                 }
                 res.status = 200;
                 res.set_content(body, "application/x-ndjson");
               }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_error(res, res.status, res.status == 404 ? "not_found" : "error", "no such route");
      }
    });
  }
};

HttpServer::HttpServer(DraftService& service, std::string cors_origin)
    : impl_(std::make_unique<Impl>(service, std::move(cors_origin))) {
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind to " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind to " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace draftbots
