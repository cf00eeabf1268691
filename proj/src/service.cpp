#include "conceptsearch/service.hpp"

#include <charconv>
#include <chrono>
#include <stdexcept>

#include <httplib.h>

#include "conceptsearch/serialize.hpp"

namespace conceptsearch {

using nlohmann::json;

namespace {

const std::string* find_param(const QueryParams& params, const std::string& key) {
  auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("parameter " + key + " is not a valid number: \"" + text + "\"");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("parameter " + key + " must be true or false");
}

HttpReply error_reply(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

}  // namespace

SearchParams parse_search_params(const QueryParams& params) {
  SearchParams p;
  if (auto v = find_param(params, "q")) p.q = *v;
  if (auto v = find_param(params, "mode")) p.mode = parse_mode(*v);
  if (auto v = find_param(params, "k")) p.k = parse_number<std::size_t>("k", *v);
  if (auto v = find_param(params, "alpha")) p.alpha = parse_number<double>("alpha", *v);
  if (auto v = find_param(params, "lambda")) p.lambda = parse_number<double>("lambda", *v);
  if (auto v = find_param(params, "top_concepts")) {
    p.top_concepts = parse_number<std::size_t>("top_concepts", *v);
  }
  if (auto v = find_param(params, "grouped")) p.grouped = parse_bool("grouped", *v);
  if (auto v = find_param(params, "seed")) p.cluster.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = find_param(params, "clusters")) {
    p.cluster.clusters = parse_number<std::size_t>("clusters", *v);
  }
  if (auto v = find_param(params, "lsi_rank")) {
    p.cluster.lsi_rank = parse_number<std::size_t>("lsi_rank", *v);
  }
  if (p.cluster.clusters == 0) throw std::invalid_argument("clusters must be at least 1");
  if (p.cluster.lsi_rank == 0) throw std::invalid_argument("lsi_rank must be at least 1");
  return p;
}

struct SearchService::Server {
  httplib::Server http;
};

SearchService::SearchService(std::shared_ptr<const SearchEngine> engine, ServiceOptions options)
    : engine_(std::move(engine)), options_(std::move(options)), server_(std::make_unique<Server>()) {
  if (!engine_) throw std::invalid_argument("SearchService needs an engine");

  auto respond = [this](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
    res.set_content(reply.body, "application/json; charset=utf-8");
  };
  auto& http = server_->http;
  http.Get("/search", [this, respond](const httplib::Request& req, httplib::Response& res) {
    respond(res, handle_search(req.params));
  });
  http.Get("/concepts", [this, respond](const httplib::Request& req, httplib::Response& res) {
    respond(res, handle_concepts(req.params));
  });
  http.Get("/stats", [this, respond](const httplib::Request&, httplib::Response& res) {
    respond(res, handle_stats());
  });
  http.Get("/healthz", [this, respond](const httplib::Request&, httplib::Response& res) {
    respond(res, handle_healthz());
  });
  http.Options(R"(/.*)", [this](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

SearchService::~SearchService() { stop(); }

HttpReply SearchService::handle_search(const QueryParams& params) const {
  const auto start = std::chrono::steady_clock::now();
  try {
    const SearchParams p = parse_search_params(params);
    const SearchResult result = engine_->search(p);
    json body = search_result_json(result, engine_->corpus());
    body["took_ms"] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    return {200, body.dump()};
  } catch (const std::invalid_argument& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

HttpReply SearchService::handle_concepts(const QueryParams& params) const {
  try {
    SearchParams p = parse_search_params(params);
    if (auto v = find_param(params, "top")) p.top_concepts = parse_number<std::size_t>("top", *v);
    if (!find_param(params, "mode")) p.mode = Mode::community;
    return {200, concepts_json(p, engine_->concepts_for(p)).dump()};
  } catch (const std::invalid_argument& e) {
    return error_reply(400, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

HttpReply SearchService::handle_stats() const {
  return {200, stats_json(engine_->stats()).dump()};
}

HttpReply SearchService::handle_healthz() const {
  return {200, json{{"status", "ok"}, {"items", engine_->index().item_count()}}.dump()};
}

bool SearchService::listen(const std::string& host, int port) {
  return server_->http.listen(host, port);
}

int SearchService::bind_to_any_port(const std::string& host) {
  return server_->http.bind_to_any_port(host);
}

bool SearchService::listen_after_bind() { return server_->http.listen_after_bind(); }

void SearchService::wait_until_ready() const { server_->http.wait_until_ready(); }

void SearchService::stop() {
  if (server_ && server_->http.is_running()) server_->http.stop();
}

}  // namespace conceptsearch
