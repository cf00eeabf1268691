#pragma once

#include <map>
#include <memory>
#include <string>

#include "conceptsearch/engine.hpp"

namespace conceptsearch {

using QueryParams = std::multimap<std::string, std::string>;

// Reads q, mode, k, alpha, lambda, top_concepts, grouped, seed, clusters and
// lsi_rank. Throws std::invalid_argument on malformed values.
SearchParams parse_search_params(const QueryParams& params);

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

struct ServiceOptions {
  std::string cors_origin = "*";
};

/// Read-only HTTP facade over a loaded index.
///
///   GET /search    q, mode, k, alpha, lambda, top_concepts, grouped, seed
///   GET /concepts  q, top, mode
///   GET /stats
///   GET /healthz
///
/// The engine is shared immutable state; handlers keep only per-request
/// scratch. Requests run concurrently on the server's worker pool.
class SearchService {
 public:
  explicit SearchService(std::shared_ptr<const SearchEngine> engine, ServiceOptions options = {});
  ~SearchService();
  SearchService(const SearchService&) = delete;
  SearchService& operator=(const SearchService&) = delete;

  HttpReply handle_search(const QueryParams& params) const;
  HttpReply handle_concepts(const QueryParams& params) const;
  HttpReply handle_stats() const;
  HttpReply handle_healthz() const;

  // Blocks until stop(). Returns false when the address cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it (negative on failure); follow
  // with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Server;
  std::shared_ptr<const SearchEngine> engine_;
  ServiceOptions options_;
  std::unique_ptr<Server> server_;
};

}  // namespace conceptsearch
