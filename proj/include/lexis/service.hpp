#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "lexis/corpus.hpp"
#include "lexis/error.hpp"
#include "lexis/metaphor.hpp"
#include "lexis/topics.hpp"

namespace lexis {

// Everything the service answers from. Built once at startup and never
// mutated afterwards, so requests share it without locking.
struct ServiceState {
  Corpus corpus;
  std::optional<TopicModel> model;
  LexiconPack lexicons = default_lexicons();
  std::set<std::string> metaphor_targets = {"economia", "società", "virus"};
  std::string cors_origin = "*";
};

using QueryParams = std::multimap<std::string, std::string>;

struct Response {
  int status = 200;
  std::string body;  // compact JSON
};

inline constexpr std::size_t kMaxPageSize = 500;
inline constexpr std::size_t kMaxPerRelation = 100;

// Answers one GET request. Pure: the same (state, path, params) always gives
// the same response. Errors use {"error": {"code", "message"}} with 400 for
// malformed queries, 404 for unknown resources and 422 for queries the data
// cannot answer.
Response handle(const ServiceState& state, std::string_view path, const QueryParams& params);

// HTTP status for a library error code.
int http_status(Errc code) noexcept;

class Server {
 public:
  explicit Server(const ServiceState& state);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds without accepting yet; port 0 picks a free port. Returns the port.
  // Throws Error{IoError} when the address cannot be bound.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lexis
