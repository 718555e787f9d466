#pragma once

// HTTP API over a DocumentStore.
//   GET  /docs                  list with revisions
//   GET  /docs/{id}             {revision, updated_at, document}
//   POST /docs/{id}/edits       Edit -> {revision, updated_at, validation}
//   GET  /docs/{id}/validation  {revision, ok, is_complete, errors}
//   GET  /labels                label vocabulary
// Errors are {"error": CODE, "message": ...}; CONFLICT and REJECTED also
// carry the current revision, REJECTED the validation report.

#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "sialign/service/store.hpp"

namespace sialign {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Conflict: return 409;
    case ErrorCode::Rejected: return 422;
    case ErrorCode::Io:
    case ErrorCode::Internal: return 500;
    default: return 400;
  }
}

inline nlohmann::json labels_json() {
  nlohmann::json out = nlohmann::json::array();
  for (Label l : kAllLabels)
    out.push_back({{"label", to_string(l)}, {"description", describe(l)}, {"two_sided", !is_addition(l)}});
  return {{"labels", out}};
}

class Api {
 public:
  explicit Api(DocumentStore& store) : store_(store) {}

  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body) const {
    try {
      return dispatch(method, path, body);
    } catch (const EditRejected& e) {
      auto j = error_json(e);
      j["validation"] = to_json(e.report());
      return {422, with_revision(std::move(j), path)};
    } catch (const Error& e) {
      auto j = error_json(e);
      if (e.code() == ErrorCode::Conflict) j = with_revision(std::move(j), path);
      return {http_status(e.code()), j};
    } catch (const std::exception& e) {
      return {500, {{"error", "INTERNAL"}, {"message", e.what()}}};
    }
  }

 private:
  static nlohmann::json error_json(const Error& e) {
    std::string msg = e.what();
    const auto prefix = std::string(to_string(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
    return {{"error", to_string(e.code())}, {"message", msg}};
  }

  nlohmann::json with_revision(nlohmann::json j, const std::string& path) const {
    const auto id = doc_id(path);
    if (!id.empty() && store_.contains(id)) j["revision"] = store_.get(id)->revision;
    return j;
  }

  // "/docs/{id}/..." -> id
  static std::string doc_id(const std::string& path) {
    if (path.rfind("/docs/", 0) != 0) return {};
    const auto rest = path.substr(6);
    return rest.substr(0, rest.find('/'));
  }

  ApiResponse dispatch(const std::string& method, const std::string& path, const std::string& body) const {
    if (path == "/labels" && method == "GET") return {200, labels_json()};
    if (path == "/docs" && method == "GET") return {200, list()};
    const auto id = doc_id(path);
    if (!id.empty()) {
      const auto tail = path.substr(6 + id.size());
      if (tail.empty() && method == "GET") {
        const auto d = store_.get(id);
        nlohmann::json j = nlohmann::json::parse(encode_envelope(*d));
        return {200, j};
      }
      if (tail == "/validation" && method == "GET") {
        const auto d = store_.get(id);
        auto j = to_json(validate_document(d->document));
        j["revision"] = d->revision;
        return {200, j};
      }
      if (tail == "/edits" && method == "POST") {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(ErrorCode::InvalidArgument, std::string("edit body: ") + e.what());
        }
        const auto d = store_.apply(id, edit_from_json(j));
        return {200, {{"revision", d->revision}, {"updated_at", d->updated_at},
                      {"validation", to_json(validate_document(d->document))}}};
      }
    }
    throw Error(ErrorCode::NotFound, "no route for " + method + " " + path);
  }

  nlohmann::json list() const {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& id : store_.ids()) {
      const auto d = store_.get(id);
      docs.push_back({{"id", id},
                      {"revision", d->revision},
                      {"updated_at", d->updated_at},
                      {"source", {{"doc_id", d->document.source.doc_id}, {"lang", d->document.source.lang}}},
                      {"target", {{"doc_id", d->document.target.doc_id}, {"lang", d->document.target.lang}}},
                      {"span_links", d->document.span_links.size()},
                      {"word_links", d->document.word_links.size()}});
    }
    return {{"documents", docs}};
  }

  DocumentStore& store_;
};

/// Binds an httplib server to the Api. The caller owns both.
inline void mount(httplib::Server& server, const Api& api) {
  auto handler = [&api](const httplib::Request& req, httplib::Response& res) {
    const auto r = api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace sialign
