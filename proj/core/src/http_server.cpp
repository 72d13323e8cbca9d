// Copyright 2026 The lam-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "lam/http_server.hpp"

#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "lam/text.hpp"

namespace lam
{
namespace
{

using ordered_json = nlohmann::ordered_json;

HttpResponse json_response(int status, const ordered_json& body)
{
  return {status, "application/json", body.dump()};
}

HttpResponse error_response(int status, const std::string& message)
{
  ordered_json body;
  body["error"] = message;
  return json_response(status, body);
}

ordered_json session_json(const SessionView& v)
{
  ordered_json j;
  j["session"] = v.id;
  j["auditor"] = v.auditor;
  j["dataset"] = v.dataset;
  j["subset"] = v.subset;
  j["size"] = v.size;
  j["cursor"] = v.cursor;
  j["judged"] = v.judged;
  j["pending"] = v.pending;
  j["status"] = v.status == SessionStatus::kComplete ? "complete" : "active";
  j["created"] = v.created;
  return j;
}

nlohmann::json parse_body(const std::string& body)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw ServiceError(ServiceErrorKind::kInvalid, "request body is not JSON");
  }
  if (!j.is_object()) {
    throw ServiceError(ServiceErrorKind::kInvalid, "request body must be a JSON object");
  }
  return j;
}

HttpResponse create(AuditService& service, const HttpRequest& request)
{
  const auto body = parse_body(request.body);
  if (!body.contains("auditor") || !body["auditor"].is_string() || !body.contains("dataset") ||
      !body["dataset"].is_string()) {
    throw ServiceError(ServiceErrorKind::kInvalid, "need string fields 'auditor' and 'dataset'");
  }
  std::optional<std::size_t> subset;
  if (body.contains("subset") && !body["subset"].is_null() && body["subset"] != "auto") {
    if (!body["subset"].is_number_unsigned()) {
      throw ServiceError(ServiceErrorKind::kInvalid, "'subset' must be an index or \"auto\"");
    }
    subset = body["subset"].get<std::size_t>();
  }
  std::uint64_t seed = 0;
  if (body.contains("seed")) {
    if (!body["seed"].is_number_unsigned()) {
      throw ServiceError(ServiceErrorKind::kInvalid, "'seed' must be a nonnegative integer");
    }
    seed = body["seed"].get<std::uint64_t>();
  }
  const auto view = service.create_session(body["auditor"].get<std::string>(),
                                           body["dataset"].get<std::string>(), subset, seed);
  return json_response(200, session_json(view));
}

HttpResponse next(AuditService& service, const std::string& id)
{
  const auto t = service.next_tuple(id);
  ordered_json j;
  if (t.complete) {
    j["status"] = "complete";
    j["total"] = t.total;
    return json_response(200, j);
  }
  j["status"] = "active";
  j["row"] = t.row;
  ordered_json features = ordered_json::object();
  for (const auto& [name, value] : t.features) {
    features[name] = value;
  }
  j["features"] = features;
  j["system"] = t.system;
  j["position"] = t.position;
  j["total"] = t.total;
  return json_response(200, j);
}

HttpResponse judge(AuditService& service, const std::string& id, const HttpRequest& request)
{
  const auto body = parse_body(request.body);
  if (!body.contains("row") || !body["row"].is_number_integer()) {
    throw ServiceError(ServiceErrorKind::kInvalid, "need integer field 'row'");
  }
  Verdict verdict;
  if (body.contains("s") && !body["s"].is_null()) {
    if (!body["s"].is_number_integer()) {
      throw ServiceError(ServiceErrorKind::kInvalid, "'s' must be 0 or 1");
    }
    verdict.s = body["s"].get<int>();
  }
  if (body.contains("label") && !body["label"].is_null()) {
    if (body["label"].is_string()) {
      verdict.label = body["label"].get<std::string>();
    } else if (body["label"].is_number_integer()) {
      verdict.label = std::to_string(body["label"].get<std::int64_t>());
    } else {
      throw ServiceError(ServiceErrorKind::kInvalid, "'label' must be a string");
    }
  }
  const auto ack = service.submit_judgment(id, body["row"].get<RowId>(), verdict);
  ordered_json j;
  j["seq"] = ack.seq;
  j["log_seq"] = ack.log_seq;
  j["row"] = ack.row;
  j["s"] = ack.s;
  return json_response(200, j);
}

}  // namespace

HttpResponse handle_request(AuditService& service, const HttpRequest& request)
{
  static const std::regex session_path(R"(^/sessions/([A-Za-z0-9_-]+)(/(next|judgments|report))?$)");
  try {
    const auto& path = request.path;
    const auto& method = request.method;
    if (path == "/health") {
      return method == "GET" ? json_response(200, {{"status", "ok"}})
                             : error_response(405, "method not allowed");
    }
    if (path == "/datasets" && method == "GET") {
      ordered_json list = ordered_json::array();
      for (const auto& name : service.dataset_names()) {
        const auto& d = service.dataset(name);
        ordered_json j;
        j["name"] = name;
        j["subsets"] = d.subsets.size();
        j["subset_size"] = d.subsets.empty() ? 0 : d.subsets.front().size();
        j["labels"] = d.output_space.labels();
        list.push_back(j);
      }
      return json_response(200, list);
    }
    if (path == "/sessions" && method == "POST") {
      return create(service, request);
    }
    if (path == "/export" && method == "GET") {
      const auto it = request.query.find("auditor");
      return {200, "application/x-ndjson",
              service.export_log(it == request.query.end() ? "" : it->second)};
    }
    std::smatch match;
    if (std::regex_match(path, match, session_path)) {
      const std::string id = match[1];
      const std::string action = match[3];
      if (action.empty() && method == "GET") {
        return json_response(200, session_json(service.session(id)));
      }
      if (action == "next" && method == "GET") {
        return next(service, id);
      }
      if (action == "judgments" && method == "POST") {
        return judge(service, id, request);
      }
      if (action == "report" && method == "GET") {
        return {200, "application/json", service.session_report(id)};
      }
      return error_response(405, "method not allowed");
    }
    return error_response(404, "no route for " + method + " " + path);
  } catch (const ServiceError& e) {
    return error_response(e.http_status(), e.what());
  } catch (const ConfigError& e) {
    return error_response(422, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

struct AuditHttpServer::Impl
{
  explicit Impl(AuditService& s) : service(s) {}

  AuditService& service;
  httplib::Server server;
};

AuditHttpServer::AuditHttpServer(AuditService& service)
    : impl_(std::make_unique<Impl>(service))
{
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) {
      request.query.emplace(key, value);
    }
    request.body = req.body;
    const auto response = handle_request(impl_->service, request);
    res.status = response.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(response.body, response.content_type);
  };
  auto& server = impl_->server;
  server.Get(R"(/.*)", handler);
  server.Post(R"(/.*)", handler);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

AuditHttpServer::~AuditHttpServer() { stop(); }

int AuditHttpServer::bind(const std::string& host, int port)
{
  if (port == 0) {
    return impl_->server.bind_to_any_port(host);
  }
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool AuditHttpServer::listen() { return impl_->server.listen_after_bind(); }

void AuditHttpServer::stop()
{
  if (impl_->server.is_running()) {
    impl_->server.stop();
  }
}

void AuditHttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace lam
