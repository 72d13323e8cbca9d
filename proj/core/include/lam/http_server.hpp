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


// HTTP+JSON front of the audit service.
//
//   GET  /health
//   GET  /datasets
//   POST /sessions                  {"auditor", "dataset", "subset"?, "seed"?}
//   GET  /sessions/{id}
//   GET  /sessions/{id}/next
//   POST /sessions/{id}/judgments   {"row", "s"? , "label"?}
//   GET  /sessions/{id}/report
//   GET  /export?auditor=
//
// Errors carry {"error": message} with 404, 409 or 422.

#ifndef LAM_HTTP_SERVER_HPP_
#define LAM_HTTP_SERVER_HPP_

#include <map>
#include <memory>
#include <string>

#include "lam/audit_service.hpp"

namespace lam
{

struct HttpRequest
{
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse
{
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Routes one request. Never throws; internal failures become 500.
HttpResponse handle_request(AuditService& service, const HttpRequest& request);

class AuditHttpServer
{
public:
  explicit AuditHttpServer(AuditService& service);
  ~AuditHttpServer();

  AuditHttpServer(const AuditHttpServer&) = delete;
  AuditHttpServer& operator=(const AuditHttpServer&) = delete;

  /// Binds `host:port`; port 0 picks a free one. Returns the bound port or
  /// -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lam

#endif  // LAM_HTTP_SERVER_HPP_
