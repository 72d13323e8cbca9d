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


// Live audit sessions backed by the judgment log. Every state change is a
// log record first; the in-memory state is whatever replaying those records
// produces, so a service rebuilt from an exported log is indistinguishable
// from the original.

#ifndef LAM_AUDIT_SERVICE_HPP_
#define LAM_AUDIT_SERVICE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/error.hpp"
#include "lam/group_metrics.hpp"
#include "lam/judgment_log.hpp"
#include "lam/learning.hpp"
#include "lam/output_metric.hpp"
#include "lam/recipe.hpp"
#include "lam/similarity.hpp"

namespace lam
{

enum class ServiceErrorKind
{
  kNotFound,  ///< HTTP 404
  kConflict,  ///< HTTP 409: duplicate, exhausted or unmet precondition
  kInvalid,   ///< HTTP 422
};

class ServiceError : public Error
{
public:
  ServiceError(ServiceErrorKind kind, const std::string& message) : Error(message), kind_(kind) {}
  ServiceErrorKind kind() const { return kind_; }
  int http_status() const;

private:
  ServiceErrorKind kind_;
};

/// A prepared table the service can hand out in fixed subsets.
struct ServiceDataset
{
  std::string name;
  DataTable table;  ///< one-hot encoded
  std::string system_column;
  std::string truth_column;
  OutputSpace output_space;
  OutputMetric metric = OutputMetric::kDiscrete;
  double epsilon = 1.0;  ///< threshold turning an elicited label into s
  std::vector<std::string> display_columns;
  std::vector<std::vector<std::size_t>> subsets;  ///< row indices
  std::vector<GroupPair> pairs;  ///< comparisons behind the notion flags
  CovarianceModel covariance;
};

/// Encodes the table, cuts `n_subsets` disjoint subsets of `subset_size`
/// rows by a seeded shuffle and compares every unprivileged level of each
/// protected attribute with the privileged one at `delta`.
ServiceDataset make_service_dataset(const std::string& name, const PreparedDataset& prepared,
                                    std::size_t n_subsets, std::size_t subset_size,
                                    std::uint64_t seed, double delta);

struct ServiceConfig
{
  bool reuse_subsets = false;
  std::size_t refit_every = 10;
  LearningConfig learning;
  /// Timestamp source; defaults to the UTC wall clock in ISO-8601.
  std::function<std::string()> clock;
};

std::string utc_timestamp();

enum class SessionStatus
{
  kActive,
  kComplete,  ///< every row served and judged
};

struct SessionView
{
  std::string id;
  std::string auditor;
  std::string dataset;
  std::int64_t subset = -1;
  std::size_t size = 0;
  std::size_t cursor = 0;
  std::size_t judged = 0;
  std::vector<RowId> pending;  ///< served but not yet judged, in serve order
  SessionStatus status = SessionStatus::kActive;
  std::string created;
};

struct Tuple
{
  bool complete = false;
  RowId row = 0;
  std::vector<std::pair<std::string, std::string>> features;
  std::string system;
  std::size_t position = 0;  ///< 1-based
  std::size_t total = 0;
};

struct Verdict
{
  std::optional<int> s;
  std::optional<std::string> label;
};

struct Ack
{
  std::uint64_t seq = 0;  ///< per-session judgment number
  std::uint64_t log_seq = 0;
  RowId row = 0;
  int s = 0;
};

class AuditService
{
public:
  /// Replays whatever the log already holds. Throws DataError when the log
  /// contradicts itself or names unknown datasets or rows.
  AuditService(std::vector<ServiceDataset> datasets, ServiceConfig config,
               std::shared_ptr<JudgmentLog> log);
  ~AuditService();

  AuditService(const AuditService&) = delete;
  AuditService& operator=(const AuditService&) = delete;

  /// `subset` picks a subset index; otherwise a free one is drawn with
  /// `seed`. Errors: unknown dataset (not found), taken or exhausted
  /// subsets (conflict), bad index (invalid).
  SessionView create_session(const std::string& auditor, const std::string& dataset,
                             std::optional<std::size_t> subset, std::uint64_t seed);
  Tuple next_tuple(const std::string& session);
  Ack submit_judgment(const std::string& session, RowId row, const Verdict& verdict);
  /// JSON text. Metrics use the judgments up to the last multiple of
  /// refit_every and are null before the first refit.
  std::string session_report(const std::string& session);
  SessionView session(const std::string& session) const;
  std::vector<SessionView> sessions() const;

  /// Log text with only the records of the matching auditor's sessions, or
  /// everything when `auditor` is empty.
  std::string export_log(const std::string& auditor = "") const;

  /// Canonical text of every session's state, for equality checks.
  std::string state_dump() const;

  std::vector<std::string> dataset_names() const;
  const ServiceDataset& dataset(const std::string& name) const;
  const JudgmentLog& log() const { return *log_; }

private:
  struct Session;
  struct DatasetState;

  Session& find(const std::string& id) const;
  void apply(const LogRecord& record);
  std::string compute_report(const Session& s, std::size_t fitted_on) const;

  ServiceConfig config_;
  std::shared_ptr<JudgmentLog> log_;
  std::map<std::string, std::unique_ptr<DatasetState>> datasets_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

}  // namespace lam

#endif  // LAM_AUDIT_SERVICE_HPP_
