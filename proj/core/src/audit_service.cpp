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


#include "lam/audit_service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "lam/encoding.hpp"
#include "lam/random.hpp"
#include "lam/text.hpp"

namespace lam
{

using ordered_json = nlohmann::ordered_json;

int ServiceError::http_status() const
{
  switch (kind_) {
    case ServiceErrorKind::kNotFound:
      return 404;
    case ServiceErrorKind::kConflict:
      return 409;
    case ServiceErrorKind::kInvalid:
      return 422;
  }
  return 500;
}

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::now();
  const auto seconds = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buffer, static_cast<int>(millis));
  return out;
}

ServiceDataset make_service_dataset(const std::string& name, const PreparedDataset& prepared,
                                    std::size_t n_subsets, std::size_t subset_size,
                                    std::uint64_t seed, double delta)
{
  const auto& recipe = prepared.recipe;
  const auto& schema = prepared.table.schema();
  if (!recipe.system_column) {
    throw ConfigError("dataset '" + name + "' has no system column to audit");
  }
  if (!schema.outcome()) {
    throw ConfigError("dataset '" + name + "' has no outcome column");
  }
  ServiceDataset out;
  out.name = name;
  out.table = one_hot_encode(prepared.table);
  out.system_column = *recipe.system_column;
  out.truth_column = schema.outcome()->name;
  out.output_space = recipe.output_space;
  out.metric = recipe.output_space.kind() == OutputSpaceKind::kDecile ? OutputMetric::kAbsolute
                                                                       : OutputMetric::kDiscrete;
  for (const auto& f : schema.features()) {
    if (f.name != out.system_column && f.role != FeatureRole::kOutcome) {
      out.display_columns.push_back(f.name);
    }
  }
  out.subsets = split_subset_indices(out.table.rows(), n_subsets, subset_size, seed);
  for (const auto& p : recipe.protected_attributes) {
    for (const auto& level : out.table.observed_levels(schema.index_of(p.name))) {
      if (level != p.privileged) {
        out.pairs.push_back({p.name, level, p.privileged, recipe.favorable, delta});
      }
    }
  }
  out.covariance = fit_covariance(out.table);
  return out;
}

struct AuditService::DatasetState
{
  ServiceDataset data;
  std::vector<bool> used;
  const std::vector<std::string>* system = nullptr;
};

struct AuditService::Session
{
  mutable std::mutex mutex;
  std::string id;
  std::string auditor;
  std::string dataset;
  std::int64_t subset = -1;
  std::string created;
  std::vector<RowId> rows;
  std::size_t cursor = 0;
  std::vector<RowId> served;
  std::unordered_set<RowId> served_set;
  std::vector<LogRecord> judgments;
  std::unordered_set<RowId> judged_set;
  const DatasetState* data = nullptr;
  std::optional<std::pair<std::size_t, std::string>> report_cache;

  SessionView view() const
  {
    SessionView v;
    v.id = id;
    v.auditor = auditor;
    v.dataset = dataset;
    v.subset = subset;
    v.size = rows.size();
    v.cursor = cursor;
    v.judged = judgments.size();
    for (const auto r : served) {
      if (!judged_set.contains(r)) {
        v.pending.push_back(r);
      }
    }
    v.status = judgments.size() == rows.size() ? SessionStatus::kComplete : SessionStatus::kActive;
    v.created = created;
    return v;
  }
};

namespace
{

std::uint64_t session_number(const std::string& id)
{
  if (id.size() > 1 && id[0] == 's') {
    if (const auto n = text::parse_int(std::string_view(id).substr(1)); n && *n > 0) {
      return static_cast<std::uint64_t>(*n);
    }
  }
  return 0;
}

const std::string& system_label(const ServiceDataset& data, RowId row)
{
  return data.table.column(data.system_column)[*data.table.row_index(row)];
}

/// The intrinsic label a verdict implies, when the output space lets us
/// recover it: an elicited label as is, or the other binary label for s = 1.
std::optional<std::string> implied_label(const LogRecord& r, const ServiceDataset& data)
{
  if (r.label) {
    return r.label;
  }
  const auto& labels = data.output_space.labels();
  if (!r.s || labels.size() != 2 || data.metric != OutputMetric::kDiscrete) {
    return std::nullopt;
  }
  if (*r.s == 0) {
    return r.system;
  }
  return r.system == labels[0] ? labels[1] : labels[0];
}

ordered_json or_null(const std::optional<double>& v)
{
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

AuditService::AuditService(std::vector<ServiceDataset> datasets, ServiceConfig config,
                           std::shared_ptr<JudgmentLog> log)
    : config_(std::move(config)), log_(std::move(log))
{
  if (!config_.clock) {
    config_.clock = utc_timestamp;
  }
  if (config_.refit_every == 0) {
    throw ConfigError("refit cadence must be positive");
  }
  if (!log_) {
    log_ = std::make_shared<JudgmentLog>();
  }
  for (auto& d : datasets) {
    auto state = std::make_unique<DatasetState>();
    state->used.assign(d.subsets.size(), false);
    const auto name = d.name;
    state->data = std::move(d);
    state->system = &state->data.table.column(state->data.system_column);
    if (!datasets_.emplace(name, std::move(state)).second) {
      throw ConfigError("dataset '" + name + "' registered twice");
    }
  }
  for (const auto& record : log_->records()) {
    try {
      apply(record);
    } catch (const ServiceError& e) {
      throw DataError("log record " + std::to_string(record.seq) + ": " + e.what());
    }
  }
}

AuditService::~AuditService() = default;

AuditService::Session& AuditService::find(const std::string& id) const
{
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw ServiceError(ServiceErrorKind::kNotFound, "unknown session '" + id + "'");
  }
  return *it->second;
}

void AuditService::apply(const LogRecord& r)
{
  switch (r.kind) {
    case RecordKind::kSession: {
      const auto d = datasets_.find(r.dataset);
      if (d == datasets_.end()) {
        throw DataError("session '" + r.session + "' uses unknown dataset '" + r.dataset + "'");
      }
      if (sessions_.contains(r.session)) {
        throw DataError("session '" + r.session + "' created twice");
      }
      auto& data = *d->second;
      for (const auto row : r.rows) {
        if (!data.data.table.row_index(row)) {
          throw DataError("session '" + r.session + "' names unknown row " + std::to_string(row));
        }
      }
      if (r.subset >= 0) {
        if (static_cast<std::size_t>(r.subset) >= data.used.size()) {
          throw DataError("session '" + r.session + "' names unknown subset");
        }
        data.used[static_cast<std::size_t>(r.subset)] = true;
      }
      auto s = std::make_unique<Session>();
      s->id = r.session;
      s->auditor = r.auditor;
      s->dataset = r.dataset;
      s->subset = r.subset;
      s->created = r.time;
      s->rows = r.rows;
      s->data = &data;
      sessions_.emplace(r.session, std::move(s));
      break;
    }
    case RecordKind::kServe: {
      auto& s = find(r.session);
      if (s.cursor >= s.rows.size() || s.rows[s.cursor] != r.row) {
        throw DataError("serve of row " + std::to_string(r.row) + " out of order in session '" +
                        r.session + "'");
      }
      ++s.cursor;
      s.served.push_back(r.row);
      s.served_set.insert(r.row);
      break;
    }
    case RecordKind::kJudgment: {
      auto& s = find(r.session);
      if (!s.served_set.contains(r.row)) {
        throw DataError("judgment of unserved row " + std::to_string(r.row));
      }
      if (s.judged_set.contains(r.row)) {
        throw DataError("second judgment of row " + std::to_string(r.row));
      }
      if (r.judgment_seq != s.judgments.size() + 1) {
        throw DataError("judgment_seq " + std::to_string(r.judgment_seq) + " out of order");
      }
      s.judged_set.insert(r.row);
      s.judgments.push_back(r);
      break;
    }
  }
}

SessionView AuditService::create_session(const std::string& auditor, const std::string& dataset,
                                         std::optional<std::size_t> subset, std::uint64_t seed)
{
  if (auditor.empty()) {
    throw ServiceError(ServiceErrorKind::kInvalid, "auditor id is empty");
  }
  const std::unique_lock lock(mutex_);
  const auto d = datasets_.find(dataset);
  if (d == datasets_.end()) {
    throw ServiceError(ServiceErrorKind::kNotFound, "unknown dataset '" + dataset + "'");
  }
  auto& data = *d->second;
  std::size_t chosen = 0;
  if (subset) {
    if (*subset >= data.used.size()) {
      throw ServiceError(ServiceErrorKind::kInvalid,
                         "subset " + std::to_string(*subset) + " out of range (dataset has " +
                             std::to_string(data.used.size()) + ")");
    }
    if (data.used[*subset] && !config_.reuse_subsets) {
      throw ServiceError(ServiceErrorKind::kConflict,
                         "subset " + std::to_string(*subset) + " is already assigned");
    }
    chosen = *subset;
  } else {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < data.used.size(); ++i) {
      if (!data.used[i] || config_.reuse_subsets) {
        free.push_back(i);
      }
    }
    if (free.empty()) {
      throw ServiceError(ServiceErrorKind::kConflict,
                         "subsets of dataset '" + dataset + "' are exhausted");
    }
    Rng rng(seed);
    chosen = free[rng.index(free.size())];
  }
  std::uint64_t number = 1;
  for (const auto& [id, s] : sessions_) {
    number = std::max(number, session_number(id) + 1);
  }
  LogRecord record;
  record.kind = RecordKind::kSession;
  record.session = "s" + std::to_string(number);
  record.auditor = auditor;
  record.dataset = dataset;
  record.subset = static_cast<std::int64_t>(chosen);
  for (const auto index : data.data.subsets[chosen]) {
    record.rows.push_back(data.data.table.id(index));
  }
  record.time = config_.clock();
  const auto written = log_->append(std::move(record));
  apply(written);
  return find(written.session).view();
}

Tuple AuditService::next_tuple(const std::string& id)
{
  const std::shared_lock lock(mutex_);
  auto& s = find(id);
  const std::lock_guard session_lock(s.mutex);
  Tuple t;
  t.total = s.rows.size();
  if (s.cursor >= s.rows.size()) {
    t.complete = true;
    t.position = s.rows.size();
    return t;
  }
  const auto& data = s.data->data;
  LogRecord record;
  record.kind = RecordKind::kServe;
  record.session = id;
  record.row = s.rows[s.cursor];
  record.system = system_label(data, record.row);
  record.time = config_.clock();
  const auto written = log_->append(std::move(record));
  apply(written);
  t.row = written.row;
  t.system = written.system;
  t.position = s.cursor;
  const auto index = *data.table.row_index(t.row);
  for (const auto& column : data.display_columns) {
    t.features.emplace_back(column, data.table.column(column)[index]);
  }
  return t;
}

Ack AuditService::submit_judgment(const std::string& id, RowId row, const Verdict& verdict)
{
  const std::shared_lock lock(mutex_);
  auto& s = find(id);
  const std::lock_guard session_lock(s.mutex);
  const auto& data = s.data->data;
  if (!verdict.s && !verdict.label) {
    throw ServiceError(ServiceErrorKind::kInvalid, "verdict needs s or label");
  }
  if (verdict.s && *verdict.s != 0 && *verdict.s != 1) {
    throw ServiceError(ServiceErrorKind::kInvalid, "s must be 0 or 1");
  }
  if (verdict.label && !data.output_space.contains(*verdict.label)) {
    throw ServiceError(ServiceErrorKind::kInvalid,
                       "label '" + *verdict.label + "' is outside the output space");
  }
  if (!s.served_set.contains(row)) {
    throw ServiceError(ServiceErrorKind::kConflict,
                       "row " + std::to_string(row) + " has not been served in this session");
  }
  if (s.judged_set.contains(row)) {
    throw ServiceError(ServiceErrorKind::kConflict,
                       "row " + std::to_string(row) + " already judged");
  }
  LogRecord record;
  record.kind = RecordKind::kJudgment;
  record.session = id;
  record.auditor = s.auditor;
  record.row = row;
  record.system = system_label(data, row);
  record.label = verdict.label;
  record.s = verdict.s;
  if (verdict.label) {
    record.distance = output_distance(record.system, *verdict.label, data.metric);
    record.epsilon = data.epsilon;
    if (!record.s) {
      record.s = *record.distance >= data.epsilon ? 1 : 0;
    }
  }
  record.judgment_seq = s.judgments.size() + 1;
  record.time = config_.clock();
  const auto written = log_->append(std::move(record));
  apply(written);
  return {written.judgment_seq, written.seq, row, *written.s};
}

SessionView AuditService::session(const std::string& id) const
{
  const std::shared_lock lock(mutex_);
  const auto& s = find(id);
  const std::lock_guard session_lock(s.mutex);
  return s.view();
}

std::vector<SessionView> AuditService::sessions() const
{
  const std::shared_lock lock(mutex_);
  std::vector<SessionView> out;
  for (const auto& [id, s] : sessions_) {
    const std::lock_guard session_lock(s->mutex);
    out.push_back(s->view());
  }
  return out;
}

std::string AuditService::session_report(const std::string& id)
{
  const std::shared_lock lock(mutex_);
  auto& s = find(id);
  const std::lock_guard session_lock(s.mutex);
  const std::size_t fitted_on = s.judgments.size() / config_.refit_every * config_.refit_every;
  if (!s.report_cache || s.report_cache->first != fitted_on || fitted_on == 0) {
    s.report_cache.emplace(fitted_on, compute_report(s, fitted_on));
  }
  // Counts move with every judgment; the fitted part only at refits.
  auto report = ordered_json::parse(s.report_cache->second);
  const auto view = s.view();
  report["served"] = view.cursor;
  report["judged"] = view.judged;
  report["pending"] = view.pending.size();
  report["status"] = view.status == SessionStatus::kComplete ? "complete" : "active";
  return report.dump();
}

std::string AuditService::compute_report(const Session& s, std::size_t fitted_on) const
{
  const auto& data = s.data->data;
  ordered_json report;
  report["session"] = s.id;
  report["auditor"] = s.auditor;
  report["dataset"] = s.dataset;
  report["rows"] = s.rows.size();
  report["served"] = 0;
  report["judged"] = 0;
  report["pending"] = 0;
  report["status"] = "active";
  report["refit_every"] = config_.refit_every;
  report["fitted_on"] = fitted_on;
  if (fitted_on == 0) {
    report["model"] = nullptr;
    report["notions"] = nullptr;
    report["consistency"] = nullptr;
    return report.dump();
  }

  const std::span<const LogRecord> used(s.judgments.data(), fitted_on);
  std::vector<std::size_t> indices;
  std::vector<std::optional<std::string>> implied;
  bool all_labels = true;
  bool all_s = true;
  for (const auto& r : used) {
    indices.push_back(*data.table.row_index(r.row));
    implied.push_back(implied_label(r, data));
    all_labels = all_labels && r.label.has_value();
    all_s = all_s && r.s.has_value();
  }
  const bool implied_known =
      std::all_of(implied.begin(), implied.end(), [](const auto& l) { return l.has_value(); });

  // f-hat: a tree on the elicited labels, or on verdicts with the system
  // label as an extra feature.
  {
    std::vector<std::string> targets;
    for (const auto& r : used) {
      targets.push_back(all_labels ? *r.label : std::to_string(r.s.value_or(0)));
    }
    const auto extra = all_labels ? std::nullopt : std::optional<std::string>(data.system_column);
    if (all_labels || all_s) {
      const auto examples = make_examples(data.table, indices, targets, extra);
      const auto model = train_tree(examples, config_.learning.tree);
      ordered_json m;
      m["family"] = std::string(to_string(ModelFamily::kTree));
      m["task"] = all_labels ? "labels" : "verdicts";
      m["accuracy"] = evaluate_accuracy(model, examples);
      m["depth"] = model.depth();
      report["model"] = m;
    } else {
      report["model"] = nullptr;
    }
  }

  const auto subset = data.table.select_rows(indices);
  {
    ordered_json notions = ordered_json::array();
    std::vector<std::string> labels;
    std::vector<std::string> truths;
    if (implied_known) {
      const auto& truth_column = data.table.column(data.truth_column);
      for (std::size_t i = 0; i < indices.size(); ++i) {
        labels.push_back(*implied[i]);
        truths.push_back(truth_column[indices[i]]);
      }
    }
    for (const auto& pair : data.pairs) {
      for (const auto notion : kAllNotions) {
        ordered_json n;
        n["notion"] = std::string(to_string(notion));
        n["attribute"] = pair.attribute;
        n["group"] = pair.group;
        n["reference"] = pair.reference;
        n["delta"] = pair.delta;
        std::optional<Rational> difference;
        bool satisfied = false;
        if (implied_known) {
          const auto fr = fairness_diff(notion, labels, truths, subset, pair);
          difference = fr.difference;
          satisfied = fr.satisfied;
        }
        n["difference"] = or_null(difference ? std::optional<double>(difference->to_double())
                                             : std::nullopt);
        n["exact"] = difference ? ordered_json(difference->to_string()) : ordered_json(nullptr);
        n["satisfied"] = difference ? ordered_json(satisfied) : ordered_json(nullptr);
        notions.push_back(n);
      }
    }
    report["notions"] = notions;
  }

  {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < used.size(); ++i) {
      labels.push_back(implied_known ? *implied[i] : std::to_string(used[i].s.value_or(0)));
    }
    const auto check = individual_fairness_check(labels, subset, data.covariance, 0.0, 0.0,
                                                 OutputMetric::kDiscrete);
    ordered_json c;
    c["basis"] = implied_known ? "labels" : "verdicts";
    c["clusters"] = check.clusters;
    c["consistent"] = check.consistent_clusters;
    c["fraction"] = check.consistency_fraction;
    report["consistency"] = c;
  }
  return report.dump();
}

std::string AuditService::export_log(const std::string& auditor) const
{
  if (auditor.empty()) {
    return log_->export_text();
  }
  std::unordered_set<std::string> sessions;
  return log_->export_text([&](const LogRecord& r) {
    if (r.kind == RecordKind::kSession && r.auditor == auditor) {
      sessions.insert(r.session);
    }
    return sessions.contains(r.session);
  });
}

std::string AuditService::state_dump() const
{
  const std::shared_lock lock(mutex_);
  std::ostringstream out;
  for (const auto& [name, d] : datasets_) {
    out << "dataset " << name << " used";
    for (std::size_t i = 0; i < d->used.size(); ++i) {
      if (d->used[i]) {
        out << ' ' << i;
      }
    }
    out << '\n';
  }
  for (const auto& [id, s] : sessions_) {
    const std::lock_guard session_lock(s->mutex);
    out << "session " << id << " auditor=" << s->auditor << " dataset=" << s->dataset
        << " subset=" << s->subset << " created=" << s->created << " cursor=" << s->cursor
        << " rows=";
    for (const auto r : s->rows) {
      out << r << ',';
    }
    out << " served=";
    for (const auto r : s->served) {
      out << r << ',';
    }
    out << '\n';
    for (const auto& j : s->judgments) {
      out << "  judgment " << j.judgment_seq << " seq=" << j.seq << ' ' << to_json_line(j) << '\n';
    }
  }
  return out.str();
}

std::vector<std::string> AuditService::dataset_names() const
{
  std::vector<std::string> names;
  for (const auto& [name, d] : datasets_) {
    names.push_back(name);
  }
  return names;
}

const ServiceDataset& AuditService::dataset(const std::string& name) const
{
  const auto it = datasets_.find(name);
  if (it == datasets_.end()) {
    throw ServiceError(ServiceErrorKind::kNotFound, "unknown dataset '" + name + "'");
  }
  return it->second->data;
}

}  // namespace lam
