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

#include "lam/similarity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace lam
{
namespace
{

void symmetrize(Eigen::MatrixXd& m)
{
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      m(j, i) = m(i, j);
    }
  }
}

void attach_inverse(CovarianceModel& model)
{
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.covariance);
  if (solver.info() != Eigen::Success) {
    throw DataError("eigen-decomposition of the covariance failed");
  }
  model.eigenvalues = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const double largest = model.eigenvalues.size() == 0 ? 0.0 : model.eigenvalues.cwiseAbs().maxCoeff();
  const double cutoff = kPseudoInverseCutoff * largest;
  const auto n = model.covariance.rows();
  model.precision = Eigen::MatrixXd::Zero(n, n);
  model.rank = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = model.eigenvalues(k);
    if (largest == 0.0 || std::fabs(lambda) <= cutoff) {
      continue;
    }
    model.precision.noalias() += (1.0 / lambda) * vectors.col(k) * vectors.col(k).transpose();
    ++model.rank;
  }
  symmetrize(model.precision);
  model.singular = model.rank < static_cast<std::size_t>(n);
}

/// Distinct encoded rows in first-appearance order.
struct UniqueRows
{
  std::vector<Eigen::VectorXd> points;
  std::vector<std::vector<std::size_t>> rows;  ///< table rows per point
};

UniqueRows unique_rows(const Eigen::MatrixXd& matrix)
{
  UniqueRows out;
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<double> key(static_cast<std::size_t>(matrix.cols()));
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      key[static_cast<std::size_t>(c)] = matrix(r, c);
    }
    const auto [it, inserted] = seen.emplace(key, out.points.size());
    if (inserted) {
      out.points.emplace_back(matrix.row(r).transpose());
      out.rows.emplace_back();
    }
    out.rows[it->second].push_back(static_cast<std::size_t>(r));
  }
  return out;
}

Eigen::MatrixXd pairwise(const UniqueRows& unique, const CovarianceModel& model)
{
  const auto k = static_cast<Eigen::Index>(unique.points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      d(i, j) = mahalanobis(unique.points[static_cast<std::size_t>(i)],
                            unique.points[static_cast<std::size_t>(j)], model);
      d(j, i) = d(i, j);
    }
  }
  return d;
}

const EncodedView& require_encoding(const DataTable& table, const CovarianceModel& model)
{
  const auto* view = table.encoded();
  if (view == nullptr) {
    throw ConfigError("table has no encoded view; run one_hot_encode first");
  }
  if (static_cast<std::size_t>(view->matrix.cols()) != model.dimension()) {
    throw ConfigError("encoded width " + std::to_string(view->matrix.cols()) +
                      " does not match covariance dimension " +
                      std::to_string(model.dimension()));
  }
  return *view;
}

struct Linkage
{
  std::vector<std::size_t> component;  ///< per unique point
  std::size_t components = 0;
};

/// Union of points within tolerance, checked for transitivity.
Linkage link(const UniqueRows& unique, const Eigen::MatrixXd& d, double tolerance,
             const DataTable& table)
{
  const auto k = unique.points.size();
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  Linkage out;
  out.component.assign(k, kUnset);
  std::vector<std::size_t> parent(k, kUnset);
  for (std::size_t start = 0; start < k; ++start) {
    if (out.component[start] != kUnset) {
      continue;
    }
    const std::size_t id = out.components++;
    std::vector<std::size_t> members;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    out.component[start] = id;
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      members.push_back(u);
      for (std::size_t v = 0; v < k; ++v) {
        if (out.component[v] == kUnset &&
            d(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) <= tolerance) {
          out.component[v] = id;
          parent[v] = u;
          frontier.push(v);
        }
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto a = members[i];
        const auto c = members[j];
        const double dist = d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
        if (dist > tolerance) {
          // c was reached through parent[c], which is within tolerance of c.
          const auto b = parent[c] != kUnset ? parent[c] : a;
          throw NonTransitiveLinkage(table.id(unique.rows[a].front()),
                                     table.id(unique.rows[b].front()),
                                     table.id(unique.rows[c].front()), dist);
        }
      }
    }
  }
  return out;
}

ClusterIndex make_index(const DataTable& table, const UniqueRows& unique, const Linkage& linkage)
{
  ClusterIndex index;
  index.row_ids = table.ids();
  index.cluster_of.assign(table.rows(), 0);
  std::vector<std::size_t> point_of(table.rows());
  for (std::size_t p = 0; p < unique.rows.size(); ++p) {
    for (const auto r : unique.rows[p]) {
      point_of[r] = p;
    }
  }
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> renumber(linkage.components, kUnset);
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto comp = linkage.component[point_of[r]];
    if (renumber[comp] == kUnset) {
      renumber[comp] = index.members.size();
      index.members.emplace_back();
      index.member_rows.emplace_back();
    }
    const auto cluster = renumber[comp];
    index.cluster_of[r] = cluster;
    index.members[cluster].push_back(table.id(r));
    index.member_rows[cluster].push_back(r);
  }
  return index;
}

}  // namespace

CovarianceModel fit_covariance(const Eigen::MatrixXd& rows, std::vector<std::string> names)
{
  if (rows.rows() < 2) {
    throw DataError("covariance needs at least 2 rows, got " + std::to_string(rows.rows()));
  }
  if (names.empty()) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      names.push_back("x" + std::to_string(c));
    }
  }
  if (names.size() != static_cast<std::size_t>(rows.cols())) {
    throw ConfigError("feature name count does not match matrix width");
  }
  CovarianceModel model;
  model.feature_order = std::move(names);
  model.mean = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  const auto n = rows.cols();
  model.covariance.resize(n, n);
  const double scale = 1.0 / static_cast<double>(rows.rows() - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      model.covariance(i, j) = centered.col(i).dot(centered.col(j)) * scale;
    }
  }
  symmetrize(model.covariance);
  attach_inverse(model);
  return model;
}

CovarianceModel fit_covariance(const DataTable& encoded)
{
  const auto* view = encoded.encoded();
  if (view == nullptr) {
    throw ConfigError("table has no encoded view; run one_hot_encode first");
  }
  return fit_covariance(view->matrix, view->column_names);
}

CovarianceModel model_from_covariance(const Eigen::MatrixXd& covariance,
                                      std::vector<std::string> names)
{
  if (covariance.rows() != covariance.cols()) {
    throw ConfigError("covariance must be square");
  }
  if (names.empty()) {
    for (Eigen::Index c = 0; c < covariance.cols(); ++c) {
      names.push_back("x" + std::to_string(c));
    }
  }
  CovarianceModel model;
  model.feature_order = std::move(names);
  model.mean = Eigen::VectorXd::Zero(covariance.rows());
  model.covariance = covariance;
  symmetrize(model.covariance);
  attach_inverse(model);
  return model;
}

double mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y, const CovarianceModel& model)
{
  const auto n = static_cast<Eigen::Index>(model.dimension());
  if (x.size() != n || y.size() != n) {
    throw ConfigError("mahalanobis: vectors of size " + std::to_string(x.size()) + " and " +
                      std::to_string(y.size()) + " for a model of dimension " +
                      std::to_string(n));
  }
  const Eigen::VectorXd diff = x - y;
  const double squared = diff.dot(model.precision * diff);
  return squared > 0.0 ? std::sqrt(squared) : 0.0;
}

NonTransitiveLinkage::NonTransitiveLinkage(RowId a, RowId b, RowId c, double distance_ac)
    : DataError("non-transitive zero-distance linkage: rows " + std::to_string(a) + " and " +
                std::to_string(c) + " are both linked through row " + std::to_string(b) +
                " but are " + std::to_string(distance_ac) + " apart"),
      triple_{a, b, c}
{
}

std::string ClusterIndex::to_text() const
{
  std::ostringstream out;
  out << "row_id\tcluster_id\n";
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    out << row_ids[r] << '\t' << cluster_of[r] << '\n';
  }
  return out.str();
}

ClusterIndex build_clusters(const DataTable& encoded, const CovarianceModel& model,
                            double tolerance)
{
  if (tolerance < 0.0) {
    throw ConfigError("cluster tolerance must be nonnegative");
  }
  const auto& view = require_encoding(encoded, model);
  const auto unique = unique_rows(view.matrix);
  const auto d = pairwise(unique, model);
  return make_index(encoded, unique, link(unique, d, tolerance, encoded));
}

IndividualFairnessReport individual_fairness_check(std::span<const std::string> labels,
                                                   const DataTable& encoded,
                                                   const CovarianceModel& model, double kappa,
                                                   double delta, OutputMetric metric,
                                                   double zero_tolerance, std::size_t max_recorded)
{
  if (labels.size() != encoded.rows()) {
    throw ConfigError("individual fairness: " + std::to_string(labels.size()) +
                      " labels for " + std::to_string(encoded.rows()) + " rows");
  }
  const auto& view = require_encoding(encoded, model);
  const auto unique = unique_rows(view.matrix);
  const auto d = pairwise(unique, model);
  const auto clusters = make_index(encoded, unique, link(unique, d, zero_tolerance, encoded));

  IndividualFairnessReport report;
  report.kappa = kappa;
  report.delta = delta;

  // Rows of each unique point bucketed by label.
  const auto k = unique.points.size();
  std::vector<std::map<std::string, std::vector<std::size_t>>> by_label(k);
  for (std::size_t p = 0; p < k; ++p) {
    for (const auto r : unique.rows[p]) {
      by_label[p][labels[r]].push_back(r);
    }
  }

  std::vector<bool> involved(encoded.rows(), false);
  auto record = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                    double input_d, double output_d) {
    report.violation_count += a.size() * b.size();
    for (const auto i : a) {
      involved[i] = true;
    }
    for (const auto j : b) {
      involved[j] = true;
    }
    for (std::size_t x = 0; x < a.size() && report.violations.size() < max_recorded; ++x) {
      for (std::size_t y = 0; y < b.size() && report.violations.size() < max_recorded; ++y) {
        report.violations.push_back({encoded.id(a[x]), encoded.id(b[y]), input_d, output_d});
      }
    }
  };

  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = u; v < k; ++v) {
      const double input_d = d(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (!(input_d <= kappa || input_d <= zero_tolerance)) {
        continue;
      }
      for (auto i = by_label[u].begin(); i != by_label[u].end(); ++i) {
        auto j = u == v ? std::next(i) : by_label[v].begin();
        for (; j != by_label[v].end(); ++j) {
          const double output_d = output_distance(i->first, j->first, metric);
          if (output_d > delta) {
            record(i->second, j->second, input_d, output_d);
          }
        }
      }
    }
  }

  report.clusters = clusters.count();
  for (const auto& rows : clusters.member_rows) {
    const bool clean =
        std::none_of(rows.begin(), rows.end(), [&involved](std::size_t r) { return involved[r]; });
    report.consistent_clusters += clean ? 1 : 0;
  }
  report.consistency_fraction =
      report.clusters == 0 ? 1.0
                           : static_cast<double>(report.consistent_clusters) /
                                 static_cast<double>(report.clusters);
  return report;
}

}  // namespace lam
