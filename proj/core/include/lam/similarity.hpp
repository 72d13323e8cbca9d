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

#ifndef LAM_SIMILARITY_HPP_
#define LAM_SIMILARITY_HPP_

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lam/data_table.hpp"
#include "lam/error.hpp"
#include "lam/output_metric.hpp"

namespace lam
{

/// Relative singular-value cutoff of the pseudo-inverse.
inline constexpr double kPseudoInverseCutoff = 1e-10;
/// Distances at or below this count as zero.
inline constexpr double kZeroDistanceTolerance = 1e-9;

/// Sample covariance of an encoded table and the operator used as C^-1.
///
/// One-hot blocks sum to one, so C is rank deficient for any table with a
/// categorical feature. The inverse is then the Moore-Penrose
/// pseudo-inverse: eigen-directions whose |eigenvalue| falls at or below
/// kPseudoInverseCutoff times the largest are dropped.
struct CovarianceModel
{
  std::vector<std::string> feature_order;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  ///< symmetric, (n - 1) normalised
  Eigen::MatrixXd precision;   ///< inverse or pseudo-inverse
  Eigen::VectorXd eigenvalues; ///< of the covariance, ascending
  std::size_t rank = 0;
  bool singular = false;

  std::size_t dimension() const { return feature_order.size(); }
};

/// Throws DataError with fewer than two rows.
CovarianceModel fit_covariance(const Eigen::MatrixXd& rows, std::vector<std::string> names);
/// Uses the table's encoded view; throws ConfigError when it has none.
CovarianceModel fit_covariance(const DataTable& encoded);
/// Wraps a given covariance (symmetrised) without data; the mean is zero.
CovarianceModel model_from_covariance(const Eigen::MatrixXd& covariance,
                                      std::vector<std::string> names = {});

/// sqrt((x - y)^T C^-1 (x - y)). Throws ConfigError on a dimension mismatch.
double mahalanobis(const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y, const CovarianceModel& model);

/// Partition of the rows into zero-distance classes.
struct ClusterIndex
{
  std::vector<RowId> row_ids;                ///< table order
  std::vector<std::size_t> cluster_of;       ///< per table row
  std::vector<std::vector<RowId>> members;   ///< per cluster, table order
  std::vector<std::vector<std::size_t>> member_rows;  ///< same, as row indices

  std::size_t count() const { return members.size(); }
  /// Two tab-separated columns, `row_id cluster_id`, with a header line.
  std::string to_text() const;
};

/// Raised when "distance <= tolerance" is not transitive on the data.
class NonTransitiveLinkage : public DataError
{
public:
  NonTransitiveLinkage(RowId a, RowId b, RowId c, double distance_ac);
  std::array<RowId, 3> triple() const { return triple_; }

private:
  std::array<RowId, 3> triple_;
};

/// Groups rows whose pairwise distance is within `tolerance`. Cluster ids
/// follow the first appearance of a member in table order.
ClusterIndex build_clusters(const DataTable& encoded, const CovarianceModel& model,
                            double tolerance = kZeroDistanceTolerance);

struct IfViolation
{
  RowId first = 0;
  RowId second = 0;
  double input_distance = 0.0;
  double output_distance = 0.0;
};

struct IndividualFairnessReport
{
  double kappa = 0.0;
  double delta = 0.0;
  std::vector<IfViolation> violations;  ///< first `max_recorded` pairs
  std::size_t violation_count = 0;      ///< all violating pairs
  std::size_t clusters = 0;
  std::size_t consistent_clusters = 0;
  double consistency_fraction = 1.0;    ///< consistent_clusters / clusters

  bool fair() const { return violation_count == 0; }
};

/// Checks d(label_i, label_j) <= delta for every pair with D(x_i, x_j) <=
/// kappa (pairs within `zero_tolerance` count as kappa-close when kappa is
/// 0). A zero-distance cluster is consistent when none of its rows takes
/// part in a violation; with kappa = 0 and delta = 0 that is exactly "all
/// labels in the cluster are equal".
IndividualFairnessReport individual_fairness_check(std::span<const std::string> labels,
                                                   const DataTable& encoded,
                                                   const CovarianceModel& model, double kappa,
                                                   double delta, OutputMetric metric,
                                                   double zero_tolerance = kZeroDistanceTolerance,
                                                   std::size_t max_recorded = 1000);

}  // namespace lam

#endif  // LAM_SIMILARITY_HPP_
