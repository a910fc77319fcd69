// Copyright 2026 The Crashlens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRASHLENS_CORRNET_H_
#define CRASHLENS_CORRNET_H_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "crashlens/marketdata.h"

namespace crashlens {

using Labels = std::vector<std::string>;

// Symmetric m x m matrix with unit diagonal, entries in [-1, 1] and no
// eigenvalue below -1e-8.
class CorrelationMatrix {
 public:
  enum class Check { kStructural, kFull };

  // Validates and builds. kStructural skips the eigenvalue check.
  static CorrelationMatrix Create(Labels labels, Eigen::MatrixXd values,
                                  Check check = Check::kFull);

  const Labels& labels() const { return labels_; }
  const Eigen::MatrixXd& values() const { return values_; }
  std::size_t size() const { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // One flag per label: the source series was constant, so every
  // off-diagonal entry in its row is 0 by convention.
  const std::vector<bool>& degenerate() const { return degenerate_; }
  bool any_degenerate() const;

  // Re-runs the invariant checks; throws kDomain on violation.
  void Validate(Check check = Check::kFull) const;

 private:
  friend CorrelationMatrix CorrelationMatrixOf(
      const Eigen::Ref<const Eigen::MatrixXd>&, const Labels&);

  CorrelationMatrix() = default;

  Labels labels_;
  Eigen::MatrixXd values_;
  std::vector<bool> degenerate_;
};

// Symmetric, zero diagonal, non-negative.
class DistanceMatrix {
 public:
  static DistanceMatrix Create(Labels labels, Eigen::MatrixXd values);

  const Labels& labels() const { return labels_; }
  const Eigen::MatrixXd& values() const { return values_; }
  std::size_t size() const { return labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  DistanceMatrix() = default;

  Labels labels_;
  Eigen::MatrixXd values_;
};

// Elementwise cosh of a correlation matrix; entries in [1, cosh(1)].
struct HyperbolicMatrix {
  Labels labels;
  Eigen::MatrixXd values;
};

// Pearson correlation of the columns of `samples` (rows are observations).
// A constant column correlates 0 with everything and is flagged degenerate.
CorrelationMatrix CorrelationMatrixOf(
    const Eigen::Ref<const Eigen::MatrixXd>& samples, const Labels& labels);
CorrelationMatrix CorrelationMatrixOf(const WindowView& window);
// Full-length aligned series; all must have the same length.
CorrelationMatrix CorrelationMatrixOf(const std::vector<std::vector<double>>& series,
                                      const Labels& labels);

// First-order partial correlation of i and j given k.
double PartialCorrelation(const CorrelationMatrix& c, std::size_t i,
                          std::size_t j, std::size_t k);

// Partial correlations of every remaining pair given k; the result drops
// label k.
CorrelationMatrix PartialCorrelationMatrix(const CorrelationMatrix& c,
                                           std::size_t k);

// Mean of the strictly upper triangle.
double AverageCorrelation(const CorrelationMatrix& c);
double AverageUpperTriangle(const Eigen::Ref<const Eigen::MatrixXd>& values);

// Kronecker product: block (i, j) is a(i, j) * b.
Eigen::MatrixXd TensorCorrelation(const CorrelationMatrix& a,
                                  const CorrelationMatrix& b);

// Mean of the strictly upper triangle of a (x) b, summed block by block
// without materializing the product.
double TensorAverageCorrelation(const CorrelationMatrix& a,
                                const CorrelationMatrix& b);

HyperbolicMatrix HyperbolicMap(const CorrelationMatrix& c);

// d = sqrt(2 (1 - rho)), zero diagonal.
DistanceMatrix CorrelationDistance(const CorrelationMatrix& c);

// d = sqrt(2 (cosh(1) - h)), zero diagonal. Throws kDomain when an entry is
// outside [1, cosh(1)] by more than 1e-12.
DistanceMatrix HyperbolicDistance(const HyperbolicMatrix& h);

// det(C). Near 0 signals strongly co-moving assets.
double EquilibriumIndicator(const CorrelationMatrix& c);

// Dense CSV with a label header row and a label first column.
std::string MatrixCsv(const Labels& labels,
                      const Eigen::Ref<const Eigen::MatrixXd>& values);

}  // namespace crashlens

#endif  // CRASHLENS_CORRNET_H_
