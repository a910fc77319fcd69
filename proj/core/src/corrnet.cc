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

#include "crashlens/corrnet.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "crashlens/error.h"

namespace crashlens {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kRangeSlack = 1e-12;
constexpr double kPsdTol = -1e-8;

Eigen::Index Idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

[[noreturn]] void DomainFail(const std::string& what) {
  throw Error(ErrorKind::kDomain, what);
}

}  // namespace

CorrelationMatrix CorrelationMatrix::Create(Labels labels, Eigen::MatrixXd values,
                                            Check check) {
  CorrelationMatrix c;
  c.labels_ = std::move(labels);
  c.values_ = std::move(values);
  c.degenerate_.assign(c.labels_.size(), false);
  c.Validate(check);
  return c;
}

bool CorrelationMatrix::any_degenerate() const {
  return std::find(degenerate_.begin(), degenerate_.end(), true) != degenerate_.end();
}

void CorrelationMatrix::Validate(Check check) const {
  const std::size_t m = labels_.size();
  if (values_.rows() != Idx(m) || values_.cols() != Idx(m)) {
    throw Error(ErrorKind::kShape, "correlation matrix is not " + std::to_string(m) +
                                       " x " + std::to_string(m));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (values_(Idx(i), Idx(i)) != 1.0) {
      DomainFail("correlation diagonal at " + labels_[i] + " is not 1");
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      const double a = values_(Idx(i), Idx(j));
      const double b = values_(Idx(j), Idx(i));
      if (!std::isfinite(a) || !std::isfinite(b)) {
        DomainFail("non-finite correlation between " + labels_[i] + " and " + labels_[j]);
      }
      if (std::abs(a - b) > kSymmetryTol) {
        DomainFail("correlation matrix not symmetric at (" + labels_[i] + ", " +
                   labels_[j] + ")");
      }
      if (std::abs(a) > 1.0 + kRangeSlack) {
        DomainFail("correlation outside [-1, 1] at (" + labels_[i] + ", " +
                   labels_[j] + ")");
      }
    }
  }
  if (check == Check::kFull && m > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(values_,
                                                          Eigen::EigenvaluesOnly);
    const double smallest = solver.eigenvalues().minCoeff();
    if (smallest < kPsdTol) {
      DomainFail("correlation matrix not positive semidefinite (eigenvalue " +
                 std::to_string(smallest) + ")");
    }
  }
}

DistanceMatrix DistanceMatrix::Create(Labels labels, Eigen::MatrixXd values) {
  const std::size_t m = labels.size();
  if (values.rows() != Idx(m) || values.cols() != Idx(m)) {
    throw Error(ErrorKind::kShape, "distance matrix shape does not match labels");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (values(Idx(i), Idx(i)) != 0.0) DomainFail("distance diagonal is not zero");
    for (std::size_t j = i + 1; j < m; ++j) {
      const double a = values(Idx(i), Idx(j));
      if (!std::isfinite(a) || a < 0.0) {
        DomainFail("invalid distance between " + labels[i] + " and " + labels[j]);
      }
      if (std::abs(a - values(Idx(j), Idx(i))) > kSymmetryTol) {
        DomainFail("distance matrix not symmetric");
      }
    }
  }
  DistanceMatrix d;
  d.labels_ = std::move(labels);
  d.values_ = std::move(values);
  return d;
}

CorrelationMatrix CorrelationMatrixOf(const Eigen::Ref<const Eigen::MatrixXd>& samples,
                                      const Labels& labels) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index m = samples.cols();
  if (m != Idx(labels.size())) {
    throw Error(ErrorKind::kShape, "sample columns do not match labels");
  }
  if (m < 2) throw Error(ErrorKind::kSize, "correlation needs at least 2 series");
  if (n < 2) {
    throw Error(ErrorKind::kInsufficientData, "correlation needs at least 2 samples");
  }
  if (!samples.allFinite()) throw Error(ErrorKind::kData, "non-finite sample");

  Eigen::MatrixXd centered = samples.rowwise() - samples.colwise().mean();
  std::vector<bool> constant(static_cast<std::size_t>(m));
  Eigen::VectorXd norms(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    constant[static_cast<std::size_t>(j)] =
        samples.col(j).maxCoeff() == samples.col(j).minCoeff();
    norms(j) = centered.col(j).norm();
  }
  const Eigen::MatrixXd gram = centered.transpose() * centered;

  Eigen::MatrixXd values = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double rho = 0.0;
      if (!constant[static_cast<std::size_t>(i)] &&
          !constant[static_cast<std::size_t>(j)]) {
        rho = std::clamp(gram(i, j) / (norms(i) * norms(j)), -1.0, 1.0);
      }
      values(i, j) = rho;
      values(j, i) = rho;
    }
  }
  CorrelationMatrix c;
  c.labels_ = labels;
  c.values_ = std::move(values);
  c.degenerate_ = std::move(constant);
  return c;
}

CorrelationMatrix CorrelationMatrixOf(const WindowView& window) {
  return CorrelationMatrixOf(window.values(), window.table().symbols());
}

CorrelationMatrix CorrelationMatrixOf(const std::vector<std::vector<double>>& series,
                                      const Labels& labels) {
  if (series.empty()) throw Error(ErrorKind::kSize, "no series given");
  const std::size_t n = series.front().size();
  Eigen::MatrixXd samples(Idx(n), Idx(series.size()));
  for (std::size_t j = 0; j < series.size(); ++j) {
    if (series[j].size() != n) {
      throw Error(ErrorKind::kShape, "series " + std::to_string(j) + " has length " +
                                         std::to_string(series[j].size()) +
                                         ", expected " + std::to_string(n));
    }
    for (std::size_t t = 0; t < n; ++t) samples(Idx(t), Idx(j)) = series[j][t];
  }
  return CorrelationMatrixOf(samples, labels);
}

double PartialCorrelation(const CorrelationMatrix& c, std::size_t i, std::size_t j,
                          std::size_t k) {
  const std::size_t m = c.size();
  if (i >= m || j >= m || k >= m) throw Error(ErrorKind::kUsage, "index out of range");
  if (i == j || i == k || j == k) {
    throw Error(ErrorKind::kUsage, "partial correlation needs distinct indices");
  }
  const double rij = c(i, j);
  const double rik = c(i, k);
  const double rjk = c(j, k);
  const double denom = (1.0 - rik * rik) * (1.0 - rjk * rjk);
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::kDegenerateConditioning,
                "conditioning on " + c.labels()[k] + " is degenerate for (" +
                    c.labels()[i] + ", " + c.labels()[j] + ")");
  }
  return std::clamp((rij - rik * rjk) / std::sqrt(denom), -1.0, 1.0);
}

CorrelationMatrix PartialCorrelationMatrix(const CorrelationMatrix& c, std::size_t k) {
  const std::size_t m = c.size();
  if (k >= m) throw Error(ErrorKind::kUsage, "conditioning index out of range");
  if (m < 3) throw Error(ErrorKind::kSize, "partial correlation needs 3 series");
  std::vector<std::size_t> keep;
  Labels labels;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == k) continue;
    keep.push_back(i);
    labels.push_back(c.labels()[i]);
  }
  const auto r = Idx(keep.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Identity(r, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a + 1; b < r; ++b) {
      const double p = PartialCorrelation(c, keep[static_cast<std::size_t>(a)],
                                          keep[static_cast<std::size_t>(b)], k);
      values(a, b) = p;
      values(b, a) = p;
    }
  }
  return CorrelationMatrix::Create(std::move(labels), std::move(values),
                                   CorrelationMatrix::Check::kStructural);
}

double AverageUpperTriangle(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  const Eigen::Index m = values.rows();
  if (m < 2) throw Error(ErrorKind::kSize, "average needs at least 2 rows");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) sum += values(i, j);
  }
  return sum / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
}

double AverageCorrelation(const CorrelationMatrix& c) {
  return AverageUpperTriangle(c.values());
}

Eigen::MatrixXd TensorCorrelation(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  const Eigen::Index ma = Idx(a.size());
  const Eigen::Index mb = Idx(b.size());
  Eigen::MatrixXd out(ma * mb, ma * mb);
  for (Eigen::Index i = 0; i < ma; ++i) {
    for (Eigen::Index j = 0; j < ma; ++j) {
      out.block(i * mb, j * mb, mb, mb) = a.values()(i, j) * b.values();
    }
  }
  return out;
}

double TensorAverageCorrelation(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  const Eigen::Index ma = Idx(a.size());
  const Eigen::Index mb = Idx(b.size());
  const double n = static_cast<double>(ma * mb);
  if (n < 2) throw Error(ErrorKind::kSize, "tensor average needs 2 entries");
  // Entry (i*mb + r, j*mb + s) lies above the diagonal iff i < j, or i == j
  // and r < s.
  const double b_sum = b.values().sum();
  double b_upper = 0.0;
  for (Eigen::Index r = 0; r < mb; ++r) {
    for (Eigen::Index s = r + 1; s < mb; ++s) b_upper += b.values()(r, s);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < ma; ++i) {
    total += a.values()(i, i) * b_upper;
    for (Eigen::Index j = i + 1; j < ma; ++j) total += a.values()(i, j) * b_sum;
  }
  return total / (n * (n - 1.0) / 2.0);
}

HyperbolicMatrix HyperbolicMap(const CorrelationMatrix& c) {
  return HyperbolicMatrix{c.labels(), c.values().array().cosh().matrix()};
}

DistanceMatrix CorrelationDistance(const CorrelationMatrix& c) {
  Eigen::MatrixXd d = (2.0 * (1.0 - c.values().array())).max(0.0).sqrt().matrix();
  d.diagonal().setZero();
  return DistanceMatrix::Create(c.labels(), std::move(d));
}

DistanceMatrix HyperbolicDistance(const HyperbolicMatrix& h) {
  const double top = std::cosh(1.0);
  const Eigen::Index m = h.values.rows();
  if (h.values.cols() != m || m != Idx(h.labels.size())) {
    throw Error(ErrorKind::kShape, "hyperbolic matrix shape does not match labels");
  }
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = h.values(i, j);
      if (!(v >= 1.0 - kRangeSlack && v <= top + kRangeSlack)) {
        DomainFail("hyperbolic entry " + std::to_string(v) + " outside [1, cosh(1)]");
      }
      d(i, j) = i == j ? 0.0 : std::sqrt(std::max(0.0, 2.0 * (top - v)));
    }
  }
  return DistanceMatrix::Create(h.labels, std::move(d));
}

double EquilibriumIndicator(const CorrelationMatrix& c) {
  return c.values().partialPivLu().determinant();
}

std::string MatrixCsv(const Labels& labels,
                      const Eigen::Ref<const Eigen::MatrixXd>& values) {
  std::string out = "label";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", values(i, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace crashlens
