/*
 Copyright 2026 The pidaquad Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "pidaquad/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace pidaquad::stability {

namespace {

void require_square(const Eigen::MatrixXd& M, const char* what) {
  if (M.rows() != M.cols()) {
    std::ostringstream os;
    os << what << " must be square (got " << M.rows() << "x" << M.cols() << ")";
    throw std::invalid_argument(os.str());
  }
}

bool is_symmetric(const Eigen::MatrixXd& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A) {
  require_square(A, "eigenvalues: matrix");
  if (!A.allFinite()) throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
  std::vector<std::complex<double>> out;
  if (A.rows() == 0) return out;
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver failed");
  const Eigen::VectorXcd values = solver.eigenvalues();
  out.assign(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

double max_real_part(const std::vector<std::complex<double>>& spectrum) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& z : spectrum) m = std::max(m, z.real());
  return m;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  require_square(A, "solve_lyapunov: A");
  require_square(Q, "solve_lyapunov: Q");
  if (A.rows() != Q.rows()) throw std::invalid_argument("solve_lyapunov: A and Q sizes differ");
  if (!is_symmetric(Q)) throw std::invalid_argument("solve_lyapunov: Q is not symmetric");
  const double lead = max_real_part(eigenvalues(A));
  if (!(lead < 0.0)) {
    std::ostringstream os;
    os << "solve_lyapunov: A is not Hurwitz (max real part " << lead << ")";
    throw NotHurwitzError(os.str());
  }

  // Column-major vec: vec(A'P) = (I kron A') vec(P), vec(PA) = (A' kron I) vec(P).
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd At = A.transpose();
  Eigen::MatrixXd K(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K.block(i * n, j * n, n, n) = I(i, j) * At + At(i, j) * I;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
  const Eigen::VectorXd vecP = K.partialPivLu().solve(rhs);
  const Eigen::MatrixXd P = Eigen::Map<const Eigen::MatrixXd>(vecP.data(), n, n);
  return 0.5 * (P + P.transpose());
}

DefinitenessReport is_positive_definite(const Eigen::MatrixXd& P, int probes) {
  require_square(P, "is_positive_definite: P");
  if (!is_symmetric(P)) throw std::invalid_argument("is_positive_definite: P is not symmetric");
  DefinitenessReport report;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(P, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.max_eigenvalue = solver.eigenvalues().maxCoeff();
  report.positive_definite = report.min_eigenvalue > 0.0;

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double slack = 1e-9 * std::max(1.0, std::abs(report.max_eigenvalue));
  report.rayleigh_bounds_hold = true;
  for (int k = 0; k < probes; ++k) {
    Eigen::VectorXd x(P.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    const double n2 = x.squaredNorm();
    const double v = x.dot(P * x);
    if (v < report.min_eigenvalue * n2 - slack * n2 || v > report.max_eigenvalue * n2 + slack * n2) {
      report.rayleigh_bounds_hold = false;
    }
  }
  return report;
}

Eigen::MatrixXd closed_loop_matrix(const LinearModel& augmented, std::span<const PidaGains> gains) {
  augmented.validate();
  const Eigen::Index na = augmented.states();
  const Eigen::Index p = augmented.outputs();
  if (augmented.inputs() != p) {
    throw std::invalid_argument("closed_loop_matrix: plant must have as many inputs as outputs");
  }
  if (static_cast<Eigen::Index>(gains.size()) != p) {
    throw std::invalid_argument("closed_loop_matrix: one gain set per channel required");
  }
  if (na <= p) throw std::invalid_argument("closed_loop_matrix: plant has no integral states");
  const Eigen::Index n = na - p;  // original plant states; integrals follow
  const Eigen::Index N = na + 2 * p;

  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(p, N);
  Eigen::MatrixXd first = Eigen::MatrixXd::Zero(p, N);   // D_i
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(p, N);  // A_i
  for (Eigen::Index i = 0; i < p; ++i) {
    const PidaGains& g = gains[static_cast<std::size_t>(i)];
    g.validate();
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(N);
    e.head(na) = -augmented.C.row(i);
    Eigen::RowVectorXd d = e / g.tf;
    d(na + i) -= 1.0 / g.tf;
    Eigen::RowVectorXd a = d / g.tf;
    a(na + p + i) -= 1.0 / g.tf;
    first.row(i) = d;
    second.row(i) = a;
    U.row(i) = g.kp * e + g.kd * d + g.ka * a;
    U(i, n + i) += g.ki;
  }

  Eigen::MatrixXd Acl = Eigen::MatrixXd::Zero(N, N);
  Acl.topLeftCorner(na, na) = augmented.A;
  Acl.topRows(na) += augmented.B * U;
  Acl.middleRows(na, p) = first;
  Acl.bottomRows(p) = second;
  return Acl;
}

StabilityReport analyze(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  StabilityReport report;
  report.eigenvalues = eigenvalues(A);
  report.max_real_part = max_real_part(report.eigenvalues);
  report.is_hurwitz = report.max_real_part < 0.0;
  if (report.is_hurwitz) {
    Eigen::MatrixXd P = solve_lyapunov(A, Q);
    report.p_min_eigenvalue = is_positive_definite(P).min_eigenvalue;
    report.lyapunov_residual =
        (A.transpose() * P + P * A + Q).norm() / std::max(Q.norm(), 1e-300);
    report.lyapunov_p = std::move(P);
  }
  return report;
}

StabilityReport analyze(const Eigen::MatrixXd& A) {
  return analyze(A, Eigen::MatrixXd::Identity(A.rows(), A.cols()));
}

}  // namespace pidaquad::stability
