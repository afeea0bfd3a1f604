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

#ifndef PIDAQUAD_STABILITY_HPP
#define PIDAQUAD_STABILITY_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pidaquad/linearization.hpp"
#include "pidaquad/pida_control.hpp"

namespace pidaquad::stability {

class NotHurwitzError : public std::domain_error {
 public:
  explicit NotHurwitzError(const std::string& what) : std::domain_error(what) {}
};

/// Symmetry tolerance for Q and P checks, relative to the largest entry.
inline constexpr double kSymmetryTolerance = 1e-9;

struct StabilityReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
  bool is_hurwitz = false;
  std::optional<Eigen::MatrixXd> lyapunov_p;
  std::optional<double> p_min_eigenvalue;
  std::optional<double> lyapunov_residual;  // ||A'P + PA + Q||_F / ||Q||_F
};

struct DefinitenessReport {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// lambda_min |x|^2 <= x'Px <= lambda_max |x|^2 on random probes.
  bool rayleigh_bounds_hold = false;
};

/// Full spectrum sorted by real part, descending (ties by imaginary part).
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A);

double max_real_part(const std::vector<std::complex<double>>& spectrum);

/// Solves A'P + PA = -Q by Kronecker vectorization. Throws NotHurwitzError
/// when A has an eigenvalue with non-negative real part and
/// std::invalid_argument when Q is not square, symmetric, or sized like A.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

DefinitenessReport is_positive_definite(const Eigen::MatrixXd& P, int probes = 64);

/**
 * Closed-loop state matrix of a tracking-augmented plant under per-channel
 * PIDA control.
 *
 * `augmented` must come from augment_tracking, with as many inputs as
 * outputs; channel i drives input i from output i. The plant's integral
 * states serve as the controller integrators; each channel adds the two
 * derivative-filter states of the k_d s L(s) + k_a (s L(s))^2 cascade.
 * State order: [x, integrals, first filter states, second filter states].
 */
Eigen::MatrixXd closed_loop_matrix(const LinearModel& augmented,
                                   std::span<const PidaGains> gains);

/// Spectrum, Hurwitz flag and, when Hurwitz, the Lyapunov certificate for Q.
StabilityReport analyze(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);
StabilityReport analyze(const Eigen::MatrixXd& A);

}  // namespace pidaquad::stability

#endif  // PIDAQUAD_STABILITY_HPP
