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

#ifndef PIDAQUAD_SDSA_HPP
#define PIDAQUAD_SDSA_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pidaquad::sdsa {

/// Axis-aligned search box. An empty box (size 0) means unbounded.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  bool bounded() const { return lower.size() > 0; }
  Eigen::VectorXd clip(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x) const;
};

/// How the per-simplex centroids are combined into the global centroid.
enum class CentroidMode { kSum, kMean };
/// Whether the Gaussian multiplier of the worst-point replacement is drawn
/// per coordinate or as one scalar.
enum class PerturbationMode { kPerCoordinate, kScalar };

struct SdsaConfig {
  double a_max = 10.5907;
  double alpha_max = 9.7323;
  double gamma_max = 9.9185;
  double beta_max = 0.4679;
  int i_max = 979;
  int n_simplexes = 2;
  Box bounds;
  std::uint64_t seed = 1;

  CentroidMode centroid_mode = CentroidMode::kSum;
  PerturbationMode perturbation = PerturbationMode::kPerCoordinate;
  double stall_tolerance = 1e-12;
  int stall_iterations = 50;
  /// Optional warm start; becomes the base vertex of the first simplex.
  std::optional<Eigen::VectorXd> initial_point;
  /// Concurrent objective evaluations across simplexes (1 = sequential).
  int jobs = 1;

  /// Throws std::invalid_argument on out-of-range coefficients or bounds.
  void validate() const;
};

struct Vertex {
  Eigen::VectorXd point;
  double cost = 0.0;
};

struct Simplex {
  std::vector<Vertex> vertices;  // dimension + 1

  std::size_t best_index() const;
  std::size_t worst_index() const;
  std::size_t second_worst_index() const;
  /// Mean of all vertices except the worst.
  Eigen::VectorXd centroid_excluding_worst() const;
};

struct DualSimplexState {
  std::vector<Simplex> simplexes;
  Eigen::VectorXd global_centroid;
  Eigen::MatrixXd covariance;
  Vertex best;
  int iteration = 0;
};

struct SdsaResult {
  Eigen::VectorXd best_point;
  double best_cost = 0.0;
  std::vector<double> history;  // best cost, index 0 = after initialization
  int iterations = 0;
  long evaluations = 0;
};

/// Raised when the objective throws or returns NaN.
class ObjectiveError : public std::runtime_error {
 public:
  ObjectiveError(const std::string& what, Eigen::VectorXd point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const Eigen::VectorXd& point() const { return point_; }

 private:
  Eigen::VectorXd point_;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

Eigen::VectorXd reflect(const Eigen::VectorXd& worst, const Eigen::VectorXd& centroid,
                        double alpha, const Box& box = {});
Eigen::VectorXd expand(const Eigen::VectorXd& reflected, const Eigen::VectorXd& centroid,
                       double gamma, const Box& box = {});
Eigen::VectorXd contract(const Eigen::VectorXd& worst, const Eigen::VectorXd& centroid,
                         double beta);

/// worst + g .* global_centroid, clipped to the box.
Eigen::VectorXd stochastic_replace(const Eigen::VectorXd& worst,
                                   const Eigen::VectorXd& global_centroid,
                                   const Eigen::VectorXd& g, const Box& box = {});

/// Draws the replacement multiplier from N(0, covariance).
Eigen::VectorXd sample_perturbation(const Eigen::MatrixXd& covariance, PerturbationMode mode,
                                    std::mt19937_64& rng);

Eigen::VectorXd global_centroid(const DualSimplexState& state,
                                CentroidMode mode = CentroidMode::kSum);

/// Sample covariance over every vertex of every simplex plus 1e-9 I.
Eigen::MatrixXd vertex_covariance(const DualSimplexState& state);

SdsaResult optimize(const Objective& objective, const SdsaConfig& config);

}  // namespace pidaquad::sdsa

#endif  // PIDAQUAD_SDSA_HPP
