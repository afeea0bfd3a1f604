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

#include "pidaquad/sdsa.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace pidaquad::sdsa {

Eigen::VectorXd Box::clip(const Eigen::VectorXd& x) const {
  if (!bounded()) return x;
  return x.cwiseMax(lower).cwiseMin(upper);
}

bool Box::contains(const Eigen::VectorXd& x) const {
  if (!bounded()) return true;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

void SdsaConfig::validate() const {
  if (!(alpha_max > 0.0)) throw std::invalid_argument("sdsa: alpha_max must be > 0");
  if (!(gamma_max > 1.0)) throw std::invalid_argument("sdsa: gamma_max must be > 1");
  if (!(beta_max >= 0.0 && beta_max <= 1.0)) {
    throw std::invalid_argument("sdsa: beta_max must lie in [0, 1]");
  }
  if (!(a_max > 0.0)) throw std::invalid_argument("sdsa: a_max must be > 0");
  if (i_max < 1) throw std::invalid_argument("sdsa: i_max must be >= 1");
  if (n_simplexes < 2) throw std::invalid_argument("sdsa: n_simplexes must be >= 2");
  if (!bounds.bounded() || bounds.lower.size() != bounds.upper.size()) {
    throw std::invalid_argument("sdsa: bounds must be set with matching lower/upper sizes");
  }
  if ((bounds.upper.array() <= bounds.lower.array()).any()) {
    throw std::invalid_argument("sdsa: every upper bound must exceed its lower bound");
  }
  if (initial_point && (initial_point->size() != bounds.lower.size() ||
                        !bounds.contains(*initial_point))) {
    throw std::invalid_argument("sdsa: initial point must lie inside the bounds");
  }
  if (jobs < 1) throw std::invalid_argument("sdsa: jobs must be >= 1");
}

std::size_t Simplex::best_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i].cost < vertices[best].cost) best = i;
  }
  return best;
}

// Ties resolve to the highest index so that worst != best whenever there is
// more than one vertex.
std::size_t Simplex::worst_index() const {
  std::size_t worst = vertices.size() - 1;
  for (std::size_t i = vertices.size() - 1; i-- > 0;) {
    if (vertices[i].cost > vertices[worst].cost) worst = i;
  }
  return worst;
}

std::size_t Simplex::second_worst_index() const {
  const std::size_t worst = worst_index();
  std::size_t second = worst == 0 ? 1 : 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i != worst && vertices[i].cost > vertices[second].cost) second = i;
  }
  return second;
}

Eigen::VectorXd Simplex::centroid_excluding_worst() const {
  const std::size_t worst = worst_index();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(vertices.front().point.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i != worst) sum += vertices[i].point;
  }
  return sum / static_cast<double>(vertices.size() - 1);
}

Eigen::VectorXd reflect(const Eigen::VectorXd& worst, const Eigen::VectorXd& centroid,
                        double alpha, const Box& box) {
  return box.clip((1.0 + alpha) * centroid - alpha * worst);
}

Eigen::VectorXd expand(const Eigen::VectorXd& reflected, const Eigen::VectorXd& centroid,
                       double gamma, const Box& box) {
  return box.clip(gamma * reflected + (1.0 - gamma) * centroid);
}

Eigen::VectorXd contract(const Eigen::VectorXd& worst, const Eigen::VectorXd& centroid,
                         double beta) {
  return beta * worst + (1.0 - beta) * centroid;
}

Eigen::VectorXd stochastic_replace(const Eigen::VectorXd& worst,
                                   const Eigen::VectorXd& global_centroid,
                                   const Eigen::VectorXd& g, const Box& box) {
  if (g.size() == 1) return box.clip(worst + g(0) * global_centroid);
  return box.clip(worst + g.cwiseProduct(global_centroid));
}

Eigen::VectorXd sample_perturbation(const Eigen::MatrixXd& covariance, PerturbationMode mode,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (mode == PerturbationMode::kScalar) {
    // Scalar draw with the mean coordinate variance.
    const double sigma = std::sqrt(covariance.diagonal().mean());
    Eigen::VectorXd g(1);
    g(0) = sigma * normal(rng);
    return g;
  }
  Eigen::VectorXd z(covariance.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    return covariance.diagonal().cwiseMax(0.0).cwiseSqrt().cwiseProduct(z);
  }
  return llt.matrixL() * z;
}

Eigen::VectorXd global_centroid(const DualSimplexState& state, CentroidMode mode) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(state.simplexes.front().vertices.front().point.size());
  for (const Simplex& s : state.simplexes) sum += s.centroid_excluding_worst();
  if (mode == CentroidMode::kMean) sum /= static_cast<double>(state.simplexes.size());
  return sum;
}

Eigen::MatrixXd vertex_covariance(const DualSimplexState& state) {
  const Eigen::Index dim = state.simplexes.front().vertices.front().point.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  double count = 0.0;
  for (const Simplex& s : state.simplexes) {
    for (const Vertex& v : s.vertices) {
      mean += v.point;
      count += 1.0;
    }
  }
  mean /= count;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const Simplex& s : state.simplexes) {
    for (const Vertex& v : s.vertices) {
      const Eigen::VectorXd d = v.point - mean;
      cov += d * d.transpose();
    }
  }
  cov /= std::max(1.0, count - 1.0);
  cov += 1e-9 * Eigen::MatrixXd::Identity(dim, dim);
  return cov;
}

namespace {

struct Coefficients {
  double alpha;
  double gamma;
  double beta;
};

class Evaluator {
 public:
  explicit Evaluator(const Objective& objective) : objective_(objective) {}

  double operator()(const Eigen::VectorXd& x) const {
    double value = 0.0;
    try {
      value = objective_(x);
    } catch (const std::exception& e) {
      throw ObjectiveError(describe(x, e.what()), x);
    }
    if (std::isnan(value)) throw ObjectiveError(describe(x, "objective returned NaN"), x);
    return value;
  }

 private:
  static std::string describe(const Eigen::VectorXd& x, const std::string& why) {
    std::ostringstream os;
    os.precision(17);
    os << "objective evaluation failed at [";
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
    os << "]: " << why;
    return os.str();
  }

  const Objective& objective_;
};

Simplex initial_simplex(const Eigen::VectorXd& base, const SdsaConfig& config,
                        const Evaluator& eval) {
  const Box& box = config.bounds;
  const Eigen::Index dim = base.size();
  Simplex s;
  s.vertices.push_back({base, eval(base)});
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double width = box.upper(i) - box.lower(i);
    const double step = std::min(config.a_max, 0.5 * width);
    Eigen::VectorXd x = base;
    // Step toward whichever bound is farther so the vertex stays distinct.
    x(i) += (box.upper(i) - base(i) >= base(i) - box.lower(i)) ? step : -step;
    x = box.clip(x);
    s.vertices.push_back({x, eval(x)});
  }
  return s;
}

// One reflection / expansion / contraction / shrink pass. Returns the number
// of objective evaluations.
long nelder_mead_step(Simplex& s, const Coefficients& k, const Box& box, const Evaluator& eval) {
  const std::size_t h = s.worst_index();
  const std::size_t lo = s.best_index();
  const double f_best = s.vertices[lo].cost;
  const double f_second = s.vertices[s.second_worst_index()].cost;
  const Eigen::VectorXd centroid = s.centroid_excluding_worst();
  const Eigen::VectorXd& worst = s.vertices[h].point;

  long evals = 0;
  const Eigen::VectorXd xr = reflect(worst, centroid, k.alpha, box);
  const double fr = eval(xr);
  ++evals;

  if (fr < f_best) {
    const Eigen::VectorXd xe = expand(xr, centroid, k.gamma, box);
    const double fe = eval(xe);
    ++evals;
    s.vertices[h] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    return evals;
  }
  if (fr < f_second) {
    s.vertices[h] = {xr, fr};
    return evals;
  }

  const Eigen::VectorXd xc = box.clip(contract(worst, centroid, k.beta));
  const double fc = eval(xc);
  ++evals;
  if (fc < s.vertices[h].cost) {
    s.vertices[h] = {xc, fc};
    return evals;
  }

  const Eigen::VectorXd best = s.vertices[lo].point;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    if (i == lo) continue;
    const Eigen::VectorXd x = box.clip(best + 0.5 * (s.vertices[i].point - best));
    s.vertices[i] = {x, eval(x)};
    ++evals;
  }
  return evals;
}

Vertex best_of(const DualSimplexState& state) {
  Vertex best = state.simplexes.front().vertices.front();
  for (const Simplex& s : state.simplexes) {
    const Vertex& v = s.vertices[s.best_index()];
    if (v.cost < best.cost) best = v;
  }
  return best;
}

}  // namespace

SdsaResult optimize(const Objective& objective, const SdsaConfig& config) {
  config.validate();
  const Box& box = config.bounds;
  const Eigen::Index dim = box.lower.size();
  const Evaluator eval(objective);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SdsaResult result;
  DualSimplexState state;
  for (int s = 0; s < config.n_simplexes; ++s) {
    Eigen::VectorXd base(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      base(i) = box.lower(i) + unit(rng) * (box.upper(i) - box.lower(i));
    }
    if (s == 0 && config.initial_point) base = *config.initial_point;
    state.simplexes.push_back(initial_simplex(base, config, eval));
    result.evaluations += dim + 1;
  }
  state.best = best_of(state);
  result.history.push_back(state.best.cost);

  int stalled = 0;
  for (state.iteration = 1; state.iteration <= config.i_max; ++state.iteration) {
    std::vector<Coefficients> coeffs;
    for (int s = 0; s < config.n_simplexes; ++s) {
      // alpha in (0, alpha_max], gamma in (1, gamma_max], beta in [0, beta_max]
      const double alpha = config.alpha_max * (1.0 - unit(rng));
      const double gamma = 1.0 + (config.gamma_max - 1.0) * (1.0 - unit(rng));
      const double beta = config.beta_max * unit(rng);
      coeffs.push_back({alpha, gamma, beta});
    }

    if (config.jobs > 1) {
      std::vector<std::future<long>> pending;
      for (int s = 0; s < config.n_simplexes; ++s) {
        pending.push_back(std::async(std::launch::async, [&, s] {
          return nelder_mead_step(state.simplexes[s], coeffs[s], box, eval);
        }));
      }
      for (auto& f : pending) result.evaluations += f.get();
    } else {
      for (int s = 0; s < config.n_simplexes; ++s) {
        result.evaluations += nelder_mead_step(state.simplexes[s], coeffs[s], box, eval);
      }
    }

    state.covariance = vertex_covariance(state);
    state.global_centroid = global_centroid(state, config.centroid_mode);
    for (Simplex& s : state.simplexes) {
      const std::size_t h = s.worst_index();
      const Eigen::VectorXd g = sample_perturbation(state.covariance, config.perturbation, rng);
      const Eigen::VectorXd x = stochastic_replace(s.vertices[h].point, state.global_centroid, g, box);
      s.vertices[h] = {x, eval(x)};
      ++result.evaluations;
    }

    const double previous = state.best.cost;
    const Vertex candidate = best_of(state);
    if (candidate.cost < state.best.cost) state.best = candidate;
    result.history.push_back(state.best.cost);
    result.iterations = state.iteration;

    stalled = (previous - state.best.cost < config.stall_tolerance) ? stalled + 1 : 0;
    if (stalled >= config.stall_iterations) break;
  }

  result.best_point = state.best.point;
  result.best_cost = state.best.cost;
  return result;
}

}  // namespace pidaquad::sdsa
