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

#include "pidaquad/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pidaquad {

namespace {

// Indices into QuadState::to_vector() for the seven attitude/vertical states.
constexpr int kReducedIndex[7] = {0, 1, 2, 3, 4, 5, 8};
constexpr int kZIndex = 11;

int reduced_size(LinearStateSet set) { return set == LinearStateSet::kWithAltitude ? 8 : 7; }

Eigen::VectorXd reduce(const QuadState& s, LinearStateSet set) {
  const Vector12d full = s.to_vector();
  Eigen::VectorXd x(reduced_size(set));
  for (int i = 0; i < 7; ++i) x(i) = full(kReducedIndex[i]);
  if (set == LinearStateSet::kWithAltitude) x(7) = s.altitude();
  return x;
}

QuadState expand(const Eigen::VectorXd& x, const QuadState& base, LinearStateSet set) {
  Vector12d full = base.to_vector();
  for (int i = 0; i < 7; ++i) full(kReducedIndex[i]) = x(i);
  if (set == LinearStateSet::kWithAltitude) full(kZIndex) = -x(7);
  return QuadState::from_vector(full);
}

Eigen::Vector4d input_vector(const ControlInput& u) {
  return {u.u_phi, u.u_theta, u.u_psi, u.u_T};
}

ControlInput input_from(const Eigen::Vector4d& u) { return {u(0), u(1), u(2), u(3)}; }

Eigen::VectorXd reduced_rhs(const Eigen::VectorXd& x, const Eigen::Vector4d& u,
                            const QuadState& base, const QuadParams& params,
                            LinearStateSet set) {
  const QuadState s = expand(x, base, set);
  const Vector12d dfull = derivatives(s, input_from(u), {}, params).to_vector();
  Eigen::VectorXd dx(reduced_size(set));
  for (int i = 0; i < 7; ++i) dx(i) = dfull(kReducedIndex[i]);
  if (set == LinearStateSet::kWithAltitude) dx(7) = -dfull(kZIndex);
  return dx;
}

double step_for(double value) { return 1e-6 * std::max(1.0, std::abs(value)); }

Eigen::MatrixXd output_selector(LinearStateSet set) {
  const int n = reduced_size(set);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, n);
  C(0, 0) = 1.0;
  C(1, 1) = 1.0;
  C(2, 2) = 1.0;
  C(3, set == LinearStateSet::kWithAltitude ? 7 : 6) = 1.0;
  return C;
}

}  // namespace

void LinearModel::validate() const {
  if (A.rows() != A.cols()) throw std::invalid_argument("LinearModel: A must be square");
  if (B.rows() != A.rows()) throw std::invalid_argument("LinearModel: B rows must equal A rows");
  if (C.cols() != A.cols()) throw std::invalid_argument("LinearModel: C cols must equal A cols");
}

LinearModel jacobian(const QuadState& point, const ControlInput& input, const QuadParams& params,
                     LinearStateSet set) {
  const Eigen::VectorXd x0 = reduce(point, set);
  const Eigen::Vector4d u0 = input_vector(input);
  const int n = static_cast<int>(x0.size());

  LinearModel model;
  model.A.resize(n, n);
  model.B.resize(n, 4);
  for (int j = 0; j < n; ++j) {
    const double h = step_for(x0(j));
    Eigen::VectorXd xp = x0, xm = x0;
    xp(j) += h;
    xm(j) -= h;
    model.A.col(j) = (reduced_rhs(xp, u0, point, params, set) -
                      reduced_rhs(xm, u0, point, params, set)) / (2.0 * h);
  }
  for (int j = 0; j < 4; ++j) {
    const double h = step_for(u0(j));
    Eigen::Vector4d up = u0, um = u0;
    up(j) += h;
    um(j) -= h;
    model.B.col(j) = (reduced_rhs(x0, up, point, params, set) -
                      reduced_rhs(x0, um, point, params, set)) / (2.0 * h);
  }
  model.C = output_selector(set);
  model.equilibrium = point;
  model.equilibrium_input = input;
  return model;
}

LinearModel linearize(const QuadState& eq, const ControlInput& eq_input, const QuadParams& params,
                      LinearStateSet set) {
  const Eigen::VectorXd residual =
      reduced_rhs(reduce(eq, set), input_vector(eq_input), eq, params, set);
  if (!(residual.norm() < 1e-6)) {
    std::ostringstream os;
    os << "linearization point is not an equilibrium (|f(x_eq, u_eq)| = " << residual.norm()
       << ")";
    throw NotEquilibriumError(os.str());
  }
  return jacobian(eq, eq_input, params, set);
}

QuadState hover_state(double altitude) {
  QuadState s;
  s.zE = -altitude;
  return s;
}

ControlInput hover_input(const QuadParams& params) { return {0.0, 0.0, 0.0, params.hover_thrust()}; }

LinearModel augment_tracking(const LinearModel& model) {
  model.validate();
  const Eigen::Index n = model.states();
  const Eigen::Index m = model.inputs();
  const Eigen::Index p = model.outputs();

  LinearModel aug;
  aug.A = Eigen::MatrixXd::Zero(n + p, n + p);
  aug.A.topLeftCorner(n, n) = model.A;
  aug.A.bottomLeftCorner(p, n) = -model.C;
  aug.B = Eigen::MatrixXd::Zero(n + p, m);
  aug.B.topRows(n) = model.B;
  aug.C = Eigen::MatrixXd::Zero(p, n + p);
  aug.C.leftCols(n) = model.C;
  aug.equilibrium = model.equilibrium;
  aug.equilibrium_input = model.equilibrium_input;
  return aug;
}

}  // namespace pidaquad
