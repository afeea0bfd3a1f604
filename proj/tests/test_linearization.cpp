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

#include <gtest/gtest.h>

#include <random>

#include "pidaquad/linearization.hpp"

namespace pidaquad {
namespace {

// Hand-derived hover Jacobian of the 7-state model [phi theta psi p q r w].
void hover_jacobian(const QuadParams& P, Eigen::MatrixXd& A, Eigen::MatrixXd& B) {
  A = Eigen::MatrixXd::Zero(7, 7);
  B = Eigen::MatrixXd::Zero(7, 4);
  A(0, 3) = 1.0;  // phi_dot = p
  A(1, 4) = 1.0;  // theta_dot = q
  A(2, 5) = 1.0;  // psi_dot = r
  B(3, 0) = 1.0 / P.Ixx;
  B(4, 1) = 1.0 / P.Iyy;
  B(5, 2) = 1.0 / P.Izz;
  B(6, 3) = -1.0 / P.m;
}

TEST(LinearizeTest, MatchesHandDerivedHoverJacobian) {
  const QuadParams P;
  const LinearModel m = linearize(hover_state(50), hover_input(P), P);
  Eigen::MatrixXd A, B;
  hover_jacobian(P, A, B);
  EXPECT_LT((m.A - A).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LT((m.B - B).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_NEAR(m.A(3, 3), 0.0, 1e-9);
  EXPECT_NEAR(m.B(6, 3), -1.25, 1e-6);
  EXPECT_EQ(m.C.rows(), 4);
  EXPECT_EQ(m.C.cols(), 7);
  EXPECT_NO_THROW(m.validate());
}

TEST(LinearizeTest, AltitudeVariantAddsHeightState) {
  const QuadParams P;
  const LinearModel m = linearize(hover_state(20), hover_input(P), P, LinearStateSet::kWithAltitude);
  ASSERT_EQ(m.states(), 8);
  EXPECT_NEAR(m.A(7, 6), -1.0, 1e-6);  // h_dot = -w at hover
  EXPECT_EQ(m.C(3, 7), 1.0);
  EXPECT_EQ(m.C(0, 0), 1.0);
}

TEST(LinearizeTest, RejectsNonEquilibrium) {
  const QuadParams P;
  ControlInput u = hover_input(P);
  u.u_T += 1.0;
  EXPECT_THROW(linearize(hover_state(50), u, P), NotEquilibriumError);
  QuadState tilted = hover_state(50);
  tilted.p = 0.1;
  EXPECT_THROW(linearize(tilted, hover_input(P), P), NotEquilibriumError);
}

TEST(LinearizeTest, SecantConsistencyAwayFromHover) {
  const QuadParams P;
  QuadState x;
  x.phi = 0.2; x.theta = -0.1; x.psi = 0.4;
  x.p = 0.3; x.q = 0.1; x.r = -0.2;
  x.u = 0.5; x.v = 0.2; x.w = -0.3;
  const ControlInput u{0.02, -0.01, 1e-4, 8.5};
  const LinearModel m = jacobian(x, u, P);
  const int idx[7] = {0, 1, 2, 3, 4, 5, 8};
  auto reduced = [&](const QuadState& s, const ControlInput& in) {
    const Vector12d d = derivatives(s, in, {}, P).to_vector();
    Eigen::VectorXd r(7);
    for (int i = 0; i < 7; ++i) r(i) = d(idx[i]);
    return r;
  };
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  const double h = 1e-7;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd dx(7), du(4);
    for (int i = 0; i < 7; ++i) dx(i) = n(rng);
    for (int i = 0; i < 4; ++i) du(i) = n(rng);
    Vector12d xp = x.to_vector(), xm = x.to_vector();
    for (int i = 0; i < 7; ++i) {
      xp(idx[i]) += h * dx(i);
      xm(idx[i]) -= h * dx(i);
    }
    const ControlInput up{u.u_phi + h * du(0), u.u_theta + h * du(1), u.u_psi + h * du(2),
                          u.u_T + h * du(3)};
    const ControlInput um{u.u_phi - h * du(0), u.u_theta - h * du(1), u.u_psi - h * du(2),
                          u.u_T - h * du(3)};
    const Eigen::VectorXd secant =
        (reduced(QuadState::from_vector(xp), up) - reduced(QuadState::from_vector(xm), um)) /
        (2 * h);
    EXPECT_LT((secant - (m.A * dx + m.B * du)).cwiseAbs().maxCoeff(), 1e-4);
  }
}

TEST(AugmentTest, BlockStructure) {
  const QuadParams P;
  const LinearModel m = linearize(hover_state(50), hover_input(P), P);
  const LinearModel a = augment_tracking(m);
  ASSERT_EQ(a.A.rows(), 11);
  ASSERT_EQ(a.A.cols(), 11);
  EXPECT_EQ(a.A.topLeftCorner(7, 7), m.A);
  EXPECT_EQ(a.A.bottomLeftCorner(4, 7), -m.C);
  EXPECT_TRUE(a.A.rightCols(4).isZero(0.0));
  EXPECT_EQ(a.B.topRows(7), m.B);
  EXPECT_TRUE(a.B.bottomRows(4).isZero(0.0));
  EXPECT_EQ(a.C.leftCols(7), m.C);
  EXPECT_NO_THROW(a.validate());
}

TEST(LinearModelTest, ValidateRejectsMismatchedShapes) {
  LinearModel m;
  m.A = Eigen::MatrixXd::Zero(3, 3);
  m.B = Eigen::MatrixXd::Zero(2, 1);
  m.C = Eigen::MatrixXd::Zero(1, 3);
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace pidaquad
