// Copyright 2026 The dmftqsim Authors
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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "dmftqsim/dmft.hpp"

namespace dmftqsim {
namespace {

std::string history(const DmftTrace& t) {
  std::ostringstream out;
  write_history_csv(out, t);
  return out.str();
}

TEST(Dmft, NamesRoundTrip) {
  for (auto m : {ZMethod::Derivative, ZMethod::Spectral, ZMethod::KramersKronig, ZMethod::Matsubara}) {
    EXPECT_EQ(parse_z_method(z_method_name(m)), m);
  }
  for (auto s : {SolverKind::Sampled, SolverKind::ExactTrotter, SolverKind::ExactUnitary}) {
    EXPECT_EQ(parse_solver(solver_name(s)), s);
  }
  EXPECT_THROW(parse_z_method("guess"), std::invalid_argument);
  EXPECT_THROW(parse_solver("analog"), std::invalid_argument);
}

TEST(Dmft, ConfigValidation) {
  EXPECT_NO_THROW(DmftConfig{}.validate());
  auto bad = [](auto mutate) {
    DmftConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](DmftConfig& c) { c.v_tolerance = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](DmftConfig& c) { c.v_cutoff = -1; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](DmftConfig& c) { c.mixing = 1.5; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](DmftConfig& c) { c.v_initial = -0.1; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](DmftConfig& c) { c.n_steps = 3; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](DmftConfig& c) { c.noise.readout_p01 = 2; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](DmftConfig& c) {
                 c.solver = SolverKind::Sampled;
                 c.shots = 0;
               }).validate(),
               std::invalid_argument);
}

TEST(Dmft, AtomicStartIsFixedPoint) {
  DmftConfig c;
  c.v_initial = 0;
  const auto r = dmft_iterate(c, 0.0, 1);
  EXPECT_EQ(r.z.z, 0.0);
  EXPECT_EQ(r.v_out, 0.0);

  const auto t = run_to_self_consistency(c);
  EXPECT_TRUE(t.converged);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.final_v, 0.0);
}

TEST(Dmft, StrongCouplingFlowsTowardInsulator) {
  DmftConfig c;
  const auto r = dmft_iterate(c, 1.0, 1);
  EXPECT_LT(r.v_out, 1.0);
  EXPECT_LT(r.z.z, 0.5);
  EXPECT_NEAR(r.v_out, std::sqrt(r.z.z), 1e-15);
}

TEST(Dmft, ExactLoopReachesInsulator) {
  for (double u : {6.5, 7.0, 8.0, 10.0}) {
    DmftConfig c;
    c.u = u;
    const auto t = run_to_self_consistency(c);
    EXPECT_TRUE(t.converged) << u;
    EXPECT_EQ(t.final_v, 0.0) << u;
    if (u == 8.0) EXPECT_LE(t.records.size(), 10u);
  }
}

TEST(Dmft, RecordsAreContiguous) {
  DmftConfig c;
  c.u = 5.5;
  c.max_iterations = 6;
  const auto t = run_to_self_consistency(c);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    EXPECT_EQ(t.records[i].iteration, static_cast<int>(i) + 1);
    EXPECT_NEAR(t.records[i].v_out, std::sqrt(t.records[i].z.z), 1e-15);
    if (i > 0) EXPECT_EQ(t.records[i].v_in, t.records[i - 1].v_next);
  }
}

TEST(Dmft, NonConvergenceIsReported) {
  DmftConfig c;
  c.max_iterations = 1;
  const auto t = run_to_self_consistency(c);
  EXPECT_FALSE(t.converged);
  EXPECT_EQ(t.records.size(), 1u);
}

TEST(Dmft, MetallicDerivativeFixedPoint) {
  DmftConfig c;
  c.u = 4;
  c.dt = 0.1;
  c.n_steps = 60;
  c.z_method = ZMethod::Derivative;
  const auto t = run_to_self_consistency(c);
  ASSERT_TRUE(t.converged);
  const double v = t.final_v;
  EXPECT_NEAR(v, 0.7476, 2e-3);
  const auto check = dmft_iterate(c, v, 99);
  EXPECT_NEAR(v * v, check.z.z, 1e-3);
}

TEST(Dmft, NoninteractingLoopKeepsUnitWeight) {
  DmftConfig c;
  c.u = 0;
  const auto t = run_to_self_consistency(c);
  EXPECT_TRUE(t.converged);
  EXPECT_NEAR(t.final_v, 1.0, 1e-3);
}

TEST(Dmft, MixingDampsTheUpdate) {
  DmftConfig c;
  c.mixing = 0.5;
  const auto r = dmft_iterate(c, 1.0, 1);
  EXPECT_NEAR(r.v_next, 0.5 * 1.0 + 0.5 * r.v_out, 1e-12);
}

DmftConfig noisy(std::uint64_t seed) {
  DmftConfig c;
  c.solver = SolverKind::Sampled;
  c.noise.two_qubit_depolarizing = 0.01;
  c.noise.readout_p01 = c.noise.readout_p10 = 0.02;
  c.readout_mitigation = true;
  c.zne = true;
  c.seed = seed;
  return c;
}

TEST(Dmft, NoisyMitigatedLoopConverges) {
  const auto t = run_to_self_consistency(noisy(2));
  EXPECT_TRUE(t.converged);
  EXPECT_EQ(t.final_v, 0.0);
  ASSERT_TRUE(t.calibration.has_value());
}

TEST(Dmft, TraceIsDeterministic) {
  EXPECT_EQ(history(run_to_self_consistency(noisy(5))), history(run_to_self_consistency(noisy(5))));
}

TEST(Dmft, ConvergedTraceIsAFixedPoint) {
  DmftConfig c;
  c.u = 2;
  const auto t = run_to_self_consistency(c);
  ASSERT_TRUE(t.converged);
  const auto again = dmft_iterate(c, t.final_v, 1);
  EXPECT_LT(std::abs(again.v_out - t.final_v), c.v_tolerance * 2);
}

TEST(Dmft, HistoryCsvHeader) {
  DmftConfig c;
  c.v_initial = 0;
  const auto text = history(run_to_self_consistency(c));
  EXPECT_EQ(text.substr(0, text.find('\n')), "iteration,V_in,alpha1,alpha2,omega1,omega2,Z,V_out,flags");
}

}  // namespace
}  // namespace dmftqsim
