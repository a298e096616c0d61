// Copyright 2026 The iqfi-lab Authors
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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "iqfi/errors.hpp"
#include "iqfi/evolution.hpp"
#include "iqfi/protocol_random.hpp"
#include "oracles.hpp"

namespace iqfi {
namespace {

constexpr double kPi = std::numbers::pi;

SignalParams signal(double B, double omega, double phi = 0.0, double zeta = 1.0) {
  SignalParams s;
  s.B = B;
  s.omega = omega;
  s.phi = phi;
  s.zeta = zeta;
  return s;
}

const Vec2 kPlus = bloch_state(kPi / 2.0, 0.0);

TEST(Discrete, RamseyAtZeroFieldStaysPlus) {
  for (const double w : {0.0, 0.5, 7.0}) {
    EXPECT_LT((evolve_discrete(make_ramsey(3.0), signal(0.0, w)).psi - kPlus).norm(), 1e-15);
  }
}

TEST(Discrete, RamseyDcLimit) {
  const double T = 2.5;
  const SignalParams s = signal(0.4, 0.0, 0.0, 1.3);
  const SensorState st = evolve_discrete(make_ramsey(T), s);
  const Vec2 expected = expm_hermitian(s.zeta * s.B * pauli_z(), T) * kPlus;
  EXPECT_LT((st.psi - expected).norm(), 1e-14);
  EXPECT_NEAR(qfi(st), 4.0 * s.zeta * s.zeta * T * T, 1e-12);
}

TEST(Discrete, EchoCancelsDcPhase) {
  EXPECT_NEAR(qfi_at(make_pi_train({1.0}, Axis::X, 2.0), signal(0.7, 0.0)), 0.0, 1e-14);
}

TEST(Qfi, RamseyIsFourZetaSquaredThetaSquared) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double T = 0.1 + 8.0 * unit(rng);
    const SignalParams s = signal(3.0 * unit(rng), 20.0 * unit(rng), 2.0 * kPi * unit(rng),
                                  0.2 + 2.0 * unit(rng));
    const double th = oracle::direct_theta(0.0, T, s.omega, s.phi);
    const double expected = 4.0 * s.zeta * s.zeta * th * th;
    EXPECT_NEAR(qfi_at(make_ramsey(T), s), expected, 1e-12 * std::max(1.0, expected));
  }
}

TEST(Qfi, ZeroDerivativeGivesZero) { EXPECT_EQ(qfi(kPlus, Vec2::Zero()), 0.0); }

// Closed form for pi trains from an arbitrary Bloch state.
TEST(Discrete, PiTrainClosedForm) {
  Rng rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(trial % 12);
    const double T = 0.5 + 6.0 * unit(rng);
    auto times = random_pulse_times(rng, n, T);
    if (trial % 3 == 0) times.push_back(T);  // t_N = T
    PulseSequence seq = make_pi_train(times, trial % 2 ? Axis::X : Axis::Y, T);
    seq.initial_state = InitialState{kPi * unit(rng), 2.0 * kPi * unit(rng)};
    const SignalParams s = signal(2.0 * unit(rng), 0.05 + 15.0 * unit(rng), 0.0, 0.5 + unit(rng));
    const double expected = oracle::pi_train_qfi(times, T, seq.initial_state.alpha, s.omega, s.zeta);
    EXPECT_NEAR(qfi_at(seq, s), expected, 1e-9 * std::max(1.0, expected));
  }
}

class Invariants : public ::testing::Test {
 protected:
  Rng rng{23};
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  void check(const SensorState& st) {
    EXPECT_NEAR(st.psi.norm(), 1.0, 1e-10);
    const std::complex<double> overlap = st.dpsi.dot(st.psi);
    EXPECT_NEAR(overlap.real(), 0.0, 1e-10 * std::max(1.0, st.dpsi.norm()));
    const double j = qfi(st);
    EXPECT_GE(j, 0.0);
    EXPECT_LE(j, 4.0 * st.dpsi.squaredNorm() * (1.0 + 1e-12));
  }
};

TEST_F(Invariants, DiscreteProtocols) {
  for (int i = 0; i < 300; ++i) {
    const double T = 0.5 + 8.0 * unit(rng);
    const PulseSequence seq = random_sequence(rng, static_cast<std::size_t>(i % 17), T);
    check(evolve_discrete(seq, signal(4.0 * unit(rng), 20.0 / T * unit(rng),
                                      2.0 * kPi * unit(rng), 0.5 + unit(rng))));
  }
}

TEST_F(Invariants, ContinuousProtocols) {
  for (int i = 0; i < 20; ++i) {
    const double T = 1.0 + 4.0 * unit(rng);
    check(evolve_continuous(make_gx(T, 3.0 * unit(rng)),
                            signal(2.0 * unit(rng), 6.0 * unit(rng), 2.0 * kPi * unit(rng))));
  }
}

// Relative agreement with a floor for spectral zeros, where J itself vanishes
// and only the absolute error is meaningful.
void expect_matches_fd(const Protocol& p, const SignalParams& s, double rel, double floor) {
  const double analytic = qfi_at(p, s);
  const FdQfi fd = qfi_fd_oracle(p, s);
  EXPECT_FALSE(fd.step_too_large);
  EXPECT_NEAR(fd.qfi, analytic, rel * std::max(analytic, floor)) << "omega=" << s.omega;
}

TEST(FdOracle, RamseyMatchesAnalytic) {
  const double T = 3.0;
  for (const double w : {0.0, 0.4, 2.5}) {
    const SignalParams s = signal(0.8, w);
    const double th = oracle::direct_theta(0.0, T, w, 0.0);
    EXPECT_NEAR(qfi_fd_oracle(make_ramsey(T), s).qfi, 4.0 * th * th, 1e-8 * 4.0 * th * th);
  }
}

TEST(FdOracle, RandomPiTrains) {
  Rng rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double T = 1.0 + 7.0 * unit(rng);
    const PulseSequence seq = random_pi_train(rng, 1 + static_cast<std::size_t>(i % 16), T);
    expect_matches_fd(seq, signal(2.0 * unit(rng), 20.0 / T * unit(rng)), 1e-6, 1e-3 * T * T);
  }
}

TEST(FdOracle, RandomDiscreteProtocols) {
  Rng rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double T = 0.5 + 8.0 * unit(rng);
    const PulseSequence seq = random_sequence(rng, static_cast<std::size_t>(i % 17), T);
    expect_matches_fd(seq, signal(3.0 * unit(rng), 20.0 / T * unit(rng), 2.0 * kPi * unit(rng)),
                      1e-6, 1e-3 * T * T);
  }
}

TEST(FdOracle, ContinuousDrive) {
  const ContinuousControl gx = make_gx(3.0, kPi / 2.0);
  for (const double w : {0.5, kPi, 4.0}) {
    const SignalParams s = signal(1.0, w);
    const double analytic = qfi(evolve_continuous(gx, s, OdeOptions{1e-12}));
    FdOptions fd_options;
    fd_options.fixed_steps = 20000;
    const FdQfi fd = qfi_fd_oracle(gx, s, fd_options);
    EXPECT_NEAR(fd.qfi, analytic, 1e-5 * analytic) << "omega=" << w;
  }
}

TEST(Continuous, DriveAloneRotatesPlusByGlobalPhase) {
  const double g = 1.3;
  const double T = 2.7;
  const SensorState st = evolve_continuous(make_gx(T, g), signal(0.0, 1.0));
  EXPECT_LT((st.psi - std::polar(1.0, -g * T) * kPlus).norm(), 1e-9);
}

TEST(Continuous, ResonantQfiApproachesRwaValue) {
  // g >> zeta B keeps the rotating-wave picture accurate
  const double g = 10.0;
  const double T = 20.0;
  const SignalParams s = signal(0.5, 2.0 * g);
  EXPECT_NEAR(qfi_at(make_gx(T, g), s) / (T * T), 1.0, 0.05);
}

TEST(Continuous, TrotterLimit) {
  const double g = kPi / 2.0;
  const double T = 4.0;
  for (const double w : {0.7, kPi, 5.0}) {
    const SignalParams s = signal(1.0, w);
    const double continuous = qfi(evolve_continuous(make_gx(T, g), s, OdeOptions{1e-12}));
    const double trotter = qfi_at(make_trotterized_gx(T, 1024, g), s);
    EXPECT_NEAR(trotter, continuous, 1e-4 * continuous) << "omega=" << w;
  }
}

TEST(Continuous, StepUnderflowIsAStiffnessError) {
  OdeOptions impossible;
  impossible.tol = 1e-30;
  EXPECT_THROW(evolve_continuous(make_gx(1.0, 1.0), signal(1.0, 1.0), impossible),
               StiffnessError);
}

TEST(Continuous, NormDriftStaysWithinTolerance) {
  const OdeOptions opts{1e-10};
  const SensorState st = evolve_continuous(make_gx(8.0, kPi / 2.0), signal(1.0, kPi), opts);
  EXPECT_LE(st.norm_drift, 10.0 * opts.tol);
}

TEST(Continuous, PropagatorIsUnitary) {
  const Propagator p = propagator(make_gx(2.0, 0.8), signal(0.6, 1.9));
  EXPECT_LT(unitarity_defect(p.U), 1e-9);
}

TEST(Ghz, SingleQubitIsRamsey) {
  for (const double w : {0.0, 1.0, 3.3}) {
    const SignalParams s = signal(0.3, w);
    EXPECT_NEAR(qfi(evolve_ghz({1, make_ramsey(2.0)}, s)), qfi_at(make_ramsey(2.0), s), 1e-13);
  }
}

TEST(Ghz, ThreeQubitsScaleBySquare) {
  for (const double w : {0.0, 0.6, 2.0}) {
    const SignalParams s = signal(0.0, w);
    const double th = oracle::direct_theta(0.0, 2.0, w, 0.0);
    const GhzState st = evolve_ghz({3, make_ramsey(2.0)}, s);
    EXPECT_NEAR(qfi(st), 36.0 * th * th, 1e-12 * std::max(1.0, 36.0 * th * th));
    EXPECT_NEAR(st.accumulated_phase, th, 1e-14);
  }
}

TEST(Ghz, AccumulatedPhaseGivesQfi) {
  const PulseSequence echo = make_pi_train({0.7, 1.9}, Axis::X, 3.0);
  for (const double w : {0.2, 1.4, 4.0}) {
    const SignalParams s = signal(0.9, w, 0.3);
    const GhzState st = evolve_ghz({4, echo}, s);
    const double phase = st.accumulated_phase;
    EXPECT_NEAR(qfi(st), 4.0 * 16.0 * phase * phase, 1e-10 * std::max(1.0, qfi(st)));
  }
}

TEST(Ghz, MatchesTensorProductOracle) {
  Rng rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const double T = 1.0 + 4.0 * unit(rng);
      PulseSequence seq = random_pi_train(rng, static_cast<std::size_t>(trial % 5), T);
      seq.initial_state = InitialState{kPi * unit(rng), 2.0 * kPi * unit(rng)};
      const SignalParams s = signal(1.5 * unit(rng), 10.0 * unit(rng), 2.0 * kPi * unit(rng));
      const GhzState reduced = evolve_ghz({n, seq}, s);
      const auto full = oracle::ghz_tensor_evolve(n, seq, s);
      EXPECT_NEAR(qfi(reduced), oracle::qfi_dense(full.psi, full.dpsi), 1e-10);
    }
  }
}

TEST(Ghz, RejectsNonCollectivePulses) {
  PulseSequence seq = make_pi2_train(0.5, 1.0);
  EXPECT_THROW(evolve_ghz({2, seq}, signal(0.1, 1.0)), ValidationError);
  EXPECT_THROW(evolve_ghz({0, make_ramsey(1.0)}, signal(0.1, 1.0)), ValidationError);
}

TEST(Discrete, InvalidSequenceIsRejected) {
  PulseSequence bad = make_ramsey(1.0);
  bad.pulses.push_back(Pulse{2.0, Rotation::about(Axis::X, 1.0)});
  EXPECT_THROW(evolve_discrete(bad, signal(0.0, 0.0)), ValidationError);
}

}  // namespace
}  // namespace iqfi
