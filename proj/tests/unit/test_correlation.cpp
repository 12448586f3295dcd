#include <gtest/gtest.h>

#include <cmath>

#include "corrbound/correlation.hpp"
#include "support.hpp"

using namespace corrbound;
using namespace corrbound::testing;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no corrbound::Error thrown";
    return ErrorCode::BadInput;
}

} // namespace

TEST(TwoPoint, AbsorbingClosedForm) {
    const AbsorbingTwoState m;
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.1 * k;
        EXPECT_NEAR(two_point(m.w, m.p0, m.s, m.s, t), AbsorbingTwoState::correlation(t), 1e-13);
        EXPECT_NEAR(correlation_derivative(m.w, m.p0, m.s, m.s, t), AbsorbingTwoState::derivative(t), 1e-13);
    }
    EXPECT_NEAR(two_point(m.w, m.p0, m.s, m.s, 1.0), -0.26424111765711533, 1e-13);
}

TEST(TwoPoint, SymmetricClosedForm) {
    const SymmetricTwoState m;
    for (double t : {0.0, 0.25, 1.0, 3.0}) {
        EXPECT_NEAR(two_point(m.w, m.p_st, m.s, m.s, t), std::exp(-2 * t), 1e-14);
        EXPECT_NEAR(correlation_derivative(m.w, m.p_st, m.s, m.s, t), -2 * std::exp(-2 * t), 1e-14);
    }
}

TEST(TwoPoint, EqualTimeValue) {
    const RandomModel m = model(4, 17);
    const ScoreVector t_score(vec({0.3, -0.2, 0.9, -1.0}));
    const double expected = (m.s.values().array() * t_score.values().array() * m.p0.values().array()).sum();
    EXPECT_NEAR(two_point(m.w, m.p0, m.s, t_score, 0.0), expected, 1e-15);
}

TEST(TwoPoint, FrozenProcessHasNoDerivative) {
    const RandomModel m = model(3, 2);
    for (double t : {0.0, 1.0, 10.0})
        EXPECT_EQ(correlation_derivative(RateMatrix::zero(3), m.p0, m.s, m.s, t), 0.0);
}

TEST(TwoPoint, BoundedByScoreMaxima) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomModel m = model(2 + static_cast<Index>(seed % 3), seed);
        const ScoreVector t_score(m.s.values().reverse());
        for (int k = 0; k <= 10; ++k)
            EXPECT_LE(std::abs(two_point(m.w, m.p0, m.s, t_score, k)),
                      m.s.max_abs() * t_score.max_abs() + 1e-15);
    }
}

TEST(TwoPoint, DerivativeMatchesFiniteDifference) {
    const double h = 1e-5;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomModel m = model(2 + static_cast<Index>(seed % 3), seed);
        for (double t : {0.1, 1.0, 4.0}) {
            const double fd = (two_point(m.w, m.p0, m.s, m.s, t + h) - two_point(m.w, m.p0, m.s, m.s, t - h)) / (2 * h);
            EXPECT_NEAR(correlation_derivative(m.w, m.p0, m.s, m.s, t), fd, 1e-6);
        }
    }
}

TEST(TwoPoint, DimensionMismatch) {
    const RandomModel m = model(3, 1);
    const ScoreVector short_score(vec({1.0, 2.0}));
    EXPECT_EQ(code_of([&] { two_point(m.w, m.p0, short_score, m.s, 1.0); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([&] { two_point(m.w, ProbVector::uniform(2), m.s, m.s, 1.0); }),
              ErrorCode::DimensionMismatch);
}

// ---------------------------------------------------------------------------
// multipoint

TEST(Multipoint, TwoScoresReduceToTwoPoint) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const RandomModel m = model(2 + static_cast<Index>(seed % 3), seed);
        const ScoreVector t_score(m.s.values().reverse());
        for (double t : {0.0, 0.5, 3.0})
            EXPECT_NEAR(multipoint(m.w, m.p0, {m.s, t_score}, {0.0, t}), two_point(m.w, m.p0, m.s, t_score, t),
                        1e-12);
    }
}

TEST(Multipoint, AllTimesZeroIsEqualTimeProduct) {
    const RandomModel m = model(4, 5);
    const ScoreVector a(vec({1, -2, 0.5, 3})), b(vec({-1, 1, 1, 0.25}));
    const std::vector<ScoreVector> scores{m.s, a, b};
    const double expected =
        (m.s.values().array() * a.values().array() * b.values().array() * m.p0.values().array()).sum();
    EXPECT_NEAR(multipoint(m.w, m.p0, scores, {0, 0, 0}), expected, 1e-15);
    EXPECT_NEAR(equal_time_product(m.p0, scores), expected, 1e-15);
}

TEST(Multipoint, ThreePointMatchesPathEnumeration) {
    const SymmetricTwoState m;
    const double t[] = {0.0, 0.5, 1.0};
    auto prop = [](Index to, Index from, double dt) {
        const double d = std::exp(-2.0 * dt);
        return to == from ? (1 + d) / 2 : (1 - d) / 2;
    };
    const double s[] = {-1.0, 1.0};
    double brute = 0.0;
    for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b)
            for (Index c = 0; c < 2; ++c)
                brute += 0.5 * s[a] * prop(b, a, t[1] - t[0]) * s[b] * prop(c, b, t[2] - t[1]) * s[c];
    EXPECT_NEAR(multipoint(m.w, m.p_st, {m.s, m.s, m.s}, {t[0], t[1], t[2]}), brute, 1e-14);
}

TEST(Multipoint, ThreePointMatchesEnumerationOnRandomModels) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RandomModel m = model(3, seed);
        const ScoreVector b(m.s.values().reverse()), c(m.s.values().cwiseAbs());
        const double t1 = 0.4, t2 = 1.7;
        const Matrix p1 = eigen_expm(m.w.matrix() * t1);
        const Matrix p2 = eigen_expm(m.w.matrix() * (t2 - t1));
        double brute = 0.0;
        for (Index x = 0; x < 3; ++x)
            for (Index y = 0; y < 3; ++y)
                for (Index z = 0; z < 3; ++z)
                    brute += m.p0[x] * m.s[x] * p1(y, x) * b[y] * p2(z, y) * c[z];
        EXPECT_NEAR(multipoint(m.w, m.p0, {m.s, b, c}, {0.0, t1, t2}), brute, 1e-12);
    }
}

TEST(Multipoint, InputChecks) {
    const RandomModel m = model(2, 0);
    EXPECT_EQ(code_of([&] { multipoint(m.w, m.p0, {m.s, m.s}, {0.5, 1.0}); }), ErrorCode::TimesNotSorted);
    EXPECT_EQ(code_of([&] { multipoint(m.w, m.p0, {m.s, m.s, m.s}, {0.0, 1.0, 0.5}); }),
              ErrorCode::TimesNotSorted);
    EXPECT_EQ(code_of([&] { multipoint(m.w, m.p0, {m.s, m.s}, {0.0}); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([&] { multipoint(m.w, m.p0, {}, {}); }), ErrorCode::DimensionMismatch);
}

// ---------------------------------------------------------------------------
// trajectories

TEST(Trajectory, FrozenProcessNeverJumps) {
    Xoshiro256 rng(1);
    const RandomModel m = model(3, 4);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_trajectory(RateMatrix::zero(3), m.p0, 5.0, rng).jump_count(), 0u);
}

TEST(Trajectory, StructuralInvariants) {
    Xoshiro256 rng(3);
    const RandomModel m = model(4, 9);
    for (int i = 0; i < 2000; ++i) {
        const Trajectory tr = sample_trajectory(m.w, m.p0, 3.0, rng);
        Index prev = tr.initial_state;
        double last = 0.0;
        for (const Jump& j : tr.jumps) {
            ASSERT_GT(j.time, last);
            ASSERT_LT(j.time, 3.0);
            ASSERT_NE(j.state, prev);
            prev = j.state;
            last = j.time;
        }
        EXPECT_EQ(tr.final_state(), tr.state_at(3.0));
        EXPECT_EQ(tr.initial_state, tr.state_at(0.0));
    }
}

TEST(Trajectory, SurvivalFractionOfAbsorbingModel) {
    const AbsorbingTwoState m;
    Xoshiro256 rng(77);
    const int n = 100000;
    int survivors = 0;
    for (int i = 0; i < n; ++i) survivors += sample_trajectory(m.w, m.p0, 1.0, rng).jump_count() == 0;
    const double p = std::exp(-1.0);
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(survivors) / n, p, 3 * se);
}

TEST(Trajectory, DeterministicForFixedSeed) {
    const RandomModel m = model(3, 10);
    Xoshiro256 a(5), b(5);
    for (int i = 0; i < 50; ++i) {
        const Trajectory x = sample_trajectory(m.w, m.p0, 4.0, a);
        const Trajectory y = sample_trajectory(m.w, m.p0, 4.0, b);
        ASSERT_EQ(x.initial_state, y.initial_state);
        ASSERT_EQ(x.jump_count(), y.jump_count());
        for (std::size_t k = 0; k < x.jumps.size(); ++k) {
            EXPECT_EQ(x.jumps[k].time, y.jumps[k].time);
            EXPECT_EQ(x.jumps[k].state, y.jumps[k].state);
        }
    }
}

TEST(Trajectory, JumpTargetsFollowRates) {
    // From state 0 the first jump goes to 1 or 2 in proportion 1 : 3.
    const RateMatrix w = RateMatrix::validate(raw({{0, 1, 1}, {1, 0, 1}, {3, 1, 0}}));
    Xoshiro256 rng(8);
    int to_two = 0, jumped = 0;
    for (int i = 0; i < 40000; ++i) {
        const Trajectory tr = sample_trajectory(w, ProbVector::point_mass(3, 0), 10.0, rng);
        if (tr.jumps.empty()) continue;
        ++jumped;
        to_two += tr.jumps.front().state == 2;
    }
    const double p = static_cast<double>(to_two) / jumped;
    EXPECT_NEAR(p, 0.75, 4 * std::sqrt(0.75 * 0.25 / jumped));
}

// ---------------------------------------------------------------------------
// Monte Carlo

TEST(MonteCarlo, AbsorbingModelAtUnitTime) {
    const AbsorbingTwoState m;
    const McEstimate e = mc_two_point(m.w, m.p0, m.s, m.s, 1.0, 100000, 2);
    EXPECT_NEAR(e.estimate, AbsorbingTwoState::correlation(1.0), 3 * e.std_error);
    EXPECT_GT(e.std_error, 0.0);
}

TEST(MonteCarlo, ZeroTimeMatchesEqualTimeProduct) {
    const RandomModel m = model(3, 21);
    const McEstimate e = mc_two_point(m.w, m.p0, m.s, m.s, 0.0, 50000, 9);
    EXPECT_NEAR(e.estimate, equal_time_product(m.p0, {m.s, m.s}), 3 * e.std_error);
}

TEST(MonteCarlo, FrozenProcessOnlyScoreVariance) {
    const RandomModel m = model(3, 22);
    const ScoreVector t_score(vec({2.0, -1.0, 0.5}));
    const McEstimate e = mc_two_point(RateMatrix::zero(3), m.p0, m.s, t_score, 5.0, 200000, 4);
    const Vector prod = m.s.values().cwiseProduct(t_score.values());
    const double mean = prod.dot(m.p0.values());
    const double var = (prod.array() - mean).square().matrix().dot(m.p0.values());
    EXPECT_NEAR(e.estimate, mean, 4 * e.std_error);
    EXPECT_NEAR(e.std_error, std::sqrt(var / 200000), 0.02 * std::sqrt(var / 200000));
}

TEST(MonteCarlo, ReproducibleAndSeedSensitive) {
    const RandomModel m = model(2, 23);
    const McEstimate a = mc_two_point(m.w, m.p0, m.s, m.s, 1.0, 1000, 5);
    const McEstimate b = mc_two_point(m.w, m.p0, m.s, m.s, 1.0, 1000, 5);
    const McEstimate c = mc_two_point(m.w, m.p0, m.s, m.s, 1.0, 1000, 6);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(a.estimate, c.estimate);
}

TEST(MonteCarlo, TooFewSamples) {
    const RandomModel m = model(2, 23);
    EXPECT_EQ(code_of([&] { mc_two_point(m.w, m.p0, m.s, m.s, 1.0, 99, 1); }), ErrorCode::TooFewSamples);
}

TEST(MonteCarlo, ConsistentWithExactValues) {
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RandomModel m = model(2 + static_cast<Index>(seed % 3), 1000 + seed);
        const double t = seed % 2 ? 2.0 : 0.5;
        const McEstimate e = mc_two_point(m.w, m.p0, m.s, m.s, t, 20000, seed);
        inside += std::abs(e.estimate - two_point(m.w, m.p0, m.s, m.s, t)) < 4 * e.std_error;
    }
    EXPECT_GE(inside, 19);
}

TEST(MonteCarlo, ShardedMomentsMergeExactly) {
    const RandomModel m = model(3, 30);
    Xoshiro256 rng_a(1, 0), rng_b(1, 1);
    Moments a = mc_two_point_samples(m.w, m.p0, m.s, m.s, 1.0, 5000, rng_a);
    const Moments b = mc_two_point_samples(m.w, m.p0, m.s, m.s, 1.0, 7000, rng_b);

    Moments sequential;
    Xoshiro256 rng_c(1, 0), rng_d(1, 1);
    const Moments c = mc_two_point_samples(m.w, m.p0, m.s, m.s, 1.0, 5000, rng_c);
    const Moments d = mc_two_point_samples(m.w, m.p0, m.s, m.s, 1.0, 7000, rng_d);
    sequential.merge(c);
    sequential.merge(d);

    a.merge(b);
    EXPECT_EQ(a.count(), 12000u);
    EXPECT_DOUBLE_EQ(a.mean(), sequential.mean());
    EXPECT_NEAR(a.variance(), sequential.variance(), 1e-14);
}

TEST(Moments, WelfordMatchesTwoPassFormula) {
    Moments m;
    const double xs[] = {1.0, 4.0, -2.0, 7.5, 0.25};
    for (double x : xs) m.add(x);
    double mean = 0.0;
    for (double x : xs) mean += x / 5;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean) / 4;
    EXPECT_NEAR(m.mean(), mean, 1e-15);
    EXPECT_NEAR(m.variance(), var, 1e-13);
    EXPECT_NEAR(m.std_error(), std::sqrt(var / 5), 1e-14);
}
