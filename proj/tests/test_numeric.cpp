#include <doctest.h>

#include <random>

#include "geocanvas/numeric.hpp"

using namespace geocanvas;

TEST_CASE("two-sided tolerance rule") {
    TolerancePolicy policy;
    CHECK(policy.pass(1.0, 1.0000003));      // |d| = 3e-7 <= 4e-7
    CHECK(policy.pass(1000.0, 1000.5));      // rel 0.05% <= 0.1%
    CHECK_FALSE(policy.pass(90.0, 90.2));    // fails both sides
}

TEST_CASE("tolerance is symmetric and reflexive") {
    TolerancePolicy policy;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(policy.pass(a, a));
        CHECK(policy.pass(a, b) == policy.pass(b, a));
    }
}

TEST_CASE("widening either tolerance never flips pass to fail") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = a + u(rng) * 1e-4;
        TolerancePolicy tight{1e-9, 1e-6};
        TolerancePolicy wider{1e-6, 1e-3};
        if (tight.pass(a, b)) CHECK(wider.pass(a, b));
    }
}

TEST_CASE("strict-enough policies separate distinct values") {
    TolerancePolicy zero{0.0, 0.0};
    CHECK_FALSE(zero.pass(1.0, 1.0 + 1e-15));
    CHECK(zero.pass(2.5, 2.5));
}

TEST_CASE("undefined scalars never pass") {
    TolerancePolicy policy;
    CHECK_FALSE(policy.pass(Scalar::undefined(), Scalar(1.0)));
    CHECK_FALSE(policy.pass(Scalar(1.0), Scalar::undefined()));
}

TEST_CASE("degree/radian conversions") {
    CHECK(deg_to_rad(180.0) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(rad_to_deg(0.0) == 0.0);
    CHECK(deg_to_rad(90.0) == doctest::Approx(kPi / 2).epsilon(1e-15));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng);
        const double back = rad_to_deg(deg_to_rad(x));
        CHECK(std::fabs(back - x) <= 1e-12 * std::fabs(x));
    }
}

TEST_CASE("NaN folds into the undefined state") {
    Scalar nan(std::nan(""));
    CHECK_FALSE(nan.is_defined());
    Scalar inf(1.0 / 0.0);
    CHECK_FALSE(inf.is_defined());
}
