#include "doctest.h"

#include <cmath>

#include "monoflow/signal.hpp"

using namespace monoflow;

TEST_CASE("constant signal value and exact integral") {
    auto s = CoefficientSignal::constant(2.5);
    CHECK(s.value(0.0) == 2.5);
    CHECK(s.value(-17.3) == 2.5);
    CHECK(s.integral(-1.0, 3.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(s.floor_value() == 2.5);
    CHECK(s.unit_window_bound() == doctest::Approx(2.5));
}

TEST_CASE("step signal: values, wrap, antiderivative") {
    // 1 on [0, 0.5), 3 on [0.5, 1), period 1
    auto s = CoefficientSignal::step(1.0, {0.0, 0.5}, {1.0, 3.0});
    CHECK(s.value(0.25) == 1.0);
    CHECK(s.value(0.5) == 3.0);     // right-continuous at the jump
    CHECK(s.value(1.25) == 1.0);
    CHECK(s.value(-0.25) == 3.0);   // periodic extension
    CHECK(s.integral(0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.integral(0.25, 0.75) == doctest::Approx(0.25 + 0.75).epsilon(1e-15));
    CHECK(s.integral(-0.25, 0.25) == doctest::Approx(0.75 + 0.25).epsilon(1e-15));

    std::vector<double> bps;
    s.breakpoints_in(0.1, 2.1, bps);
    CHECK(bps.size() == 4);  // 0.5, 1.0, 1.5, 2.0
}

TEST_CASE("piecewise linear signal integral matches trapezoid") {
    auto s = CoefficientSignal::piecewise_linear(2.0, {0.0, 1.0}, {0.0, 2.0});
    CHECK(s.value(0.5) == doctest::Approx(1.0));
    CHECK(s.value(1.5) == doctest::Approx(1.0));  // descending back toward 0 at wrap
    CHECK(s.integral(0.0, 2.0) == doctest::Approx(2.0));
    CHECK(s.integral(0.0, 1.0) == doctest::Approx(1.0));
    // brute-force Riemann comparison
    double acc = 0.0;
    int n = 200000;
    for (int i = 0; i < n; ++i) acc += s.value(0.3 + (1.9 - 0.3) * (i + 0.5) / n);
    acc *= (1.9 - 0.3) / n;
    CHECK(s.integral(0.3, 1.9) == doctest::Approx(acc).epsilon(1e-6));
}

TEST_CASE("quasi-periodic signal is a held step with exact cell sums") {
    auto s = CoefficientSignal::quasi_periodic(1.0, 0.5, 0.25);
    CHECK(s.floor_value() == 1.0);
    // value constant within a 1/64 cell
    CHECK(s.value(0.3) == s.value(0.3004));
    // integral equals sum of cell values
    double a = 0.1, b = 2.7;
    double acc = 0.0;
    int n = 100000;
    for (int i = 0; i < n; ++i) acc += s.value(a + (b - a) * (i + 0.5) / n);
    acc *= (b - a) / n;
    CHECK(s.integral(a, b) == doctest::Approx(acc).epsilon(1e-3));
    // genuinely aperiodic: no small period visible at lag 2*pi on the grid
    CHECK(s.value(0.5) != s.value(0.5 + 512.0 / 64.0));
}

TEST_CASE("spike signal has exact square-root antiderivative") {
    auto s = CoefficientSignal::spike(2.0, 1.0);
    CHECK(s.integral(0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.integral(0.0, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.integral(0.0, 3.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(s.value(0.25) == doctest::Approx(2.0));
}

TEST_CASE("signals reject negative values") {
    CHECK_THROWS(CoefficientSignal::step(1.0, {0.0}, {-1.0}));
    CHECK_THROWS(CoefficientSignal::piecewise_linear(1.0, {0.0, 0.5}, {1.0, -0.5}));
}

TEST_CASE("nonlinearity spec: monotone, clamped below zero, dominated") {
    NonlinearitySpec h{CoefficientSignal::constant(1.0), CoefficientSignal::constant(1.0),
                      SaturationShape::Rational};
    CHECK(h.value(0.0, 0.0) == 1.0);
    CHECK(h.value(0.0, -5.0) == h.value(0.0, 0.0));  // h(t,y)=h(t,0) for y<=0
    CHECK(h.value(0.0, 1.0) == doctest::Approx(1.5));
    // monotone in y and dominated by gain*y + base
    double prev = -1.0;
    for (double y = 0.0; y <= 10.0; y += 0.1) {
        double v = h.value(0.3, y);
        CHECK(v >= prev);
        CHECK(v <= 1.0 * y + 1.0 + 1e-12);
        prev = v;
    }
}

TEST_CASE("all catalog shapes satisfy shape(y) <= y and monotonicity") {
    for (auto shape : {SaturationShape::Rational, SaturationShape::ExpSaturating,
                       SaturationShape::Clip, SaturationShape::Identity}) {
        double prev = 0.0;
        for (double y = 0.0; y <= 20.0; y += 0.05) {
            double v = shape_value(shape, y);
            CHECK(v <= y + 1e-12);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
        CHECK(shape_value(shape, 0.0) == 0.0);
    }
}
