#include "doctest.h"

#include <cmath>

#include "monoflow/models.hpp"
#include "monoflow/topologies.hpp"

using namespace monoflow;

namespace {

VectorField constant_field(double c) {
    return VectorField(
        1, true,
        [c](double, std::span<const double>, std::span<const double>, std::span<double> out) {
            out[0] = c;
        },
        [](double, double, std::vector<double>&) {});
}

}  // namespace

TEST_CASE("basis weights form a convex combination") {
    auto basis = SeminormBasis::standard(1);
    double sum = 0.0;
    for (const auto& term : basis.terms) {
        CHECK(term.weight > 0.0);
        sum += term.weight;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(SeminormBasis::standard(0), std::invalid_argument);
}

TEST_CASE("identical fields are at distance zero") {
    auto model = scalar_preset("quasiperiodic");
    auto basis = SeminormBasis::standard(1);
    CHECK(tp_distance(model.nonlinear(), model.nonlinear(), basis) == 0.0);
    CHECK(sigma_p_distance(model.nonlinear(), model.nonlinear(), basis) == 0.0);
}

TEST_CASE("large constant difference saturates every term at one") {
    auto basis = SeminormBasis::standard(1);
    // every interval has length >= 2, so the per-term integral of |5| caps at 1
    CHECK(tp_distance(constant_field(0.0), constant_field(5.0), basis) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("small constant difference integrates exactly") {
    auto basis = SeminormBasis::standard(1);
    double c = 0.01;
    double expected = 0.0;
    for (const auto& term : basis.terms) expected += term.weight * std::min(1.0, 2.0 * term.q * c);
    CHECK(tp_distance(constant_field(0.0), constant_field(c), basis) ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("signed integrals never exceed the absolute ones") {
    auto basis = SeminormBasis::standard(1, 5);
    auto f = scalar_preset("step").nonlinear();
    auto g = scalar_preset("quasiperiodic").nonlinear();
    double sigma = sigma_p_distance(f, g, basis);
    double tp = tp_distance(f, g, basis);
    CHECK(sigma <= tp + 1e-12);
    CHECK(tp > 0.0);
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
    auto basis = SeminormBasis::standard(1, 11);
    auto f = scalar_preset("golden").nonlinear();
    auto g = scalar_preset("step").nonlinear();
    auto h = scalar_preset("linear").nonlinear();
    double fg = tp_distance(f, g, basis);
    double gf = tp_distance(g, f, basis);
    double fh = tp_distance(f, h, basis);
    double hg = tp_distance(h, g, basis);
    CHECK(fg == doctest::Approx(gf).epsilon(1e-12));
    CHECK(fg <= fh + hg + 1e-12);
}

TEST_CASE("translation distance for the quasiperiodic preset decays monotonically") {
    auto f = scalar_preset("quasiperiodic").nonlinear();
    auto basis = SeminormBasis::standard(1);
    double prev = 1e300;
    for (int k = 2; k <= 8; ++k) {
        double s = std::pow(2.0, -k);
        double d = tp_distance(translate(f, s), f, basis);
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("distance report lists one contribution per term") {
    auto basis = SeminormBasis::standard(1);
    auto rep = tp_distance_report(constant_field(0.0), constant_field(1.0), basis);
    CHECK(rep.terms.size() == basis.terms.size());
    CHECK(rep.to_json().find("\"metric\":\"T_P\"") != std::string::npos);
}

TEST_CASE("modulus of a constant bound is linear") {
    SampledFunction m;
    m.edges = {0.0, 8.0};
    m.values = {2.0};
    auto theta = moduli_from_mbounds({m}, 2.0);
    CHECK(theta(0.0) == 0.0);
    CHECK(theta(0.5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(theta(1.5) == doctest::Approx(3.0).epsilon(1e-9));
    // clamped beyond the tabulated range
    CHECK(theta(5.0) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("modulus takes the worst window over the family") {
    SampledFunction low{{0.0, 8.0}, {1.0}};
    // alternating 0 / 4 on unit cells: worst unit window integral is 4
    SampledFunction alt{{0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 4.0, 0.0, 4.0}};
    auto theta = moduli_from_mbounds({low, alt}, 1.0);
    CHECK(theta(1.0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(theta(0.25) == doctest::Approx(1.0).epsilon(1e-9));
    // nondecreasing everywhere
    for (double s = 0.0; s < 1.0; s += 0.03) CHECK(theta(s) <= theta(s + 0.03) + 1e-12);
}

TEST_CASE("theta-d seminorm vanishes for identical fields") {
    auto f = scalar_preset("golden").nonlinear();
    Modulus theta{{0.0, 1.0}, {0.0, 1.0}};
    CHECK(theta_d_seminorm(f, f, 0.0, 2.0, {1.0}, 2.0, theta) == 0.0);
}

TEST_CASE("theta-d seminorm dominates the best constant path") {
    auto f = constant_field(0.0);
    // g(t,x,y) = x: |f-g| = |x|, maximized at |x| = j by a constant path
    VectorField g(
        1, true,
        [](double, std::span<const double> x, std::span<const double>, std::span<double> out) {
            out[0] = x[0];
        },
        [](double, double, std::vector<double>&) {});
    Modulus theta{{0.0, 1.0}, {0.0, 0.5}};
    double v = theta_d_seminorm(f, g, 0.0, 2.0, {0.0}, 3.0, theta);
    // constant path at x = 3 integrates |x| dt = 6 over [0, 2]
    CHECK(v == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("theta-d paths exploit time-varying integrands") {
    auto f = constant_field(0.0);
    // |f-g| rewards positive x before t = 1 and negative x after, so the best
    // path must move, and the modulus limits how much it can
    VectorField g(
        1, true,
        [](double t, std::span<const double> x, std::span<const double>, std::span<double> out) {
            out[0] = t < 1.0 ? std::max(x[0], 0.0) : std::max(-x[0], 0.0);
        },
        [](double t0, double t1, std::vector<double>& out) {
            if (t0 < 1.0 && 1.0 < t1) out.push_back(1.0);
        });
    Modulus tight{{0.0, 1.0}, {0.0, 0.0}};   // no movement allowed
    Modulus loose{{0.0, 1.0}, {0.0, 64.0}};  // effectively unconstrained
    double v_tight = theta_d_seminorm(f, g, 0.0, 2.0, {0.0}, 2.0, tight);
    double v_loose = theta_d_seminorm(f, g, 0.0, 2.0, {0.0}, 2.0, loose);
    CHECK(v_tight <= v_loose);
    // a path jumping from +2 to -2 at t = 1 collects the full integral 4
    CHECK(v_loose == doctest::Approx(4.0).epsilon(1e-6));
    // an immobile path only collects one half
    CHECK(v_tight == doctest::Approx(2.0).epsilon(1e-6));
}
