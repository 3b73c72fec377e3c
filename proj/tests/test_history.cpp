#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "monoflow/history.hpp"

using namespace monoflow;

TEST_CASE("constant history: values, norms, nodes") {
    auto h = History::constant({3.5, 3.5});
    CHECK(h.dim() == 2);
    CHECK(h.node_count() == 65);
    CHECK(h.value(-1.0, 0) == 3.5);
    CHECK(h.value(-0.37, 1) == 3.5);
    CHECK(h.value(0.0, 0) == 3.5);
    CHECK(h.sup_norm() == 3.5);
    CHECK(h.min_entry() == 3.5);
    CHECK(h.node_time(0) == -1.0);
    CHECK(h.node_time(64) == 0.0);
}

TEST_CASE("from_scalar_function reproduces smooth data to interpolation accuracy") {
    auto h = History::from_scalar_function([](double s) { return std::sin(3.0 * s); });
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 0.0);
    // linear interpolation on a 1/64 grid: error bounded by h^2/8 * |f''|
    double tol = (1.0 / 64) * (1.0 / 64) / 8.0 * 9.0 + 1e-12;
    for (int i = 0; i < 500; ++i) {
        double s = u(rng);
        CHECK(std::abs(h.value(s, 0) - std::sin(3.0 * s)) <= tol);
    }
    for (int i = 0; i <= 64; ++i)
        CHECK(h.node(i, 0) == doctest::Approx(std::sin(3.0 * h.node_time(i))).epsilon(1e-14));
}

TEST_CASE("linear interpolation is exact for affine data") {
    std::vector<double> nodes(65);
    for (int i = 0; i <= 64; ++i) nodes[i] = 2.0 + 0.5 * (-1.0 + i / 64.0);
    History h(1, 64, nodes);
    for (double s = -1.0; s <= 0.0; s += 0.013)
        CHECK(h.value(s, 0) == doctest::Approx(2.0 + 0.5 * s).epsilon(1e-14));
}

TEST_CASE("cubic Hermite interpolation is exact for cubic data") {
    std::vector<double> samples(65), derivs(65);
    auto f = [](double s) { return 1.0 + s + s * s - 0.5 * s * s * s; };
    auto df = [](double s) { return 1.0 + 2.0 * s - 1.5 * s * s; };
    for (int i = 0; i <= 64; ++i) {
        double s = -1.0 + i / 64.0;
        samples[static_cast<std::size_t>(i)] = f(s);
        derivs[static_cast<std::size_t>(i)] = df(s);
    }
    History h(1, 64, samples, derivs);
    for (double s = -1.0; s <= 0.0; s += 0.007)
        CHECK(h.value(s, 0) == doctest::Approx(f(s)).epsilon(1e-13));
}

TEST_CASE("ordering predicates") {
    auto a = History::constant({1.0, 1.0});
    auto b = History::constant({1.0, 1.0});
    auto c = History::constant({2.0, 2.0});

    CHECK(order_leq(a, b));
    CHECK(order_leq(a, c));
    CHECK_FALSE(order_leq(c, a));

    CHECK_FALSE(order_lt(a, b));
    CHECK(order_lt(a, c));

    CHECK(order_ll(a, c));
    CHECK_FALSE(order_ll(a, b));

    SUBCASE("a single raised node makes lt true but ll false") {
        auto samples = std::vector<double>(65 * 2, 1.0);
        samples[0] = 1.5;
        History d(2, 64, std::move(samples));
        CHECK(order_lt(a, d));
        CHECK_FALSE(order_ll(a, d));
    }
    SUBCASE("slack tolerance") {
        auto e = History::constant({1.0 - 1e-12, 1.0 - 1e-12});
        CHECK(order_leq(a, e, 1e-10));
        CHECK_FALSE(order_leq(a, e, 0.0));
    }
}

TEST_CASE("part metric: closed forms") {
    auto x = History::constant1(2.0);
    auto y = History::constant1(3.0);
    CHECK(part_metric(x, y) == doctest::Approx(std::log(1.5)).epsilon(1e-12));
    CHECK(part_metric(x, x) == doctest::Approx(0.0).epsilon(1e-15));

    auto u = History::from_scalar_function([](double) { return 1.0; });
    auto v = History::from_scalar_function([](double s) { return s < -0.5 ? 4.0 : 0.25; });
    CHECK(part_metric(u, v) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("part metric agrees with a brute-force alpha search") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (int rep = 0; rep < 50; ++rep) {
        auto x = History::from_function([&](double) { return std::vector<double>{u(rng), u(rng)}; }, 2);
        auto y = History::from_function([&](double) { return std::vector<double>{u(rng), u(rng)}; }, 2);
        double p = part_metric(x, y);

        // smallest alpha >= 1 with x/alpha <= y <= alpha x, by bisection
        auto fits = [&](double alpha) {
            for (int i = 0; i < x.node_count(); ++i)
                for (int c = 0; c < 2; ++c) {
                    double xv = x.node(i, c), yv = y.node(i, c);
                    if (yv > alpha * xv + 1e-14 || yv < xv / alpha - 1e-14) return false;
                }
            return true;
        };
        double lo = 1.0, hi = 64.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (fits(mid) ? hi : lo) = mid;
        }
        CHECK(p == doctest::Approx(std::log(hi)).epsilon(1e-9));
    }
}

TEST_CASE("part metric properties: symmetry and triangle inequality") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    auto mk = [&] {
        return History::from_function([&](double) { return std::vector<double>{u(rng)}; }, 1);
    };
    for (int rep = 0; rep < 1000; ++rep) {
        auto x = mk(), y = mk(), z = mk();
        double pxy = part_metric(x, y);
        double pyx = part_metric(y, x);
        double pyz = part_metric(y, z);
        double pxz = part_metric(x, z);
        CHECK(pxy == doctest::Approx(pyx).epsilon(1e-12));
        CHECK(pxz <= pxy + pyz + 1e-12);
    }
}

TEST_CASE("part metric bounds the sup norm distance") {
    // ||x - y|| <= (2 e^p - e^{-p} - 1) * min(||x||, ||y||)
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    auto mk = [&] {
        return History::from_function([&](double) { return std::vector<double>{u(rng)}; }, 1);
    };
    for (int rep = 0; rep < 500; ++rep) {
        auto x = mk(), y = mk();
        double p = part_metric(x, y);
        double bound = (2.0 * std::exp(p) - std::exp(-p) - 1.0) *
                       std::min(x.sup_norm(), y.sup_norm());
        CHECK(History::sup_dist(x, y) <= bound + 1e-9);
    }
}

TEST_CASE("part metric rejects arguments off the open cone") {
    auto pos = History::constant1(1.0);
    auto zero = History::constant1(0.0);
    auto neg = History::constant1(-1.0);
    CHECK_THROWS_AS(part_metric(pos, zero), std::domain_error);
    CHECK_THROWS_AS(part_metric(neg, pos), std::domain_error);
}

TEST_CASE("scale, affine, add act node-wise") {
    auto x = History::constant({2.0, 2.0});
    auto s = scale(x, 0.5);
    CHECK(s.node(10, 0) == 1.0);
    auto mid = affine(x, s, 0.5);
    CHECK(mid.node(0, 1) == 1.5);
    auto sum = add(x, s);
    CHECK(sum.node(32, 0) == 3.0);
}

TEST_CASE("serialization formats") {
    auto h = History::from_scalar_function([](double s) { return 1.0 + s * s; });
    auto csv = h.to_csv();
    CHECK(csv.rfind("s,x1\n", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 66);  // header + 65 nodes
    auto j = h.to_json();
    CHECK(j.front() == '[');
    CHECK(j.back() == ']');
    CHECK(j.find("[-1,2]") != std::string::npos);  // node (-1, f(-1)=2)
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(History(1, 8, std::vector<double>(9, 1.0)), std::invalid_argument);
    History h(1, 16, std::vector<double>(17, 1.0));
    CHECK(h.node_count() == 17);
    CHECK_THROWS_AS(History(1, 64, std::vector<double>(10, 1.0)), std::invalid_argument);
    auto bad = std::vector<double>(65, 1.0);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(History(1, 64, bad), std::invalid_argument);
}
