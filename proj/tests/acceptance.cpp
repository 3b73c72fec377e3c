// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "monoflow/equilibria.hpp"
#include "monoflow/field.hpp"
#include "monoflow/history.hpp"
#include "monoflow/linear.hpp"
#include "monoflow/models.hpp"
#include "monoflow/semiflow.hpp"
#include "monoflow/signal.hpp"
#include "monoflow/solver.hpp"
#include "monoflow/topologies.hpp"

using namespace monoflow;

namespace {

const double kGolden = 0.5 * (1.0 + std::sqrt(5.0));

int failures = 0;

using Outcome = std::pair<bool, std::string>;

void criterion(const std::string& name, const std::function<Outcome()>& fn) {
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = fn();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    std::printf("%s: %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

Outcome monotonicity() {
    PairSampler sampler;
    sampler.count = 100;
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    for (const auto& name : scalar_preset_names()) {
        auto res = monotonicity_harness(scalar_preset(name).nonlinear(), sampler);
        worst = std::max(worst, res.worst_violation);
        if (!res.pass) {
            ok = false;
            detail += name + " violated: " + res.witness + "; ";
        }
    }
    for (const auto& name : cyclic_preset_names()) {
        auto res = monotonicity_harness(cyclic_preset(name).nonlinear(), sampler);
        worst = std::max(worst, res.worst_violation);
        if (!res.pass) {
            ok = false;
            detail += name + " violated: " + res.witness + "; ";
        }
    }
    PairSampler hard = sampler;
    hard.bump_amp = 2.0;
    auto anti = monotonicity_harness(antimonotone_fixture(), hard);
    if (anti.pass || anti.worst_violation < 0.5) {
        ok = false;
        detail += "anti-monotone control too weak: " + fmt(anti.worst_violation);
    }
    if (ok) {
        detail = "worst cooperative violation " + fmt(worst) + ", control violation " +
                 fmt(anti.worst_violation);
    }
    return {ok, detail};
}

Outcome strict_order() {
    PairSampler sampler;
    sampler.count = 20;
    HarnessOptions opts;
    opts.T = 5.0;
    opts.budget = 1e-6;
    // every scalar preset has alpha <= 2, so l = 2 bounds the instantaneous
    // Lipschitz constant of the field
    auto res = strict_order_harness(scalar_preset("golden").nonlinear(), sampler, 2.0, opts);
    auto res2 = strict_order_harness(scalar_preset("step").nonlinear(), sampler, 2.0, opts);
    bool ok = res.pass && res2.pass;
    return {ok, ok ? "floor margin " + fmt(-std::max(res.worst_violation, res2.worst_violation))
                   : res.witness + "; " + res2.witness};
}

Outcome sublinearity() {
    std::vector<double> lambdas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    PairSampler sampler;
    sampler.count = 50;
    bool ok = true;
    double worst = 0.0;
    std::string detail;
    for (const auto& name : {"golden", "linear", "step", "quasiperiodic"}) {
        auto res = sublinearity_harness(scalar_preset(name).nonlinear(), sampler, lambdas);
        worst = std::max(worst, res.worst_violation);
        if (!res.pass || res.worst_violation > 1e-6) {
            ok = false;
            detail += std::string(name) + ": " + res.witness + "; ";
        }
    }
    return {ok, ok ? "worst violation " + fmt(worst) : detail};
}

Outcome pullback_convergence() {
    auto check_limit = [](const std::string& preset, double target) -> std::string {
        auto model = scalar_preset(preset);
        auto traces = equilibrium_traces_from_linear(model, -30.0, 6.0);
        auto lim = limit_equilibrium(model.nonlinear(), traces.a, traces.b);
        if (!lim.diagnostics.converged) return preset + " did not converge";
        if (!lim.diagnostics.monotone) return preset + " increments not monotone";
        double err = 0.0;
        for (double t = -1.0; t <= 5.0 + 1e-9; t += 0.5) {
            err = std::max(err, std::abs(lim.u.value(t, 0) - target));
            err = std::max(err, std::abs(lim.v.value(t, 0) - target));
        }
        if (err > 1e-6) return preset + " limit error " + fmt(err);
        return "";
    };
    std::string e1 = check_limit("golden", kGolden);
    std::string e2 = check_limit("linear", 4.0 / 3.0);
    bool ok = e1.empty() && e2.empty();
    return {ok, ok ? "golden and linear limits within 1e-6" : e1 + " " + e2};
}

Outcome uniqueness_and_attraction() {
    auto model = scalar_preset("quasiperiodic");
    PullbackOptions popts;
    popts.max_iterations = 40;
    auto traces = equilibrium_traces_from_linear(model, -60.0, 6.0);
    auto lim = limit_equilibrium(model.nonlinear(), traces.a, traces.b, popts);
    if (!lim.diagnostics.converged) return {false, "pullback did not converge"};
    double uv = EquilibriumTrace::sup_dist(lim.u, lim.v, -2.0, 6.0);
    if (uv >= 1e-5) return {false, "||u - v|| = " + fmt(uv)};
    auto phi = scale(lim.u.history_at(0.0), 2.0);
    auto series = forward_attraction(model.nonlinear(), lim.u, phi, 60.0);
    for (std::size_t i = 1; i < series.part.size(); ++i) {
        if (series.part[i] > series.part[i - 1] + 1e-8) {
            return {false, "part metric increased at t = " + fmt(series.t[i])};
        }
    }
    if (series.part.back() >= 1e-4) {
        return {false, "part metric " + fmt(series.part.back()) + " at T = 60"};
    }
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        if (series.norm_dist[i] > series.norm_bound[i] + 1e-9) {
            return {false, "norm bound violated at t = " + fmt(series.t[i])};
        }
    }
    return {true, "||u - v|| = " + fmt(uv) + ", final part metric " + fmt(series.part.back())};
}

Outcome fundamental_solution() {
    // first delay interval: U(t) = exp(-int_0^t alpha), beta irrelevant
    auto alpha = CoefficientSignal::step(2.0, {0.0, 1.0}, {1.0, 2.0});
    auto F1 = FundamentalSolution::scalar_delay(alpha, CoefficientSignal::constant(1.0), 0.0,
                                                2.0);
    double e_first = 0.0;
    for (double t = 0.0; t <= 0.96875; t += 1.0 / 32.0) {
        e_first = std::max(e_first, std::abs(F1.value(t) - std::exp(-alpha.integral(0.0, t))));
    }
    if (e_first > 1e-10) return {false, "first-interval error " + fmt(e_first)};

    // alpha = 0, beta = 1 method of steps: 1, t, 2 + ((t-1)^2 - 1)/2
    auto F2 = FundamentalSolution::scalar_delay(CoefficientSignal::constant(0.0),
                                                CoefficientSignal::constant(1.0), 0.0, 3.0);
    auto exact = [](double t) {
        if (t <= 1.0) return 1.0;
        if (t <= 2.0) return t;
        return 2.0 + 0.5 * ((t - 1.0) * (t - 1.0) - 1.0);
    };
    double e_steps = 0.0;
    for (double t : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        e_steps = std::max(e_steps, std::abs(F2.value(t) - exact(t)));
    }
    if (e_steps > 1e-8) return {false, "method-of-steps error " + fmt(e_steps)};

    // decay rate of (alpha, beta) = (1, 0.25): dominant root of
    // lambda = -1 + 0.25 e^{-lambda}, about -0.56162
    auto F3 = FundamentalSolution::scalar_delay(CoefficientSignal::constant(1.0),
                                                CoefficientSignal::constant(0.25), 0.0, 40.0);
    auto est = fit_decay(F3);
    const double root = 0.56162;
    if (!est.pass || std::abs(est.delta - root) > 0.05 * root) {
        return {false, "fitted decay " + fmt(est.delta) + " vs root " + fmt(root)};
    }
    return {true, "first-interval " + fmt(e_first) + ", steps " + fmt(e_steps) + ", delta " +
                      fmt(est.delta)};
}

Outcome equilibrium_integrals() {
    auto one = CoefficientSignal::constant(1.0);
    auto zero = CoefficientSignal::constant(0.0);
    auto quarter = CoefficientSignal::constant(0.25);

    auto est0 = fit_decay(FundamentalSolution::scalar_delay(one, zero, 0.0, 30.0));
    double b0 = btilde(one, zero, one, est0);
    if (std::abs(b0 - 1.0) > 1e-8) return {false, "btilde(1,0,1) = " + fmt(b0)};

    auto est1 = fit_decay(FundamentalSolution::scalar_delay(one, quarter, 0.0, 40.0));
    double b1 = btilde(one, quarter, one, est1);
    if (std::abs(b1 - 4.0 / 3.0) > 1e-6) return {false, "btilde(1,0.25,1) = " + fmt(b1)};

    auto h0 = CoefficientSignal::step(2.0, {0.0, 1.0}, {0.0, 1.0});
    double a0 = atilde(one, h0);
    if (std::abs(a0 - 0.7310586) > 1e-6) return {false, "atilde step = " + fmt(a0)};

    // 0 << a <= b nodewise on every preset with a valid assumption bundle
    std::string detail;
    bool ok = true;
    auto check_traces = [&](const std::string& name, const LinearTraceResult& res) {
        if (res.a.min_entry() <= 0.0) {
            ok = false;
            detail += name + " sub-trace not strictly positive; ";
        }
        for (int k = 0; k < res.a.sample_count(); ++k) {
            for (int c = 0; c < res.a.dim(); ++c) {
                if (res.a.sample(k, c) > res.b.sample(k, c) + 1e-9) {
                    ok = false;
                    detail += name + " ordering violated; ";
                    return;
                }
            }
        }
    };
    for (const auto& name : scalar_preset_names()) {
        if (name == "unstable") continue;  // no exponentially stable majorant exists
        check_traces(name, equilibrium_traces_from_linear(scalar_preset(name), -4.0, 6.0));
    }
    for (const auto& name : cyclic_preset_names()) {
        check_traces(name, equilibrium_traces_from_linear(cyclic_preset(name), -4.0, 6.0));
    }
    if (!ok) return {false, detail};
    return {true, "btilde " + fmt(b0) + ", " + fmt(b1) + "; atilde " + fmt(a0) +
                      "; traces ordered and positive"};
}

Outcome cyclic_feedback() {
    auto model = cyclic_preset("cyclic-m2");
    auto traces = equilibrium_traces_from_linear(model, -30.0, 6.0);
    auto lim = limit_equilibrium(model.nonlinear(), traces.a, traces.b);
    if (!lim.diagnostics.converged) return {false, "pullback did not converge"};
    double err = 0.0;
    for (double t = -1.0; t <= 5.0 + 1e-9; t += 0.5) {
        for (int c = 0; c < 2; ++c) {
            err = std::max(err, std::abs(lim.u.value(t, c) - kGolden));
            err = std::max(err, std::abs(lim.v.value(t, c) - kGolden));
        }
    }
    if (err > 1e-6) return {false, "equilibrium error " + fmt(err)};
    auto Z = FundamentalSolution::matrix_ode(model.alphas, model.beta(), 0.0, 10.0);
    double zmin = 1e300;
    for (double t = 0.1; t <= 10.0 + 1e-9; t += 0.1) {
        for (int i = 0; i < model.m(); ++i) zmin = std::min(zmin, Z.value(t, i, 0));
    }
    if (zmin <= 0.0) return {false, "Z(t,0)e1 not strictly positive, min " + fmt(zmin)};
    return {true, "equilibrium error " + fmt(err) + ", min Z e1 entry " + fmt(zmin)};
}

Outcome continuous_dependence() {
    auto model = scalar_preset("quasiperiodic");
    auto basis = SeminormBasis::standard(1, 3);
    FieldMetric metric = [&](const VectorField& a, const VectorField& b) {
        return tp_distance(a, b, basis);
    };
    auto rows = continuity_harness(model.nonlinear(), History::constant1(1.0), metric, 12);
    if (rows.size() != 13) return {false, "expected 13 rows"};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].field_distance > rows[i - 1].field_distance + 1e-12) {
            return {false, "field distance increased at n = " + std::to_string(rows[i].n)};
        }
        if (rows[i].sup_error > rows[i - 1].sup_error + 1e-12) {
            return {false, "sup-error increased at n = " + std::to_string(rows[i].n)};
        }
    }
    if (rows.back().sup_error >= 1e-4) {
        return {false, "sup-error " + fmt(rows.back().sup_error) + " at n = 12"};
    }
    return {true, "both columns nonincreasing, sup-error " + fmt(rows.back().sup_error)};
}

Outcome integrator_self_consistency() {
    // fourth-order convergence between breakpoints
    VectorField forced(
        1, false,
        [](double t, std::span<const double> x, std::span<const double>, std::span<double> out) {
            out[0] = std::cos(t) - 0.5 * x[0];
        },
        nullptr);
    auto exact = 0.4 * (std::cos(2.0) + 2.0 * std::sin(2.0)) - 0.4 * std::exp(-1.0);
    SolveOptions coarse, fine;
    coarse.step = 1.0 / 32.0;
    fine.step = 1.0 / 64.0;
    double ec = std::abs(solve_ode(forced, 0.0, {0.0}, 2.0, coarse).value1(2.0) - exact);
    double ef = std::abs(solve_ode(forced, 0.0, {0.0}, 2.0, fine).value1(2.0) - exact);
    if (ec / ef < 8.0) return {false, "halving ratio " + fmt(ec / ef)};

    // cocycle identity on a smooth preset, within 10x the solver tolerance
    auto model = scalar_preset("golden");
    auto phi = History::constant1(1.3);
    auto [g1, psi1] = flow(2.0, model.nonlinear(), phi);
    auto [g2, psi2] = flow(1.5, g1, psi1);
    auto [g3, psi3] = flow(3.5, model.nonlinear(), phi);
    double cocycle_err = History::sup_dist(psi2, psi3);
    if (cocycle_err > 10.0 * SolveOptions{}.tolerance) {
        return {false, "cocycle error " + fmt(cocycle_err)};
    }

    // bitwise determinism of solves and of the seeded harness
    auto s1 = solve_dde(model.nonlinear(), phi, 5.0);
    auto s2 = solve_dde(model.nonlinear(), phi, 5.0);
    for (double t = -1.0; t <= 5.0; t += 1.0 / 64.0) {
        if (s1.value1(t) != s2.value1(t)) return {false, "solve not deterministic"};
    }
    PairSampler sampler;
    sampler.count = 10;
    auto h1 = monotonicity_harness(model.nonlinear(), sampler);
    auto h2 = monotonicity_harness(model.nonlinear(), sampler);
    if (h1.worst_violation != h2.worst_violation || h1.witness != h2.witness) {
        return {false, "seeded harness not deterministic"};
    }
    return {true, "halving ratio " + fmt(ec / ef) + ", cocycle error " + fmt(cocycle_err)};
}

}  // namespace

int main() {
    criterion("monotonicity on cooperative presets, anti-monotone control fails", monotonicity);
    criterion("strict order above the exponential floor", strict_order);
    criterion("sublinearity on the lambda grid with cone preservation", sublinearity);
    criterion("pullback sandwich converges to the known equilibria", pullback_convergence);
    criterion("u = v and forward attraction in the part metric", uniqueness_and_attraction);
    criterion("fundamental solution closed forms and decay rate", fundamental_solution);
    criterion("equilibrium integrals and trace ordering", equilibrium_integrals);
    criterion("cyclic feedback equilibrium and strong positivity", cyclic_feedback);
    criterion("continuous dependence on (f, phi)", continuous_dependence);
    criterion("integrator self-consistency", integrator_self_consistency);
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
