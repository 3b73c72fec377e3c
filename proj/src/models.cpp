#include "monoflow/models.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "monoflow/linear.hpp"

namespace monoflow {

namespace {

VectorField::BreakpointFn join_breakpoints(std::vector<CoefficientSignal> signals) {
    return [signals = std::move(signals)](double t0, double t1, std::vector<double>& out) {
        for (const auto& s : signals) s.breakpoints_in(t0, t1, out);
    };
}

void require_admissible(const CoefficientSignal& alpha, const NonlinearitySpec& h) {
    if (alpha.floor_value() <= 0.0)
        throw std::invalid_argument("alpha must have a positive floor (the null "
                                    "coefficient is not admissible)");
    // Linear domination h(t,y) <= gain(t) y + base(t) holds structurally for
    // every catalog shape (shape(y) <= y); sample as a guard against future
    // shape additions.
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> ut(0.0, 8.0), uy(0.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        double t = ut(rng), y = uy(rng);
        double lhs = h.value(t, y);
        double rhs = h.gain.value(t) * y + h.base.value(t);
        if (lhs > rhs + 1e-10) {
            std::ostringstream os;
            os << "linear domination fails at t=" << t << ", y=" << y << ": h=" << lhs
               << " > " << rhs;
            throw std::invalid_argument(os.str());
        }
    }
}

}  // namespace

VectorField ScalarPopulationModel::nonlinear() const {
    auto a = alpha;
    auto hh = h;
    return VectorField(
        1, true,
        [a, hh](double t, std::span<const double> x, std::span<const double> y,
                std::span<double> out) { out[0] = -a.value(t) * x[0] + hh.value(t, y[0]); },
        join_breakpoints({alpha, h.base, h.gain}),
        {ConditionFlag::Kx, ConditionFlag::Ky, ConditionFlag::S});
}

VectorField ScalarPopulationModel::majorant() const {
    auto a = alpha;
    auto b = h.gain;
    auto g = h.base;
    return VectorField(
        1, true,
        [a, b, g](double t, std::span<const double> x, std::span<const double> y,
                  std::span<double> out) {
            out[0] = -a.value(t) * x[0] + b.value(t) * y[0] + g.value(t);
        },
        join_breakpoints({alpha, h.base, h.gain}), {ConditionFlag::Kx, ConditionFlag::Ky});
}

VectorField ScalarPopulationModel::minorant() const {
    auto a = alpha;
    auto g = h.base;
    return VectorField(
        1, true,
        [a, g](double t, std::span<const double> x, std::span<const double>,
               std::span<double> out) { out[0] = -a.value(t) * x[0] + g.value(t); },
        join_breakpoints({alpha, h.base}), {ConditionFlag::Kx, ConditionFlag::Ky});
}

VectorField CyclicFeedbackModel::nonlinear() const {
    auto as = alphas;
    auto hh = h;
    const int n = m();
    return VectorField(
        n, false,
        [as, hh, n](double t, std::span<const double> x, std::span<const double>,
                    std::span<double> out) {
            out[0] = hh.value(t, x[static_cast<std::size_t>(n - 1)]) - as[0].value(t) * x[0];
            for (int i = 1; i < n; ++i) {
                auto ui = static_cast<std::size_t>(i);
                out[ui] = x[ui - 1] - as[ui].value(t) * x[ui];
            }
        },
        join_breakpoints([&] {
            auto v = alphas;
            v.push_back(h.base);
            v.push_back(h.gain);
            return v;
        }()),
        {ConditionFlag::K1, ConditionFlag::S});
}

VectorField CyclicFeedbackModel::majorant_homogeneous() const {
    auto as = alphas;
    auto b = h.gain;
    const int n = m();
    return VectorField(
        n, false,
        [as, b, n](double t, std::span<const double> x, std::span<const double>,
                   std::span<double> out) {
            out[0] = b.value(t) * x[static_cast<std::size_t>(n - 1)] - as[0].value(t) * x[0];
            for (int i = 1; i < n; ++i) {
                auto ui = static_cast<std::size_t>(i);
                out[ui] = x[ui - 1] - as[ui].value(t) * x[ui];
            }
        },
        join_breakpoints([&] {
            auto v = alphas;
            v.push_back(h.gain);
            return v;
        }()),
        {ConditionFlag::K1});
}

VectorField CyclicFeedbackModel::minorant_homogeneous() const {
    auto as = alphas;
    const int n = m();
    return VectorField(
        n, false,
        [as, n](double t, std::span<const double> x, std::span<const double>,
                std::span<double> out) {
            out[0] = -as[0].value(t) * x[0];
            for (int i = 1; i < n; ++i) {
                auto ui = static_cast<std::size_t>(i);
                out[ui] = x[ui - 1] - as[ui].value(t) * x[ui];
            }
        },
        join_breakpoints(alphas), {ConditionFlag::K1});
}

ScalarPopulationModel make_scalar_population(CoefficientSignal alpha, NonlinearitySpec h) {
    require_admissible(alpha, h);
    return ScalarPopulationModel{std::move(alpha), std::move(h)};
}

CyclicFeedbackModel make_cyclic_feedback(std::vector<CoefficientSignal> alphas,
                                         NonlinearitySpec h) {
    if (alphas.size() < 2)
        throw std::invalid_argument("cyclic feedback needs chain length m >= 2");
    for (const auto& a : alphas) require_admissible(a, h);
    return CyclicFeedbackModel{std::move(alphas), std::move(h)};
}

ScalarPopulationModel scalar_preset(const std::string& name) {
    if (name == "golden") {
        // fixed point x = 1 + x/(1+x): the golden ratio
        return make_scalar_population(
            CoefficientSignal::constant(1.0),
            {CoefficientSignal::constant(1.0), CoefficientSignal::constant(1.0),
             SaturationShape::Rational});
    }
    if (name == "linear") {
        // exactly linear: equilibrium gamma / (alpha - beta) = 4/3
        return make_scalar_population(
            CoefficientSignal::constant(1.0),
            {CoefficientSignal::constant(1.0), CoefficientSignal::constant(0.25),
             SaturationShape::Identity});
    }
    if (name == "linear-2") {
        // equilibrium 1 / (1 - 0.5) = 2
        return make_scalar_population(
            CoefficientSignal::constant(1.0),
            {CoefficientSignal::constant(1.0), CoefficientSignal::constant(0.5),
             SaturationShape::Identity});
    }
    if (name == "step") {
        // alpha alternating 1 / 1.5 on unit cells, saturating nonlinearity
        return make_scalar_population(
            CoefficientSignal::step(2.0, {0.0, 1.0}, {1.0, 1.5}),
            {CoefficientSignal::step(2.0, {0.0, 1.0}, {1.0, 0.5}),
             CoefficientSignal::constant(0.5), SaturationShape::Rational});
    }
    if (name == "quasiperiodic") {
        // genuinely non-periodic translate orbit; alpha floor 1, gain 0.5
        return make_scalar_population(
            CoefficientSignal::quasi_periodic(1.0, 0.2, 0.2),
            {CoefficientSignal::quasi_periodic(0.5, 0.15, 0.1),
             CoefficientSignal::constant(0.5), SaturationShape::Rational});
    }
    if (name == "unstable") {
        // majorant gain 2 > alpha: positive characteristic root, blows up
        return make_scalar_population(
            CoefficientSignal::constant(1.0),
            {CoefficientSignal::constant(1.0), CoefficientSignal::constant(2.0),
             SaturationShape::Identity});
    }
    throw std::invalid_argument("unknown scalar preset: " + name);
}

CyclicFeedbackModel cyclic_preset(const std::string& name) {
    NonlinearitySpec golden{CoefficientSignal::constant(1.0), CoefficientSignal::constant(1.0),
                            SaturationShape::Rational};
    if (name == "cyclic-m2")
        return make_cyclic_feedback(
            {CoefficientSignal::constant(1.0), CoefficientSignal::constant(1.0)}, golden);
    if (name == "cyclic-m3")
        return make_cyclic_feedback({CoefficientSignal::constant(1.0),
                                     CoefficientSignal::constant(1.0),
                                     CoefficientSignal::constant(1.0)},
                                    golden);
    throw std::invalid_argument("unknown cyclic preset: " + name);
}

std::vector<std::string> scalar_preset_names() {
    return {"golden", "linear", "linear-2", "step", "quasiperiodic", "unstable"};
}

std::vector<std::string> cyclic_preset_names() { return {"cyclic-m2", "cyclic-m3"}; }

VectorField antimonotone_fixture() {
    return VectorField(
        1, true,
        [](double, std::span<const double>, std::span<const double> y, std::span<double> out) {
            out[0] = -y[0];
        },
        nullptr);
}

bool AssumptionReport::all_pass() const {
    for (const auto& v : items)
        if (!v.pass) return false;
    return true;
}

std::string AssumptionReport::to_json() const {
    std::ostringstream os;
    os << "{\"assumptions\":[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        os << (i ? "," : "") << "{\"name\":\"" << items[i].name << "\",\"verdict\":\""
           << (items[i].pass ? "pass" : "fail") << "\",\"detail\":\"" << items[i].detail
           << "\"}";
    }
    os << "],\"all_pass\":" << (all_pass() ? "true" : "false") << "}";
    return os.str();
}

namespace {

AssumptionVerdict coefficient_verdict(const std::string& name,
                                      const std::vector<const CoefficientSignal*>& signals,
                                      double alpha_floor) {
    std::ostringstream os;
    bool pass = alpha_floor > 0.0;
    os << "alpha floor " << alpha_floor;
    for (const auto* s : signals) {
        double c = s->unit_window_bound();
        if (!(c < 1e12)) pass = false;
        os << ", unit-window bound " << c;
    }
    return {name, pass, os.str()};
}

}  // namespace

AssumptionReport validate_assumptions(const ScalarPopulationModel& model) {
    AssumptionReport rep;
    ConditionSampler sampler;

    const CoefficientSignal& beta = model.beta();
    const CoefficientSignal& gamma = model.gamma();
    rep.items.push_back(
        coefficient_verdict("A1-coefficients", {&model.alpha, &beta, &gamma},
                            model.alpha.floor_value()));

    // h in E2: monotone in the delayed argument and clamped below zero
    auto ky = check_condition(model.nonlinear(), ConditionFlag::Ky, sampler);
    bool clamp = true;
    for (double t = 0.1; t < 8.0; t += 0.7)
        if (std::abs(model.h.value(t, -3.0) - model.h.value(t, 0.0)) > 1e-12) clamp = false;
    rep.items.push_back({"A2-nonlinearity-class", ky.pass && clamp,
                         "Ky worst violation " + std::to_string(ky.worst_violation)});

    // domination h(t,y) <= beta y + gamma
    bool dom = true;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ut(0.0, 8.0), uy(0.0, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        double t = ut(rng), y = uy(rng);
        double gap = model.h.value(t, y) - beta.value(t) * y - gamma.value(t);
        worst = std::max(worst, gap);
        if (gap > 1e-10) dom = false;
    }
    rep.items.push_back({"A3-linear-domination", dom, "worst gap " + std::to_string(worst)});

    // empirical exponential decay of the homogeneous majorant (with the
    // bounded-shape fallback when the tight pair is not stable)
    auto traces = equilibrium_traces_from_linear(model, -40.0, 0.0);
    std::ostringstream dd;
    dd << "K=" << traces.decay.K << " delta=" << traces.decay.delta
       << (traces.bounded_fallback ? " (bounded-shape majorant)" : " (tight majorant)");
    rep.items.push_back({"A4-exponential-decay", traces.decay.pass, dd.str()});

    auto s = check_condition(model.nonlinear(), ConditionFlag::S, sampler);
    auto ss = check_condition(model.nonlinear(), ConditionFlag::StrongS, sampler);
    rep.items.push_back({"A5-sublinearity", s.pass && ss.pass,
                         std::string("S ") + (s.pass ? "pass" : "fail") + ", strongS " +
                             (ss.pass ? "pass" : "fail")});
    return rep;
}

AssumptionReport validate_assumptions(const CyclicFeedbackModel& model) {
    AssumptionReport rep;
    ConditionSampler sampler;

    std::vector<const CoefficientSignal*> sigs;
    double floor = 1e300;
    for (const auto& a : model.alphas) {
        sigs.push_back(&a);
        floor = std::min(floor, a.floor_value());
    }
    const CoefficientSignal& beta = model.beta();
    const CoefficientSignal& gamma = model.gamma();
    sigs.push_back(&beta);
    sigs.push_back(&gamma);
    rep.items.push_back(coefficient_verdict("B1-coefficients", sigs, floor));

    auto k1 = check_condition(model.nonlinear(), ConditionFlag::K1, sampler);
    rep.items.push_back({"B2-cooperativity", k1.pass,
                         "K1 worst violation " + std::to_string(k1.worst_violation)});

    bool dom = true;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ut(0.0, 8.0), uy(0.0, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        double t = ut(rng), y = uy(rng);
        double gap = model.h.value(t, y) - beta.value(t) * y - gamma.value(t);
        worst = std::max(worst, gap);
        if (gap > 1e-10) dom = false;
    }
    rep.items.push_back({"B3-linear-domination", dom, "worst gap " + std::to_string(worst)});

    auto traces = equilibrium_traces_from_linear(model, -40.0, 0.0);
    std::ostringstream dd;
    dd << "K=" << traces.decay.K << " delta=" << traces.decay.delta
       << (traces.bounded_fallback ? " (bounded-shape majorant)" : " (tight majorant)");
    rep.items.push_back({"B4-exponential-decay", traces.decay.pass, dd.str()});

    // The chain components are exactly linear, so strict margins live in the
    // feedback nonlinearity alone; probe h through a scalar auxiliary field.
    auto s = check_condition(model.nonlinear(), ConditionFlag::S, sampler);
    auto hh = model.h;
    VectorField probe(
        1, true,
        [hh](double t, std::span<const double>, std::span<const double> y,
             std::span<double> out) { out[0] = hh.value(t, y[0]); },
        nullptr);
    auto ss = check_condition(probe, ConditionFlag::StrongS, sampler);
    rep.items.push_back({"B5-sublinearity", s.pass && ss.pass,
                         std::string("S ") + (s.pass ? "pass" : "fail") +
                             ", strongS of h " + (ss.pass ? "pass" : "fail")});
    return rep;
}

}  // namespace monoflow
