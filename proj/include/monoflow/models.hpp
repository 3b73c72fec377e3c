#ifndef MONOFLOW_MODELS_HPP
#define MONOFLOW_MODELS_HPP

#include <string>
#include <vector>

#include "monoflow/field.hpp"
#include "monoflow/signal.hpp"

namespace monoflow {

/// Delayed scalar population model x'(t) = -alpha(t) x(t) + h(t, x(t-1))
/// together with its linear majorant y' = -alpha y + beta y(t-1) + gamma and
/// minorant y' = -alpha y + h0(t). The majorant coefficients are beta = gain
/// and gamma = base of the nonlinearity, so domination h <= beta y + gamma
/// holds by construction for every saturating shape.
struct ScalarPopulationModel {
    CoefficientSignal alpha;
    NonlinearitySpec h;

    const CoefficientSignal& beta() const { return h.gain; }
    const CoefficientSignal& gamma() const { return h.base; }

    VectorField nonlinear() const;
    VectorField majorant() const;
    VectorField minorant() const;
};

/// Cyclic feedback ODE system x1' = h(t, x_m) - alpha_1 x1,
/// xi' = x_{i-1} - alpha_i xi for 2 <= i <= m. Non-delayed, dimension m >= 2.
struct CyclicFeedbackModel {
    std::vector<CoefficientSignal> alphas;  // size m >= 2
    NonlinearitySpec h;

    int m() const { return static_cast<int>(alphas.size()); }
    const CoefficientSignal& beta() const { return h.gain; }
    const CoefficientSignal& gamma() const { return h.base; }

    VectorField nonlinear() const;
    /// z1' = beta z_m - alpha_1 z1, homogeneous part of the linear majorant.
    VectorField majorant_homogeneous() const;
    /// z1' = -alpha_1 z1 (beta = 0), homogeneous minorant.
    VectorField minorant_homogeneous() const;
};

/// Validated constructors: reject specs violating the structural invariants
/// (positive alpha floor, nonnegative coefficients, linear domination).
ScalarPopulationModel make_scalar_population(CoefficientSignal alpha, NonlinearitySpec h);
CyclicFeedbackModel make_cyclic_feedback(std::vector<CoefficientSignal> alphas,
                                         NonlinearitySpec h);

/// Named preset catalog (see README): "golden", "linear", "linear-2", "step",
/// "quasiperiodic", "unstable" for the scalar model.
ScalarPopulationModel scalar_preset(const std::string& name);
/// "cyclic-m2", "cyclic-m3".
CyclicFeedbackModel cyclic_preset(const std::string& name);
std::vector<std::string> scalar_preset_names();
std::vector<std::string> cyclic_preset_names();

/// Anti-monotone scalar fixture x' = -x(t-1): fails the delayed Kamke
/// condition and order preservation; used as the negative control.
VectorField antimonotone_fixture();

struct AssumptionVerdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionVerdict> items;
    bool all_pass() const;
    std::string to_json() const;
};

/// Checks the scalar-model assumption bundle: coefficient admissibility,
/// monotone saturating nonlinearity, linear domination, empirical exponential
/// decay of the homogeneous majorant, and (strong) sublinearity.
AssumptionReport validate_assumptions(const ScalarPopulationModel& model);
AssumptionReport validate_assumptions(const CyclicFeedbackModel& model);

}  // namespace monoflow

#endif
