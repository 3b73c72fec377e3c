#ifndef MONOFLOW_LINEAR_HPP
#define MONOFLOW_LINEAR_HPP

#include <string>
#include <vector>

#include "monoflow/equilibria.hpp"
#include "monoflow/models.hpp"
#include "monoflow/signal.hpp"
#include "monoflow/solver.hpp"

namespace monoflow {

/// Fundamental solution U_f(t, s) of a homogeneous linear system, anchored at
/// s: U(s, s) = 1 (or the identity matrix). The scalar-delay kind additionally
/// satisfies U(t, s) = 0 for s - 1 <= t < s (unit pulse initial condition).
class FundamentalSolution {
public:
    enum class Kind { ScalarDelay, MatrixOde };

    /// d/dt U = -alpha(t) U + beta(t) U(t-1, s) on [s, s+T].
    static FundamentalSolution scalar_delay(const CoefficientSignal& alpha,
                                            const CoefficientSignal& beta, double s, double T,
                                            const SolveOptions& opts = {});
    /// Column-by-column solve of the cyclic system z1' = beta z_m - alpha_1 z1,
    /// zi' = z_{i-1} - alpha_i zi from the identity at t = s. Pass beta = 0 for
    /// the minorant system.
    static FundamentalSolution matrix_ode(const std::vector<CoefficientSignal>& alphas,
                                          const CoefficientSignal& beta, double s, double T,
                                          const SolveOptions& opts = {});

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double anchor() const { return s_; }
    double horizon() const { return T_; }
    bool blew_up() const;

    /// Scalar value U(t, s); defined for t in [s - 1, s + T] (ScalarDelay) or
    /// [s, s + T] (MatrixOde with dim 1, not used).
    double value(double t) const;
    /// Matrix entry U(t, s)[i][j].
    double value(double t, int i, int j) const;
    /// Max-abs norm of U(t, s).
    double norm(double t) const;

private:
    Kind kind_ = Kind::ScalarDelay;
    int dim_ = 1;
    double s_ = 0.0, T_ = 0.0;
    std::vector<TrajectorySegment> columns_;  // one per column (1 for scalar)
};

struct DecayEstimate {
    double K = 1.0;         // smallest majorant constant over the samples
    double delta = 0.0;     // fitted decay rate (positive when pass)
    double residual = 0.0;  // rms of log-envelope fit
    bool pass = false;
    double witness_t = 0.0;  // growth witness when fail
    std::string to_json() const;
};

/// Fits |U(t,s)| <= K e^{-delta (t-s)}: delta from a least-squares line
/// through the log of per-bucket envelope maxima over the tail half of the
/// horizon, K as the smallest constant making the bound hold at every sample.
/// Fails when the envelope slope is nonnegative.
DecayEstimate fit_decay(const FundamentalSolution& F);

/// Truncation depth tau with K C e^{-delta tau} e^delta / (e^delta - 1) <
/// eps / 2, where C bounds the unit-window integrals of the inhomogeneity.
double truncation_depth(const DecayEstimate& decay, double unit_window_bound, double eps);

/// btilde = int_{-inf}^0 U_f(0, s) gamma(s) ds for the scalar majorant
/// y' = -alpha y + beta y(t-1) + gamma, computed as a forward solve of the
/// inhomogeneous equation from zero data at depth -tau (variation of
/// constants makes that exactly the truncated integral).
double btilde(const CoefficientSignal& alpha, const CoefficientSignal& beta,
              const CoefficientSignal& gamma, const DecayEstimate& decay, double eps = 1e-8,
              const SolveOptions& opts = {});

/// atilde = int_{-inf}^0 exp(-int_s^0 alpha) h0(s) ds; requires a positive
/// floor on alpha for the tail bound.
double atilde(const CoefficientSignal& alpha, const CoefficientSignal& h0, double eps = 1e-8,
              const SolveOptions& opts = {});

struct LinearTraceResult {
    EquilibriumTrace a;  // sub-equilibrium, kind Sub
    EquilibriumTrace b;  // super-equilibrium, kind Super
    DecayEstimate decay;       // decay of the majorant actually used
    bool bounded_fallback = false;  // majorant replaced by beta=0, gamma=base+gain
};

/// Prop-5.3-style traces t -> atilde(f_t), t -> btilde(f_t) on [t_lo, t_hi],
/// via single forward inhomogeneous solves from zero data at depth
/// t_lo - tau. When the tight majorant (beta = gain) is not exponentially
/// stable but the shape is bounded, the bounded-shape majorant y' = -alpha y +
/// base + gain is used instead.
LinearTraceResult equilibrium_traces_from_linear(const ScalarPopulationModel& model, double t_lo,
                                                 double t_hi, double dt = 0.5, double eps = 1e-8,
                                                 const SolveOptions& opts = {});
LinearTraceResult equilibrium_traces_from_linear(const CyclicFeedbackModel& model, double t_lo,
                                                 double t_hi, double dt = 0.5, double eps = 1e-8,
                                                 const SolveOptions& opts = {});

}  // namespace monoflow

#endif
