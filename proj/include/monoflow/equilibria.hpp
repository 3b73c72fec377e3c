#ifndef MONOFLOW_EQUILIBRIA_HPP
#define MONOFLOW_EQUILIBRIA_HPP

#include <string>
#include <vector>

#include "monoflow/field.hpp"
#include "monoflow/history.hpp"
#include "monoflow/solver.hpp"

namespace monoflow {

enum class TraceKind { Sub, Super, Candidate };

/// Sampled map t -> value in R^N along a translate orbit, representing a
/// sub-/super-equilibrium or an equilibrium candidate. The history the trace
/// induces at time t is s -> value(t + s), s in [-1, 0]: a coherent family of
/// special solutions, not a family of unrelated histories.
class EquilibriumTrace {
public:
    EquilibriumTrace() = default;
    EquilibriumTrace(int dim, double t_lo, double t_hi, double dt, std::vector<double> samples,
                     TraceKind kind);

    static EquilibriumTrace constant(const std::vector<double>& v, double t_lo, double t_hi,
                                     double dt, TraceKind kind);
    static EquilibriumTrace from_function(
        const std::function<std::vector<double>(double)>& fn, int dim, double t_lo, double t_hi,
        double dt, TraceKind kind);

    int dim() const { return dim_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    double dt() const { return dt_; }
    TraceKind kind() const { return kind_; }
    int sample_count() const { return static_cast<int>(samples_.size()) / dim_; }
    double sample_time(int k) const { return t_lo_ + k * dt_; }
    double sample(int k, int c) const {
        return samples_[static_cast<std::size_t>(k) * static_cast<std::size_t>(dim_) +
                        static_cast<std::size_t>(c)];
    }

    std::vector<double> value(double t) const;  // linear interpolation
    double value(double t, int c) const;
    /// History induced at time t; requires t - 1 >= t_lo.
    History history_at(double t, int nodes_per_unit = History::kDefaultNodes) const;

    double min_entry() const;
    /// Sup distance at shared sample times restricted to [lo, hi].
    static double sup_dist(const EquilibriumTrace& a, const EquilibriumTrace& b, double lo,
                           double hi);

    std::string to_csv() const;

private:
    int dim_ = 0;
    double t_lo_ = 0.0, t_hi_ = 0.0, dt_ = 0.5;
    std::vector<double> samples_;
    TraceKind kind_ = TraceKind::Candidate;
};

/// One pullback step: trace(t) <- x_tau(0, f_{t-tau}, trace at t-tau), for
/// every sample time t with enough left margin; samples within tau + 1 of the
/// left edge are copied unchanged (they carry less pullback depth). tau = 0 is
/// the identity.
EquilibriumTrace pullback_step(const VectorField& f, const EquilibriumTrace& trace, double tau,
                               const SolveOptions& opts = {});

struct PullbackDiagnostics {
    std::vector<double> a_increments;  // sup increment per iteration
    std::vector<double> b_increments;
    double sandwich_residual = 0.0;    // max(0, u - v) over the window
    bool converged = false;
    bool monotone = true;
    int iterations = 0;
    std::string to_json() const;
};

struct PullbackLimit {
    EquilibriumTrace u;
    EquilibriumTrace v;
    PullbackDiagnostics diagnostics;
};

struct PullbackOptions {
    double tau_step = 2.0;       // increment per iteration
    int max_iterations = 30;
    double tolerance = 1e-8;     // Cauchy stop on sup increments
    double monotone_budget = 1e-8;
    double measure_lo = -2.0;    // window on which increments are measured
    SolveOptions solve;
};

/// Iterated pullback of a sub trace a and super trace b until the increments
/// fall below tolerance: u = lim a_tau (monotone increasing), v = lim b_tau
/// (monotone decreasing). Requires a <= b on the window.
PullbackLimit limit_equilibrium(const VectorField& f, const EquilibriumTrace& a,
                                const EquilibriumTrace& b, const PullbackOptions& opts = {});

/// Max over sampled t >= measure_lo of || u(f_{t+s}) - x_s(., f_t, u(f_t)) ||_inf:
/// the defect of the equilibrium identity over horizon s. Restrict measure_lo
/// to the converged part of a pullback window; samples near the left edge of
/// the trace carry less pullback depth and a bias that decays like the
/// majorant toward the right.
double equilibrium_residual(const EquilibriumTrace& u, const VectorField& f, double s,
                            double measure_lo = -1e300, const SolveOptions& opts = {});

struct AttractionSeries {
    std::vector<double> t;
    std::vector<double> part;       // p(u(f_t), x_t(., f, phi))
    std::vector<double> norm_dist;  // ||u(f_t) - x_t||_inf
    std::vector<double> norm_bound; // (2 e^p - e^{-p} - 1) min of sup norms
    std::string to_csv() const;
};

/// Part-metric series between the equilibrium orbit through u(f_0) and the
/// trajectory from phi, on a uniform t-grid of step dt over [0, T].
AttractionSeries forward_attraction(const VectorField& f, const EquilibriumTrace& u,
                                    const History& phi, double T, double dt = 1.0,
                                    const SolveOptions& opts = {});

}  // namespace monoflow

#endif
