#ifndef MONOFLOW_SOLVER_HPP
#define MONOFLOW_SOLVER_HPP

#include <functional>
#include <string>
#include <vector>

#include "monoflow/field.hpp"
#include "monoflow/history.hpp"

namespace monoflow {

struct SolveOptions {
    enum class Method { Rk4Fixed, HeunAdaptive };

    double step = 1.0 / 256.0;  // must divide the delay: 1/2^k
    Method method = Method::Rk4Fixed;
    double blowup_cap = 1e9;
    double tolerance = 1e-8;    // adaptive method only
};

/// Dense-output solution on [t_begin, t_end]: cubic Hermite between stored
/// nodes. Steps never straddle declared breakpoints; both one-sided derivative
/// limits are kept at every node, so each cell interpolates with the limits
/// taken from its own side of a breakpoint.
class TrajectorySegment {
public:
    enum class Status { Complete, BlewUp };

    TrajectorySegment() = default;

    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    int dim() const { return dim_; }
    Status status() const { return status_; }
    double blowup_time() const { return blowup_time_; }

    std::vector<double> value(double t) const;
    double value(double t, int c) const;
    double value1(double t) const { return value(t, 0); }
    double derivative(double t, int c) const;

    /// History x_t sampled on the phase grid; [t-1, t] must lie in the domain.
    History history_at(double t, int nodes_per_unit = History::kDefaultNodes) const;

    std::string to_csv(double dt) const;  // header t,x1..xN at uniform output step

    const std::vector<double>& node_times() const { return times_; }

private:
    friend class Integrator;

    std::size_t locate(double t) const;

    int dim_ = 0;
    Status status_ = Status::Complete;
    double blowup_time_ = 0.0;
    std::vector<double> times_;
    std::vector<double> values_;  // node-major, dim entries per node
    std::vector<double> derivs_;        // left limit of x' at each node
    std::vector<double> derivs_right_;  // right limit; differs only at breakpoints
};

/// Function supplying the delayed argument for times before the start of
/// integration. Used for ordinary initial histories and for the discontinuous
/// unit-pulse initial condition of fundamental solutions.
using DelayedSource = std::function<std::vector<double>(double)>;

/// Caratheodory ODE solve on [t0, T] (delayed argument of `f` fed zeros).
TrajectorySegment solve_ode(const VectorField& f, double t0, const std::vector<double>& x0,
                            double T, const SolveOptions& opts = {});

/// Method-of-steps DDE solve; the returned segment covers [-1, min(T, t*)]
/// with the initial history stored on [-1, 0].
TrajectorySegment solve_dde(const VectorField& f, const History& phi, double T,
                            const SolveOptions& opts = {});

/// DDE solve from a bare initial state at t=0 with an explicit delayed source
/// on [-1, 0). The source (unlike a History) may be discontinuous at 0, which
/// is exactly the fundamental-solution initial condition: state 1, source 0.
TrajectorySegment solve_dde_from_state(const VectorField& f, const std::vector<double>& x0,
                                       const DelayedSource& source, double T,
                                       const SolveOptions& opts = {});

/// extract_history(seg, t) == seg.history_at(t); named wrapper for symmetry.
History extract_history(const TrajectorySegment& seg, double t,
                        int nodes_per_unit = History::kDefaultNodes);

}  // namespace monoflow

#endif
