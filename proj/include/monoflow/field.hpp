#ifndef MONOFLOW_FIELD_HPP
#define MONOFLOW_FIELD_HPP

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "monoflow/signal.hpp"

namespace monoflow {

enum class ConditionFlag { Kx, Ky, Kxy, K1, K2, S, StrongS };

std::string condition_name(ConditionFlag c);
ConditionFlag condition_from_name(const std::string& name);

/// Evaluable Caratheodory vector field f(t, x, y) with declared breakpoints.
///
/// `y` is the delayed argument (ignored when delayed() is false). Translation
/// is stored as an offset so translate() is exact: the translated field
/// evaluates the original one at shift + t.
class VectorField {
public:
    using Evaluator = std::function<void(double t, std::span<const double> x,
                                         std::span<const double> y, std::span<double> out)>;
    using BreakpointFn = std::function<void(double t0, double t1, std::vector<double>&)>;

    VectorField() = default;
    VectorField(int dim, bool delayed, Evaluator eval, BreakpointFn breakpoints,
                std::set<ConditionFlag> flags = {});

    int dim() const { return dim_; }
    bool delayed() const { return delayed_; }
    double shift() const { return shift_; }
    const std::set<ConditionFlag>& flags() const { return flags_; }

    void eval(double t, std::span<const double> x, std::span<const double> y,
              std::span<double> out) const;
    std::vector<double> eval(double t, const std::vector<double>& x,
                             const std::vector<double>& y) const;
    /// Scalar convenience (dim must be 1).
    double eval1(double t, double x, double y) const;

    /// Breakpoints of the (translated) field strictly inside (t0, t1), sorted.
    std::vector<double> breakpoints_in(double t0, double t1) const;

    VectorField translated(double s) const;

private:
    int dim_ = 0;
    bool delayed_ = false;
    double shift_ = 0.0;
    Evaluator eval_;
    BreakpointFn breakpoints_;
    std::set<ConditionFlag> flags_;
};

VectorField translate(const VectorField& f, double s);

struct ConditionReport {
    std::string condition;
    long trials = 0;
    double worst_violation = 0.0;
    bool has_witness = false;
    double witness_t = 0.0;
    std::vector<double> witness_points;  // flattened tuple that realizes the worst violation
    bool pass = true;

    std::string to_json() const;
};

struct ConditionSampler {
    unsigned seed = 1;
    long trials = 2000;
    double radius = 3.0;          // state box half-width
    double t_lo = 0.0, t_hi = 8.0;
    double tolerance = 1e-10;
    // strongS parameters: each subinterval of this length must contain a sample
    // with margin above the scaled strictness threshold
    double strict_interval = 1.0;
    double strict_scale = 1e-8;
};

/// Samples the named condition and reports the worst signed violation.
/// Sampled times avoid declared breakpoints (conditions hold a.e. only).
ConditionReport check_condition(const VectorField& f, ConditionFlag cond,
                                const ConditionSampler& sampler);

/// Piecewise-constant sampled function on cells (midpoint-sampled).
struct SampledFunction {
    std::vector<double> edges;   // size n+1, sorted
    std::vector<double> values;  // size n

    double value(double t) const;
    double integral(double a, double b) const;
    double max_value() const;
};

struct MBoundGrid {
    int cells = 128;
    int lattice_per_axis = 33;
    int random_points = 1000;
    unsigned seed = 1;
};

/// Optimal m-bound over the ball of radius j (sup norm box): for each time cell
/// the max of |f(t,x,y)|_inf over sampled x, y in B_j. Monotone in j by
/// construction of the nested sample sets.
SampledFunction optimal_m_bound(const VectorField& f, double radius, double t_lo, double t_hi,
                                const MBoundGrid& grid = {});

struct EquicontinuityResult {
    bool pass = false;
    double delta = 0.0;
};

/// Largest grid delta (multiples of r/4096) such that every window integral of
/// width delta inside [-r, r] stays <= eps, for every signal in the set.
EquicontinuityResult check_l1loc_equicontinuity(const std::vector<CoefficientSignal>& signals,
                                                double r, double eps);

}  // namespace monoflow

#endif
