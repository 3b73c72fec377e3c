#ifndef MONOFLOW_SIGNAL_HPP
#define MONOFLOW_SIGNAL_HPP

#include <string>
#include <vector>

namespace monoflow {

/// Nonnegative scalar time signal with exact antiderivative.
///
/// The four kinds cover the coefficient families used by the population
/// models: piecewise-constant and piecewise-linear periodic signals,
/// quasi-periodic signals sampled-and-held on a 1/64 grid (frequencies 1 and
/// sqrt(2), so the hold keeps antiderivatives exact), and an integrable
/// inverse-square-root spike.
class CoefficientSignal {
public:
    enum class Kind { Step, PiecewiseLinear, QuasiPeriodic, Spike };

    static CoefficientSignal constant(double c);
    /// Piecewise-constant periodic signal: values[i] on [breaks[i], breaks[i+1]),
    /// breaks[0] must be 0, all breaks inside [0, period).
    static CoefficientSignal step(double period, std::vector<double> breaks,
                                  std::vector<double> values);
    /// Continuous piecewise-linear periodic signal through (nodes[i], values[i]);
    /// nodes[0] = 0, implicit wrap node at `period` with values[0].
    static CoefficientSignal piecewise_linear(double period, std::vector<double> nodes,
                                              std::vector<double> values);
    /// base + a1*(sin t)_+ + a2*(sin sqrt(2) t)_+, held constant on cells of
    /// width 1/64 so the antiderivative is an exact cell sum.
    static CoefficientSignal quasi_periodic(double base, double a1, double a2);
    /// Periodic integrable spike: amp/(2 sqrt(t mod period)),
    /// one-period mass = amp*sqrt(period).
    static CoefficientSignal spike(double amplitude, double period);

    double value(double t) const;
    /// Exact antiderivative difference (composite cell sum for quasi-periodic).
    double integral(double s, double t) const;
    /// Appends times in (t0, t1) where the signal is allowed to jump or kink.
    void breakpoints_in(double t0, double t1, std::vector<double>& out) const;
    /// Guaranteed lower bound: value(t) >= floor() for all t.
    double floor_value() const;
    /// Uniform bound on unit-window integrals, sup_t of integral(t, t+1).
    double unit_window_bound() const;
    double max_value() const;

    Kind kind() const { return kind_; }
    double period() const { return period_; }  // 0 for aperiodic (quasi-periodic)

private:
    CoefficientSignal() = default;

    double value_in_period(double tau) const;    // tau in [0, period)
    double antiderivative_in_period(double tau) const;

    Kind kind_ = Kind::Step;
    double period_ = 1.0;
    std::vector<double> breaks_;   // step/pwl node times in [0, period)
    std::vector<double> values_;
    std::vector<double> cumint_;   // cumulative integral up to breaks_[i]
    double period_integral_ = 0.0;
    // quasi-periodic parameters
    double qp_base_ = 0.0, qp_a1_ = 0.0, qp_a2_ = 0.0;
    // spike parameters
    double spike_amp_ = 0.0;
};

/// Saturating monotone shapes for the delayed nonlinearity. All satisfy
/// shape(y) <= y for y >= 0, shape(0) = 0 and monotonicity; the bounded ones
/// additionally satisfy shape(y) <= 1. Identity covers exactly-linear models.
enum class SaturationShape { Rational, ExpSaturating, Clip, Identity };

double shape_value(SaturationShape s, double y);
bool shape_is_bounded(SaturationShape s);
std::string shape_name(SaturationShape s);

/// h(t, y) = base(t) + gain(t) * shape(max(y, 0)).
///
/// By construction h(t,y) = h(t,0) for y <= 0, h is nondecreasing in y, and
/// h(t,y) <= gain(t)*y + base(t) for y >= 0.
struct NonlinearitySpec {
    CoefficientSignal base;   // h(t,0), the gamma-like offset
    CoefficientSignal gain;
    SaturationShape shape = SaturationShape::Rational;

    double value(double t, double y) const {
        return base.value(t) + gain.value(t) * shape_value(shape, y > 0.0 ? y : 0.0);
    }
    double h0(double t) const { return base.value(t); }
};

}  // namespace monoflow

#endif
