#include "monoflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monoflow {

namespace {
constexpr double kQpCell = 1.0 / 64.0;
const double kSqrt2 = std::sqrt(2.0);

double positive_part(double x) { return x > 0.0 ? x : 0.0; }
}  // namespace

CoefficientSignal CoefficientSignal::constant(double c) {
    return step(1.0, {0.0}, {c});
}

CoefficientSignal CoefficientSignal::step(double period, std::vector<double> breaks,
                                          std::vector<double> values) {
    if (period <= 0.0) throw std::invalid_argument("signal period must be positive");
    if (breaks.empty() || breaks.size() != values.size() || breaks.front() != 0.0)
        throw std::invalid_argument("step signal needs breaks starting at 0 matching values");
    if (!std::is_sorted(breaks.begin(), breaks.end()) || breaks.back() >= period)
        throw std::invalid_argument("step breaks must be sorted inside [0, period)");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("signal values must be nonnegative");
    CoefficientSignal s;
    s.kind_ = Kind::Step;
    s.period_ = period;
    s.breaks_ = std::move(breaks);
    s.values_ = std::move(values);
    s.cumint_.assign(s.breaks_.size(), 0.0);
    for (std::size_t i = 1; i < s.breaks_.size(); ++i)
        s.cumint_[i] = s.cumint_[i - 1] + s.values_[i - 1] * (s.breaks_[i] - s.breaks_[i - 1]);
    s.period_integral_ = s.cumint_.back() + s.values_.back() * (period - s.breaks_.back());
    return s;
}

CoefficientSignal CoefficientSignal::piecewise_linear(double period, std::vector<double> nodes,
                                                      std::vector<double> values) {
    if (period <= 0.0) throw std::invalid_argument("signal period must be positive");
    if (nodes.empty() || nodes.size() != values.size() || nodes.front() != 0.0)
        throw std::invalid_argument("piecewise-linear signal needs nodes starting at 0");
    if (!std::is_sorted(nodes.begin(), nodes.end()) || nodes.back() >= period)
        throw std::invalid_argument("nodes must be sorted inside [0, period)");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("signal values must be nonnegative");
    CoefficientSignal s;
    s.kind_ = Kind::PiecewiseLinear;
    s.period_ = period;
    s.breaks_ = std::move(nodes);
    s.values_ = std::move(values);
    s.cumint_.assign(s.breaks_.size(), 0.0);
    auto node_val = [&](std::size_t i) { return s.values_[i]; };
    for (std::size_t i = 1; i < s.breaks_.size(); ++i) {
        double w = s.breaks_[i] - s.breaks_[i - 1];
        s.cumint_[i] = s.cumint_[i - 1] + 0.5 * (node_val(i - 1) + node_val(i)) * w;
    }
    double wlast = period - s.breaks_.back();
    s.period_integral_ = s.cumint_.back() + 0.5 * (s.values_.back() + s.values_.front()) * wlast;
    return s;
}

CoefficientSignal CoefficientSignal::quasi_periodic(double base, double a1, double a2) {
    if (base < 0.0 || a1 < 0.0 || a2 < 0.0)
        throw std::invalid_argument("quasi-periodic parameters must be nonnegative");
    CoefficientSignal s;
    s.kind_ = Kind::QuasiPeriodic;
    s.period_ = 0.0;
    s.qp_base_ = base;
    s.qp_a1_ = a1;
    s.qp_a2_ = a2;
    return s;
}

CoefficientSignal CoefficientSignal::spike(double amplitude, double period) {
    if (amplitude < 0.0 || period <= 0.0)
        throw std::invalid_argument("spike needs nonnegative amplitude, positive period");
    CoefficientSignal s;
    s.kind_ = Kind::Spike;
    s.period_ = period;
    s.spike_amp_ = amplitude;
    s.period_integral_ = amplitude * std::sqrt(period);
    return s;
}

double CoefficientSignal::value_in_period(double tau) const {
    switch (kind_) {
        case Kind::Step: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), tau);
            return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
        }
        case Kind::PiecewiseLinear: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), tau);
            std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
            double t0 = breaks_[i], v0 = values_[i];
            double t1, v1;
            if (i + 1 < breaks_.size()) {
                t1 = breaks_[i + 1];
                v1 = values_[i + 1];
            } else {
                t1 = period_;
                v1 = values_.front();
            }
            return v0 + (v1 - v0) * (tau - t0) / (t1 - t0);
        }
        case Kind::Spike: {
            double u = std::max(tau, 1e-12);
            return 0.5 * spike_amp_ / std::sqrt(u);
        }
        default:
            throw std::logic_error("unreachable");
    }
}

double CoefficientSignal::antiderivative_in_period(double tau) const {
    switch (kind_) {
        case Kind::Step: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), tau);
            std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
            return cumint_[i] + values_[i] * (tau - breaks_[i]);
        }
        case Kind::PiecewiseLinear: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), tau);
            std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
            double v = value_in_period(tau);
            return cumint_[i] + 0.5 * (values_[i] + v) * (tau - breaks_[i]);
        }
        case Kind::Spike:
            return spike_amp_ * std::sqrt(tau);
        default:
            throw std::logic_error("unreachable");
    }
}

double CoefficientSignal::value(double t) const {
    if (kind_ == Kind::QuasiPeriodic) {
        double u = std::floor(t / kQpCell) * kQpCell;
        return qp_base_ + qp_a1_ * positive_part(std::sin(u)) +
               qp_a2_ * positive_part(std::sin(kSqrt2 * u));
    }
    double tau = std::fmod(t, period_);
    if (tau < 0.0) tau += period_;
    return value_in_period(tau);
}

double CoefficientSignal::integral(double s, double t) const {
    if (t < s) return -integral(t, s);
    if (kind_ == Kind::QuasiPeriodic) {
        // exact for the sampled-and-held signal: sum full cells, trim both ends
        double acc = 0.0;
        long k0 = static_cast<long>(std::floor(s / kQpCell));
        long k1 = static_cast<long>(std::floor(t / kQpCell));
        if (k0 == k1) return value(s) * (t - s);
        acc += value(s) * ((k0 + 1) * kQpCell - s);
        for (long k = k0 + 1; k < k1; ++k) acc += value(k * kQpCell) * kQpCell;
        acc += value(t) * (t - k1 * kQpCell);
        return acc;
    }
    auto abs_antideriv = [this](double x) {
        double n = std::floor(x / period_);
        double tau = x - n * period_;
        return n * period_integral_ + antiderivative_in_period(tau);
    };
    return abs_antideriv(t) - abs_antideriv(s);
}

void CoefficientSignal::breakpoints_in(double t0, double t1, std::vector<double>& out) const {
    if (t1 <= t0) return;
    if (kind_ == Kind::QuasiPeriodic) {
        long k = static_cast<long>(std::ceil(t0 / kQpCell));
        for (double b = k * kQpCell; b < t1; b += kQpCell)
            if (b > t0) out.push_back(b);
        return;
    }
    if (kind_ == Kind::Spike) {
        long k = static_cast<long>(std::ceil(t0 / period_));
        for (double b = k * period_; b < t1; b += period_)
            if (b > t0) out.push_back(b);
        return;
    }
    long n0 = static_cast<long>(std::floor(t0 / period_));
    long n1 = static_cast<long>(std::floor(t1 / period_));
    for (long n = n0; n <= n1; ++n)
        for (double br : breaks_) {
            double b = n * period_ + br;
            if (b > t0 && b < t1) out.push_back(b);
        }
}

double CoefficientSignal::floor_value() const {
    switch (kind_) {
        case Kind::Step:
        case Kind::PiecewiseLinear:
            return *std::min_element(values_.begin(), values_.end());
        case Kind::QuasiPeriodic:
            return qp_base_;
        case Kind::Spike:
            return 0.5 * spike_amp_ / std::sqrt(period_);
    }
    return 0.0;
}

double CoefficientSignal::max_value() const {
    switch (kind_) {
        case Kind::Step:
        case Kind::PiecewiseLinear:
            return *std::max_element(values_.begin(), values_.end());
        case Kind::QuasiPeriodic:
            return qp_base_ + qp_a1_ + qp_a2_;
        case Kind::Spike:
            return 0.5 * spike_amp_ / std::sqrt(1e-12);
    }
    return 0.0;
}

double CoefficientSignal::unit_window_bound() const {
    if (kind_ == Kind::QuasiPeriodic) return qp_base_ + qp_a1_ + qp_a2_;
    if (kind_ == Kind::Spike) {
        // one full spike plus the steepest partial window
        double n = std::ceil(1.0 / period_);
        return (n + 1.0) * period_integral_;
    }
    // sup over window starts; attained with start at a breakpoint
    double best = 0.0;
    for (double br : breaks_) best = std::max(best, integral(br, br + 1.0));
    // also scan a modest grid to cover interior maxima of pwl signals
    for (int i = 0; i < 64; ++i) {
        double s = period_ * i / 64.0;
        best = std::max(best, integral(s, s + 1.0));
    }
    return best;
}

double shape_value(SaturationShape s, double y) {
    switch (s) {
        case SaturationShape::Rational: return y / (1.0 + y);
        case SaturationShape::ExpSaturating: return 1.0 - std::exp(-y);
        case SaturationShape::Clip: return std::min(y, 1.0);
        case SaturationShape::Identity: return y;
    }
    return 0.0;
}

bool shape_is_bounded(SaturationShape s) { return s != SaturationShape::Identity; }

std::string shape_name(SaturationShape s) {
    switch (s) {
        case SaturationShape::Rational: return "rational";
        case SaturationShape::ExpSaturating: return "exp-saturating";
        case SaturationShape::Clip: return "clip";
        case SaturationShape::Identity: return "identity";
    }
    return "?";
}

}  // namespace monoflow
