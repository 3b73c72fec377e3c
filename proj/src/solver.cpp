#include "monoflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monoflow {

namespace {

bool almost_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Step boundaries on [t0, T]: multiples of h, declared breakpoints, and (for
// delayed fields) breakpoints shifted by the delay. Crossing a t-jump of the
// field inside an RK stage would destroy the order of the scheme.
std::vector<double> step_schedule(const VectorField& f, double t0, double T, double h,
                                  bool delayed) {
    std::vector<double> ts;
    long n = static_cast<long>(std::ceil((T - t0) / h - 1e-9));
    for (long k = 0; k < n; ++k) ts.push_back(t0 + k * h);
    ts.push_back(T);
    for (double b : f.breakpoints_in(t0, T)) ts.push_back(b);
    if (delayed)
        for (double b : f.breakpoints_in(t0 - 1.0, T - 1.0)) {
            double s = b + 1.0;
            if (s > t0 && s < T) ts.push_back(s);
        }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             ts.end());
    return ts;
}

}  // namespace

std::size_t TrajectorySegment::locate(double t) const {
    if (t < times_.front() - 1e-9 || t > times_.back() + 1e-9)
        throw std::out_of_range("trajectory queried outside its domain");
    if (status_ == Status::BlewUp && t > blowup_time_ + 1e-12)
        throw std::out_of_range("trajectory queried beyond blow-up time");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    return std::min(i, times_.size() - 2);
}

double TrajectorySegment::value(double t, int c) const {
    std::size_t i = locate(t);
    const auto n = static_cast<std::size_t>(dim_);
    if (almost_equal(t, times_[i])) return values_[i * n + static_cast<std::size_t>(c)];
    if (almost_equal(t, times_[i + 1])) return values_[(i + 1) * n + static_cast<std::size_t>(c)];
    double h = times_[i + 1] - times_[i];
    double u = (t - times_[i]) / h;
    double y0 = values_[i * n + static_cast<std::size_t>(c)];
    double y1 = values_[(i + 1) * n + static_cast<std::size_t>(c)];
    double d0 = derivs_right_[i * n + static_cast<std::size_t>(c)];
    double d1 = derivs_[(i + 1) * n + static_cast<std::size_t>(c)];
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 +
           (u3 - u2) * h * d1;
}

std::vector<double> TrajectorySegment::value(double t) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    for (int c = 0; c < dim_; ++c) out[static_cast<std::size_t>(c)] = value(t, c);
    return out;
}

double TrajectorySegment::derivative(double t, int c) const {
    std::size_t i = locate(t);
    const auto n = static_cast<std::size_t>(dim_);
    double h = times_[i + 1] - times_[i];
    double u = (t - times_[i]) / h;
    double y0 = values_[i * n + static_cast<std::size_t>(c)];
    double y1 = values_[(i + 1) * n + static_cast<std::size_t>(c)];
    double d0 = derivs_right_[i * n + static_cast<std::size_t>(c)];
    double d1 = derivs_[(i + 1) * n + static_cast<std::size_t>(c)];
    double u2 = u * u;
    return ((6 * u2 - 6 * u) * y0 + (3 * u2 - 4 * u + 1) * h * d0 + (-6 * u2 + 6 * u) * y1 +
            (3 * u2 - 2 * u) * h * d1) /
           h;
}

History TrajectorySegment::history_at(double t, int nodes_per_unit) const {
    if (t - 1.0 < t_begin() - 1e-9) throw std::out_of_range("history window before segment start");
    std::vector<double> samples, derivs;
    const auto n = static_cast<std::size_t>(dim_);
    samples.reserve(static_cast<std::size_t>(nodes_per_unit + 1) * n);
    derivs.reserve(samples.capacity());
    for (int i = 0; i <= nodes_per_unit; ++i) {
        double s = t - 1.0 + double(i) / nodes_per_unit;
        for (int c = 0; c < dim_; ++c) {
            samples.push_back(value(s, c));
            derivs.push_back(derivative(s, c));
        }
    }
    return History(dim_, nodes_per_unit, std::move(samples), std::move(derivs));
}

std::string TrajectorySegment::to_csv(double dt) const {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (int c = 0; c < dim_; ++c) os << ",x" << (c + 1);
    os << "\n";
    double last = status_ == Status::BlewUp ? blowup_time_ : t_end();
    for (double t = t_begin(); t <= last + 1e-12; t += dt) {
        double tq = std::min(t, last);
        os << tq;
        for (int c = 0; c < dim_; ++c) os << "," << value(tq, c);
        os << "\n";
    }
    return os.str();
}

History extract_history(const TrajectorySegment& seg, double t, int nodes_per_unit) {
    return seg.history_at(t, nodes_per_unit);
}

/// Shared integration core. Owns the growing node arrays; the delayed argument
/// is looked up in the already-computed dense output, or in the initial source
/// for times before the start (the method of steps, implicitly: steps are <= 1
/// so the lookup always lands in finished territory).
class Integrator {
public:
    Integrator(const VectorField& f, double t0, const std::vector<double>& x0,
               DelayedSource source, const SolveOptions& opts)
        : f_(f), opts_(opts), t0_(t0), source_(std::move(source)) {
        seg_.dim_ = f.dim();
        push_node(t0, x0, t0);
    }

    /// Nodes stored before the start node in the returned segment (the initial
    /// history of a DDE solve). Times must all precede t0.
    void set_preamble(std::vector<double> times, std::vector<double> values,
                      std::vector<double> derivs) {
        seg_.times_.insert(seg_.times_.begin(), times.begin(), times.end());
        seg_.values_.insert(seg_.values_.begin(), values.begin(), values.end());
        seg_.derivs_.insert(seg_.derivs_.begin(), derivs.begin(), derivs.end());
        seg_.derivs_right_.insert(seg_.derivs_right_.begin(), derivs.begin(), derivs.end());
    }

    TrajectorySegment run(double T) {
        auto schedule = step_schedule(f_, t0_, T, opts_.step, f_.delayed());
        std::vector<bool> is_break(schedule.size(), false);
        {
            // query past T so a jump exactly at the final time still nudges
            // the last stage to the left of the discontinuity
            auto bps = f_.breakpoints_in(t0_, T + opts_.step);
            if (f_.delayed()) {
                // jumps of the delayed source (field breakpoints and the
                // history/solution splice at t0) reach the integrand one
                // delay later and need the same one-sided evaluation
                for (double b : f_.breakpoints_in(t0_ - 1.0, T - 1.0 + opts_.step))
                    bps.push_back(b + 1.0);
                bps.push_back(t0_ + 1.0);
                std::sort(bps.begin(), bps.end());
            }
            std::size_t j = 0;
            for (std::size_t i = 0; i < schedule.size(); ++i) {
                while (j < bps.size() && bps[j] < schedule[i] - 1e-12) ++j;
                if (j < bps.size() && std::abs(bps[j] - schedule[i]) < 1e-12) is_break[i] = true;
            }
        }
        for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
            bool ok = opts_.method == SolveOptions::Method::Rk4Fixed
                          ? rk4_step(schedule[i], schedule[i + 1], is_break[i],
                                     is_break[i + 1])
                          : heun_step(schedule[i], schedule[i + 1], is_break[i],
                                      is_break[i + 1],
                                      opts_.tolerance * (schedule[i + 1] - schedule[i]) /
                                          std::max(1e-12, T - t0_));
            if (!ok) break;  // blow-up
        }
        return std::move(seg_);
    }

private:
    // `teval` is the (possibly left-nudged) time for the stored derivative so
    // dense output of the cell ending here uses the left limit at a jump; the
    // next step re-evaluates its first stage on the right.
    void push_node(double t, const std::vector<double>& x, double teval) {
        seg_.times_.push_back(t);
        seg_.values_.insert(seg_.values_.end(), x.begin(), x.end());
        auto d = deriv(teval, x);
        seg_.derivs_.insert(seg_.derivs_.end(), d.begin(), d.end());
        seg_.derivs_right_.insert(seg_.derivs_right_.end(), d.begin(), d.end());
    }

    /// Replace the right-limit derivative of the most recent node. Called when
    /// a step starts at a breakpoint: its first stage re-evaluates the field on
    /// the right of the jump, and the cell it opens must interpolate with that
    /// value rather than the left limit stored when the node was pushed.
    void set_last_right_deriv(const std::vector<double>& d) {
        std::copy(d.begin(), d.end(), seg_.derivs_right_.end() - static_cast<long>(d.size()));
    }

    std::vector<double> delayed_value(double t) const {
        if (!f_.delayed()) return std::vector<double>(static_cast<std::size_t>(f_.dim()), 0.0);
        double tq = t - 1.0;
        if (tq < t0_ - 1e-12) return source_(tq);
        return seg_.value(std::min(tq, seg_.times_.back()));
    }

    std::vector<double> deriv(double t, const std::vector<double>& x) const {
        auto y = delayed_value(t);
        std::vector<double> out(static_cast<std::size_t>(f_.dim()));
        f_.eval(t, x, y, out);
        return out;
    }

    bool check_blowup(double t, const std::vector<double>& x) {
        for (double v : x)
            if (!(std::abs(v) < opts_.blowup_cap)) {
                seg_.status_ = TrajectorySegment::Status::BlewUp;
                seg_.blowup_time_ = t;
                return true;
            }
        return false;
    }

    std::vector<double> last_state() const {
        const auto n = static_cast<std::size_t>(f_.dim());
        return {seg_.values_.end() - static_cast<long>(n), seg_.values_.end()};
    }
    std::vector<double> last_deriv() const {
        const auto n = static_cast<std::size_t>(f_.dim());
        return {seg_.derivs_.end() - static_cast<long>(n), seg_.derivs_.end()};
    }

    // One RK4 step on [a, b]. When b is a declared breakpoint the final stage
    // is evaluated infinitesimally to the left so it never reads the
    // right-hand piece of the field.
    bool rk4_step(double a, double b, bool a_is_break, bool b_is_break) {
        const auto n = static_cast<std::size_t>(f_.dim());
        double h = b - a;
        double tb = b_is_break ? b - 1e-9 * h : b;
        auto x0 = last_state();
        // the stored start derivative was evaluated on the left of a jump;
        // the first stage needs the right-hand piece of the field
        std::vector<double> k1;
        if (a_is_break) {
            k1 = deriv(a, x0);
            set_last_right_deriv(k1);
        } else {
            k1 = last_deriv();
        }
        std::vector<double> tmp(n);
        double tm = a + 0.5 * h;
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x0[i] + 0.5 * h * k1[i];
        auto k2 = deriv(tm, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x0[i] + 0.5 * h * k2[i];
        auto k3 = deriv(tm, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x0[i] + h * k3[i];
        auto k4 = deriv(tb, tmp);
        std::vector<double> x1(n);
        for (std::size_t i = 0; i < n; ++i)
            x1[i] = x0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        for (double v : x1)
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "non-finite state after step ending at t=" << b;
                throw std::runtime_error(os.str());
            }
        push_node(b, x1, tb);
        return !check_blowup(b, x1);
    }

    // Adaptive Heun with an embedded Euler error estimate, bisecting on
    // rejection; substep nodes are recorded for dense output.
    bool heun_step(double a, double b, bool a_is_break, bool b_is_break, double tol) {
        const auto n = static_cast<std::size_t>(f_.dim());
        double t = a;
        double h = b - a;
        bool first = true;
        while (t < b - 1e-12) {
            double hs = std::min(h, b - t);
            double te = t + hs;
            double teval = (b_is_break && almost_equal(te, b)) ? te - 1e-9 * hs : te;
            auto x0 = last_state();
            std::vector<double> k1;
            if (first && a_is_break) {
                k1 = deriv(a, x0);
                set_last_right_deriv(k1);
            } else {
                k1 = last_deriv();
            }
            std::vector<double> xe(n);
            for (std::size_t i = 0; i < n; ++i) xe[i] = x0[i] + hs * k1[i];
            auto k2 = deriv(teval, xe);
            double err = 0.0;
            std::vector<double> x1(n);
            for (std::size_t i = 0; i < n; ++i) {
                x1[i] = x0[i] + 0.5 * hs * (k1[i] + k2[i]);
                err = std::max(err, std::abs(x1[i] - xe[i]));
            }
            if (err > tol * hs / (b - a) && hs > 1e-6) {
                h = 0.5 * hs;
                continue;
            }
            push_node(te, x1, teval);
            if (check_blowup(te, x1)) return false;
            t = te;
            first = false;
            if (err < 0.25 * tol * hs / (b - a)) h = std::min(2.0 * hs, b - t);
        }
        return true;
    }

    const VectorField& f_;
    SolveOptions opts_;
    double t0_;
    DelayedSource source_;
    TrajectorySegment seg_;
};

namespace {

void validate_step(const SolveOptions& opts, const History* phi) {
    double k = 1.0 / opts.step;
    if (opts.step <= 0.0 || std::abs(k - std::round(k)) > 1e-9)
        throw std::invalid_argument("step must divide the delay exactly (h = 1/n)");
    if (phi) {
        long steps = std::lround(k);
        if (steps % phi->grid() != 0)
            throw std::invalid_argument("history grid incompatible with step size");
    }
}

}  // namespace

TrajectorySegment solve_ode(const VectorField& f, double t0, const std::vector<double>& x0,
                            double T, const SolveOptions& opts) {
    if (T <= t0) throw std::invalid_argument("solve_ode needs T > t0");
    if (f.delayed()) throw std::invalid_argument("solve_ode requires a non-delayed field");
    if (static_cast<int>(x0.size()) != f.dim())
        throw std::invalid_argument("initial state dimension mismatch");
    validate_step(opts, nullptr);
    Integrator integ(f, t0, x0, nullptr, opts);
    return integ.run(T);
}

TrajectorySegment solve_dde(const VectorField& f, const History& phi, double T,
                            const SolveOptions& opts) {
    if (T <= 0.0) throw std::invalid_argument("solve_dde needs T > 0");
    if (phi.dim() != f.dim()) throw std::invalid_argument("history dimension mismatch");
    validate_step(opts, &phi);

    DelayedSource source = [&phi](double s) { return phi.value(std::max(s, -1.0)); };
    Integrator integ(f, 0.0, phi.value(0.0), source, opts);
    std::vector<double> times, values, derivs;
    for (int i = 0; i < phi.node_count() - 1; ++i) {
        times.push_back(phi.node_time(i));
        for (int c = 0; c < phi.dim(); ++c) values.push_back(phi.node(i, c));
        for (int c = 0; c < phi.dim(); ++c) derivs.push_back(phi.node_deriv(i, c));
    }
    integ.set_preamble(std::move(times), std::move(values), std::move(derivs));
    return integ.run(T);
}

TrajectorySegment solve_dde_from_state(const VectorField& f, const std::vector<double>& x0,
                                       const DelayedSource& source, double T,
                                       const SolveOptions& opts) {
    if (T <= 0.0) throw std::invalid_argument("solve_dde_from_state needs T > 0");
    if (static_cast<int>(x0.size()) != f.dim())
        throw std::invalid_argument("initial state dimension mismatch");
    validate_step(opts, nullptr);
    Integrator integ(f, 0.0, x0, source, opts);
    return integ.run(T);
}

}  // namespace monoflow
