#include "monoflow/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monoflow {

EquilibriumTrace::EquilibriumTrace(int dim, double t_lo, double t_hi, double dt,
                                   std::vector<double> samples, TraceKind kind)
    : dim_(dim), t_lo_(t_lo), t_hi_(t_hi), dt_(dt), samples_(std::move(samples)), kind_(kind) {
    if (dim_ <= 0) throw std::invalid_argument("trace dimension must be positive");
    if (!(t_hi_ > t_lo_) || !(dt_ > 0.0)) throw std::invalid_argument("bad trace window");
    auto n = static_cast<std::size_t>(std::lround((t_hi_ - t_lo_) / dt_)) + 1;
    if (samples_.size() != n * static_cast<std::size_t>(dim_))
        throw std::invalid_argument("trace sample count does not match the grid");
}

EquilibriumTrace EquilibriumTrace::constant(const std::vector<double>& v, double t_lo,
                                            double t_hi, double dt, TraceKind kind) {
    auto n = static_cast<std::size_t>(std::lround((t_hi - t_lo) / dt)) + 1;
    std::vector<double> samples;
    samples.reserve(n * v.size());
    for (std::size_t k = 0; k < n; ++k) samples.insert(samples.end(), v.begin(), v.end());
    return EquilibriumTrace(static_cast<int>(v.size()), t_lo, t_hi, dt, std::move(samples),
                            kind);
}

EquilibriumTrace EquilibriumTrace::from_function(
    const std::function<std::vector<double>(double)>& fn, int dim, double t_lo, double t_hi,
    double dt, TraceKind kind) {
    auto n = static_cast<std::size_t>(std::lround((t_hi - t_lo) / dt)) + 1;
    std::vector<double> samples;
    samples.reserve(n * static_cast<std::size_t>(dim));
    for (std::size_t k = 0; k < n; ++k) {
        auto v = fn(t_lo + static_cast<double>(k) * dt);
        if (static_cast<int>(v.size()) != dim)
            throw std::invalid_argument("trace function dimension mismatch");
        samples.insert(samples.end(), v.begin(), v.end());
    }
    return EquilibriumTrace(dim, t_lo, t_hi, dt, std::move(samples), kind);
}

double EquilibriumTrace::value(double t, int c) const {
    if (t < t_lo_ - 1e-9 || t > t_hi_ + 1e-9)
        throw std::out_of_range("trace queried outside its window");
    double pos = (std::clamp(t, t_lo_, t_hi_) - t_lo_) / dt_;
    int k = std::min(static_cast<int>(pos), sample_count() - 2);
    double u = pos - k;
    double a = sample(k, c), b = sample(k + 1, c);
    if (u < 1e-12) return a;
    if (u > 1.0 - 1e-12) return b;
    return a + (b - a) * u;
}

std::vector<double> EquilibriumTrace::value(double t) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    for (int c = 0; c < dim_; ++c) out[static_cast<std::size_t>(c)] = value(t, c);
    return out;
}

History EquilibriumTrace::history_at(double t, int nodes_per_unit) const {
    if (t - 1.0 < t_lo_ - 1e-9)
        throw std::out_of_range("trace history window before the trace start");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(nodes_per_unit + 1) *
                    static_cast<std::size_t>(dim_));
    for (int i = 0; i <= nodes_per_unit; ++i) {
        double s = t - 1.0 + static_cast<double>(i) / nodes_per_unit;
        for (int c = 0; c < dim_; ++c) samples.push_back(value(s, c));
    }
    return History(dim_, nodes_per_unit, std::move(samples));
}

double EquilibriumTrace::min_entry() const {
    return *std::min_element(samples_.begin(), samples_.end());
}

double EquilibriumTrace::sup_dist(const EquilibriumTrace& a, const EquilibriumTrace& b,
                                  double lo, double hi) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("trace dimension mismatch");
    double m = 0.0;
    for (int k = 0; k < a.sample_count(); ++k) {
        double t = a.sample_time(k);
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        for (int c = 0; c < a.dim_; ++c)
            m = std::max(m, std::abs(a.sample(k, c) - b.value(t, c)));
    }
    return m;
}

std::string EquilibriumTrace::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (int c = 0; c < dim_; ++c) os << ",x" << (c + 1);
    os << "\n";
    for (int k = 0; k < sample_count(); ++k) {
        os << sample_time(k);
        for (int c = 0; c < dim_; ++c) os << "," << sample(k, c);
        os << "\n";
    }
    return os.str();
}

EquilibriumTrace pullback_step(const VectorField& f, const EquilibriumTrace& trace, double tau,
                               const SolveOptions& opts) {
    if (tau < 0.0) throw std::invalid_argument("pullback depth must be nonnegative");
    if (tau == 0.0) return trace;
    if (trace.t_hi() - trace.t_lo() < tau + 1.0)
        throw std::invalid_argument("trace window too small for the pullback depth");

    const int n = trace.sample_count();
    const int dim = trace.dim();
    std::vector<double> samples(trace.dim() > 0
                                    ? static_cast<std::size_t>(n) * static_cast<std::size_t>(dim)
                                    : 0);
    for (int k = 0; k < n; ++k) {
        double t = trace.sample_time(k);
        if (t - tau - 1.0 < trace.t_lo() - 1e-12) {
            for (int c = 0; c < dim; ++c)
                samples[static_cast<std::size_t>(k) * static_cast<std::size_t>(dim) +
                        static_cast<std::size_t>(c)] = trace.sample(k, c);
            continue;
        }
        auto phi = trace.history_at(t - tau);
        auto seg = solve_dde(translate(f, t - tau), phi, tau, opts);
        if (seg.status() != TrajectorySegment::Status::Complete)
            throw std::runtime_error("pullback trajectory blew up");
        for (int c = 0; c < dim; ++c)
            samples[static_cast<std::size_t>(k) * static_cast<std::size_t>(dim) +
                    static_cast<std::size_t>(c)] = seg.value(tau, c);
    }
    return EquilibriumTrace(dim, trace.t_lo(), trace.t_hi(), trace.dt(), std::move(samples),
                            trace.kind());
}

namespace {

// Signed sup of (a - b) over sample times in [lo, hi]: positive means a > b.
double signed_excess(const EquilibriumTrace& a, const EquilibriumTrace& b, double lo,
                     double hi) {
    double m = -1e300;
    for (int k = 0; k < a.sample_count(); ++k) {
        double t = a.sample_time(k);
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        for (int c = 0; c < a.dim(); ++c) m = std::max(m, a.sample(k, c) - b.value(t, c));
    }
    return m;
}

}  // namespace

std::string PullbackDiagnostics::to_json() const {
    std::ostringstream os;
    os.precision(17);
    auto series = [&os](const char* name, const std::vector<double>& v) {
        os << "\"" << name << "\":[";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "]";
    };
    os << "{";
    series("a_increments", a_increments);
    os << ",";
    series("b_increments", b_increments);
    os << ",\"sandwich_residual\":" << sandwich_residual
       << ",\"converged\":" << (converged ? "true" : "false")
       << ",\"monotone\":" << (monotone ? "true" : "false") << ",\"iterations\":" << iterations
       << "}";
    return os.str();
}

PullbackLimit limit_equilibrium(const VectorField& f, const EquilibriumTrace& a,
                                const EquilibriumTrace& b, const PullbackOptions& opts) {
    if (signed_excess(a, b, a.t_lo(), a.t_hi()) > opts.monotone_budget)
        throw std::invalid_argument("sub trace exceeds super trace: sandwich precondition fails");

    PullbackLimit out;
    out.u = a;
    out.v = b;
    double lo = std::max(opts.measure_lo, a.t_lo() + 1.0);
    double hi = a.t_hi();

    for (int it = 0; it < opts.max_iterations; ++it) {
        auto ua = pullback_step(f, out.u, opts.tau_step, opts.solve);
        auto vb = pullback_step(f, out.v, opts.tau_step, opts.solve);
        double ia = signed_excess(ua, out.u, lo, hi);   // should be >= -budget (increasing)
        double ib = signed_excess(out.v, vb, lo, hi);   // decreasing
        double da = EquilibriumTrace::sup_dist(ua, out.u, lo, hi);
        double db = EquilibriumTrace::sup_dist(vb, out.v, lo, hi);
        out.diagnostics.a_increments.push_back(da);
        out.diagnostics.b_increments.push_back(db);
        if (ia < -opts.monotone_budget || ib < -opts.monotone_budget)
            out.diagnostics.monotone = false;
        out.u = std::move(ua);
        out.v = std::move(vb);
        out.diagnostics.iterations = it + 1;
        if (da < opts.tolerance && db < opts.tolerance) {
            out.diagnostics.converged = true;
            break;
        }
    }
    if (!out.diagnostics.monotone)
        throw std::runtime_error("sub-equilibrium property violated: non-monotone increments");
    out.diagnostics.sandwich_residual = std::max(0.0, signed_excess(out.u, out.v, lo, hi));
    return out;
}

double equilibrium_residual(const EquilibriumTrace& u, const VectorField& f, double s,
                            double measure_lo, const SolveOptions& opts) {
    double lo = std::max(u.t_lo() + 1.0, measure_lo);
    double hi = u.t_hi() - s;
    if (hi < lo) throw std::invalid_argument("trace window too small for the horizon");
    double worst = 0.0;
    int samples = std::min(8, 1 + static_cast<int>((hi - lo) / 1.0));
    for (int k = 0; k < samples; ++k) {
        double t = samples == 1 ? lo : lo + (hi - lo) * k / (samples - 1);
        auto seg = solve_dde(translate(f, t), u.history_at(t), s, opts);
        auto reached = seg.history_at(s);
        auto expected = u.history_at(t + s);
        worst = std::max(worst, History::sup_dist(reached, expected));
    }
    return worst;
}

std::string AttractionSeries::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,part_metric,norm_dist,norm_bound\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        os << t[i] << "," << part[i] << "," << norm_dist[i] << "," << norm_bound[i] << "\n";
    return os.str();
}

AttractionSeries forward_attraction(const VectorField& f, const EquilibriumTrace& u,
                                    const History& phi, double T, double dt,
                                    const SolveOptions& opts) {
    // The equilibrium orbit is advanced by the semiflow itself, so both series
    // carry solver accuracy rather than trace-grid accuracy.
    auto ueq = solve_dde(f, u.history_at(0.0), T, opts);
    auto traj = solve_dde(f, phi, T, opts);
    if (ueq.status() != TrajectorySegment::Status::Complete ||
        traj.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("forward attraction trajectory blew up");

    AttractionSeries series;
    for (double t = 0.0; t <= T + 1e-9; t += dt) {
        double tq = std::min(t, T);
        auto hu = ueq.history_at(tq);
        auto hx = traj.history_at(tq);
        double p = part_metric(hu, hx);
        series.t.push_back(tq);
        series.part.push_back(p);
        series.norm_dist.push_back(History::sup_dist(hu, hx));
        series.norm_bound.push_back((2.0 * std::exp(p) - std::exp(-p) - 1.0) *
                                    std::min(hu.sup_norm(), hx.sup_norm()));
    }
    return series;
}

}  // namespace monoflow
