#include "monoflow/linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monoflow {

namespace {

VectorField scalar_homogeneous_field(const CoefficientSignal& alpha,
                                     const CoefficientSignal& beta) {
    return VectorField(
        1, true,
        [alpha, beta](double t, std::span<const double> x, std::span<const double> y,
                      std::span<double> out) {
            out[0] = -alpha.value(t) * x[0] + beta.value(t) * y[0];
        },
        [alpha, beta](double t0, double t1, std::vector<double>& out) {
            alpha.breakpoints_in(t0, t1, out);
            beta.breakpoints_in(t0, t1, out);
        });
}

VectorField cyclic_homogeneous_field(const std::vector<CoefficientSignal>& alphas,
                                     const CoefficientSignal& beta) {
    const int n = static_cast<int>(alphas.size());
    return VectorField(
        n, false,
        [alphas, beta, n](double t, std::span<const double> x, std::span<const double>,
                          std::span<double> out) {
            out[0] = beta.value(t) * x[static_cast<std::size_t>(n - 1)] -
                     alphas[0].value(t) * x[0];
            for (int i = 1; i < n; ++i) {
                auto ui = static_cast<std::size_t>(i);
                out[ui] = x[ui - 1] - alphas[ui].value(t) * x[ui];
            }
        },
        [alphas, beta](double t0, double t1, std::vector<double>& out) {
            for (const auto& a : alphas) a.breakpoints_in(t0, t1, out);
            beta.breakpoints_in(t0, t1, out);
        });
}

}  // namespace

FundamentalSolution FundamentalSolution::scalar_delay(const CoefficientSignal& alpha,
                                                      const CoefficientSignal& beta, double s,
                                                      double T, const SolveOptions& opts) {
    FundamentalSolution F;
    F.kind_ = Kind::ScalarDelay;
    F.dim_ = 1;
    F.s_ = s;
    F.T_ = T;
    auto f = translate(scalar_homogeneous_field(alpha, beta), s);
    DelayedSource zero = [](double) { return std::vector<double>{0.0}; };
    F.columns_.push_back(solve_dde_from_state(f, {1.0}, zero, T, opts));
    return F;
}

FundamentalSolution FundamentalSolution::matrix_ode(const std::vector<CoefficientSignal>& alphas,
                                                    const CoefficientSignal& beta, double s,
                                                    double T, const SolveOptions& opts) {
    if (alphas.size() < 2) throw std::invalid_argument("matrix system needs dimension >= 2");
    FundamentalSolution F;
    F.kind_ = Kind::MatrixOde;
    F.dim_ = static_cast<int>(alphas.size());
    F.s_ = s;
    F.T_ = T;
    auto f = translate(cyclic_homogeneous_field(alphas, beta), s);
    for (int j = 0; j < F.dim_; ++j) {
        std::vector<double> e(static_cast<std::size_t>(F.dim_), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        F.columns_.push_back(solve_ode(f, 0.0, e, T, opts));
    }
    return F;
}

bool FundamentalSolution::blew_up() const {
    for (const auto& c : columns_)
        if (c.status() != TrajectorySegment::Status::Complete) return true;
    return false;
}

double FundamentalSolution::value(double t) const {
    if (kind_ != Kind::ScalarDelay) throw std::logic_error("scalar query on a matrix kernel");
    double u = t - s_;
    if (u < 0.0) return 0.0;  // unit pulse: zero before the anchor
    return columns_[0].value(u, 0);
}

double FundamentalSolution::value(double t, int i, int j) const {
    if (kind_ == Kind::ScalarDelay) {
        if (i != 0 || j != 0) throw std::out_of_range("index out of range for scalar kernel");
        return value(t);
    }
    return columns_[static_cast<std::size_t>(j)].value(t - s_, i);
}

double FundamentalSolution::norm(double t) const {
    if (kind_ == Kind::ScalarDelay) return std::abs(value(t));
    double m = 0.0;
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(value(t, i, j)));
    return m;
}

std::string DecayEstimate::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"K\":" << K << ",\"delta\":" << delta << ",\"residual\":" << residual
       << ",\"verdict\":\"" << (pass ? "pass" : "fail") << "\"";
    if (!pass) os << ",\"witness_t\":" << witness_t;
    os << "}";
    return os.str();
}

DecayEstimate fit_decay(const FundamentalSolution& F) {
    DecayEstimate est;
    if (F.blew_up()) {
        est.pass = false;
        est.witness_t = F.anchor() + F.horizon();
        return est;
    }
    const double H = F.horizon();
    const double bucket = 0.5;
    // per-bucket envelope maxima of |U| as a function of elapsed time
    std::vector<double> mid, env, argmax;
    for (double lo = 0.0; lo + bucket <= H + 1e-9; lo += bucket) {
        double m = 0.0, at = lo;
        for (int i = 0; i <= 16; ++i) {
            double t = lo + bucket * i / 16.0;
            double v = F.norm(F.anchor() + t);
            if (v > m) {
                m = v;
                at = t;
            }
        }
        mid.push_back(lo + 0.5 * bucket);
        env.push_back(m);
        argmax.push_back(at);
    }
    // least-squares line through log(envelope) over the tail half, ignoring
    // buckets at roundoff level
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = mid.size() / 2; i < mid.size(); ++i) {
        if (env[i] < 1e-14) continue;
        double x = mid[i], y = std::log(env[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) {
        // envelope already at roundoff: decay is extremely fast; fit on all
        sx = sy = sxx = sxy = 0;
        n = 0;
        for (std::size_t i = 0; i < mid.size(); ++i) {
            if (env[i] < 1e-300) continue;
            double x = mid[i], y = std::log(env[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    double denom = n * sxx - sx * sx;
    double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    est.delta = -slope;
    if (!(est.delta > 0.0)) {
        est.pass = false;
        // witness: the latest bucket whose envelope exceeds the first one
        est.witness_t = F.anchor() + (mid.empty() ? 0.0 : mid.back());
        for (std::size_t i = 1; i < env.size(); ++i)
            if (env[i] > env[0]) est.witness_t = F.anchor() + mid[i];
        return est;
    }
    // smallest majorant constant over all samples
    double K = 1.0;
    double rss = 0.0;
    int rn = 0;
    for (std::size_t i = 0; i < mid.size(); ++i) {
        K = std::max(K, env[i] * std::exp(est.delta * argmax[i]));
        if (env[i] > 1e-14) {
            double r = std::log(env[i]) - (sy - slope * sx) / std::max(1, n) - slope * mid[i];
            rss += r * r;
            ++rn;
        }
    }
    est.K = K;
    est.residual = rn ? std::sqrt(rss / rn) : 0.0;
    est.pass = true;
    return est;
}

double truncation_depth(const DecayEstimate& decay, double unit_window_bound, double eps) {
    if (!decay.pass) throw std::invalid_argument("truncation depth requires a decay estimate");
    double c = std::max(unit_window_bound, 1e-300);
    double factor = decay.K * c * std::exp(decay.delta) / (std::exp(decay.delta) - 1.0);
    double tau = std::log(std::max(2.0 * factor / eps, 2.0)) / decay.delta;
    return std::max(4.0, std::ceil(tau));
}

namespace {

// Truncated improper integral via a forward inhomogeneous solve: with zero
// data at -tau, variation of constants gives exactly
// y(0) = int_{-tau}^0 U(0,s) g(s) ds.
double truncated_integral(const VectorField& inhomogeneous, double tau,
                          const SolveOptions& opts) {
    auto f = translate(inhomogeneous, -tau);
    auto seg = solve_dde(f, History::constant1(0.0), tau, opts);
    if (seg.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("inhomogeneous majorant solve blew up");
    return seg.value1(tau);
}

}  // namespace

double btilde(const CoefficientSignal& alpha, const CoefficientSignal& beta,
              const CoefficientSignal& gamma, const DecayEstimate& decay, double eps,
              const SolveOptions& opts) {
    if (!decay.pass)
        throw std::invalid_argument("btilde requires an exponentially stable majorant");
    double tau = truncation_depth(decay, gamma.unit_window_bound(), eps);
    VectorField g(
        1, true,
        [alpha, beta, gamma](double t, std::span<const double> x, std::span<const double> y,
                             std::span<double> out) {
            out[0] = -alpha.value(t) * x[0] + beta.value(t) * y[0] + gamma.value(t);
        },
        [alpha, beta, gamma](double t0, double t1, std::vector<double>& out) {
            alpha.breakpoints_in(t0, t1, out);
            beta.breakpoints_in(t0, t1, out);
            gamma.breakpoints_in(t0, t1, out);
        });
    return truncated_integral(g, tau, opts);
}

double atilde(const CoefficientSignal& alpha, const CoefficientSignal& h0, double eps,
              const SolveOptions& opts) {
    double floor = alpha.floor_value();
    if (!(floor > 0.0))
        throw std::invalid_argument("atilde requires a positive floor on alpha");
    double c = std::max(h0.unit_window_bound(), 1e-300);
    double tail_factor = c * std::exp(floor) / (std::exp(floor) - 1.0);
    double tau = std::max(4.0, std::ceil(std::log(std::max(2.0 * tail_factor / eps, 2.0)) / floor));
    VectorField g(
        1, false,
        [alpha, h0](double t, std::span<const double> x, std::span<const double>,
                    std::span<double> out) { out[0] = -alpha.value(t) * x[0] + h0.value(t); },
        [alpha, h0](double t0, double t1, std::vector<double>& out) {
            alpha.breakpoints_in(t0, t1, out);
            h0.breakpoints_in(t0, t1, out);
        });
    auto seg = solve_ode(translate(g, -tau), 0.0, {0.0}, tau, opts);
    return seg.value1(tau);
}

namespace {

struct MajorantChoice {
    DecayEstimate decay;
    bool bounded_fallback = false;
};

// Decay of the tight homogeneous majorant (beta = gain); when that is not
// exponentially stable and the shape is bounded, fall back to beta = 0 (the
// nonlinearity is then dominated by base + gain outright).
MajorantChoice choose_scalar_majorant(const ScalarPopulationModel& model,
                                      const SolveOptions& opts) {
    MajorantChoice choice;
    auto F = FundamentalSolution::scalar_delay(model.alpha, model.beta(), 0.0, 40.0, opts);
    choice.decay = fit_decay(F);
    if (choice.decay.pass && choice.decay.delta > 0.05) return choice;
    if (!shape_is_bounded(model.h.shape)) {
        choice.decay.pass = false;
        return choice;
    }
    auto F0 = FundamentalSolution::scalar_delay(model.alpha, CoefficientSignal::constant(0.0),
                                                0.0, 40.0, opts);
    choice.decay = fit_decay(F0);
    choice.bounded_fallback = true;
    return choice;
}

}  // namespace

LinearTraceResult equilibrium_traces_from_linear(const ScalarPopulationModel& model,
                                                 double t_lo, double t_hi, double dt, double eps,
                                                 const SolveOptions& opts) {
    LinearTraceResult out;
    auto choice = choose_scalar_majorant(model, opts);
    out.decay = choice.decay;
    out.bounded_fallback = choice.bounded_fallback;
    if (!out.decay.pass) return out;

    const auto& alpha = model.alpha;
    const auto& beta = model.beta();
    const auto& gamma = model.gamma();
    double c = choice.bounded_fallback
                   ? gamma.unit_window_bound() + beta.unit_window_bound()
                   : gamma.unit_window_bound();
    double tau = truncation_depth(out.decay, c, eps);

    // b-trace: forward inhomogeneous majorant solve from zero data at depth
    // t_lo - tau; the value at time t is the truncated integral for f_t.
    bool fb = choice.bounded_fallback;
    VectorField maj(
        1, true,
        [alpha, beta, gamma, fb](double t, std::span<const double> x,
                                 std::span<const double> y, std::span<double> out) {
            double drive = fb ? beta.value(t) + gamma.value(t) : beta.value(t) * y[0] +
                                                                      gamma.value(t);
            out[0] = -alpha.value(t) * x[0] + drive;
        },
        [alpha, beta, gamma](double t0, double t1, std::vector<double>& out) {
            alpha.breakpoints_in(t0, t1, out);
            beta.breakpoints_in(t0, t1, out);
            gamma.breakpoints_in(t0, t1, out);
        });
    double start = t_lo - tau;
    auto bseg = solve_dde(translate(maj, start), History::constant1(0.0), t_hi - start, opts);
    if (bseg.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("majorant solve blew up");
    out.b = EquilibriumTrace::from_function(
        [&](double t) { return std::vector<double>{bseg.value1(t - start)}; }, 1, t_lo, t_hi,
        dt, TraceKind::Super);

    // a-trace: same construction for the minorant y' = -alpha y + h0
    auto aseg = solve_dde(translate(model.minorant(), start), History::constant1(0.0),
                          t_hi - start, opts);
    if (aseg.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("minorant solve blew up");
    out.a = EquilibriumTrace::from_function(
        [&](double t) { return std::vector<double>{aseg.value1(t - start)}; }, 1, t_lo, t_hi,
        dt, TraceKind::Sub);
    return out;
}

LinearTraceResult equilibrium_traces_from_linear(const CyclicFeedbackModel& model, double t_lo,
                                                 double t_hi, double dt, double eps,
                                                 const SolveOptions& opts) {
    LinearTraceResult out;
    const int m = model.m();

    auto Ft = FundamentalSolution::matrix_ode(model.alphas, model.beta(), 0.0, 40.0, opts);
    out.decay = fit_decay(Ft);
    bool fallback = false;
    if (!(out.decay.pass && out.decay.delta > 0.05)) {
        if (!shape_is_bounded(model.h.shape)) {
            out.decay.pass = false;
            return out;
        }
        auto F0 = FundamentalSolution::matrix_ode(model.alphas, CoefficientSignal::constant(0.0),
                                                  0.0, 40.0, opts);
        out.decay = fit_decay(F0);
        fallback = true;
    }
    out.bounded_fallback = fallback;
    if (!out.decay.pass) return out;

    const auto& beta = model.beta();
    const auto& gamma = model.gamma();
    const auto& h0 = model.gamma();  // h(t, 0) = base
    double c = fallback ? gamma.unit_window_bound() + beta.unit_window_bound()
                        : gamma.unit_window_bound();
    double tau = truncation_depth(out.decay, c, eps);
    double start = t_lo - tau;

    auto alphas = model.alphas;
    auto drive_system = [&](bool use_beta, const CoefficientSignal& drive) {
        return VectorField(
            m, false,
            [alphas, beta, drive, use_beta, m](double t, std::span<const double> x,
                                               std::span<const double>, std::span<double> o) {
                double fb = use_beta ? beta.value(t) * x[static_cast<std::size_t>(m - 1)] : 0.0;
                o[0] = fb - alphas[0].value(t) * x[0] + drive.value(t);
                for (int i = 1; i < m; ++i) {
                    auto ui = static_cast<std::size_t>(i);
                    o[ui] = x[ui - 1] - alphas[ui].value(t) * x[ui];
                }
            },
            [alphas, beta, drive](double t0, double t1, std::vector<double>& out2) {
                for (const auto& a : alphas) a.breakpoints_in(t0, t1, out2);
                beta.breakpoints_in(t0, t1, out2);
                drive.breakpoints_in(t0, t1, out2);
            });
    };

    // majorant drive gamma plus beta z_m; the bounded fallback folds the
    // feedback term into the drive as beta * 1 + gamma
    VectorField maj = drive_system(true, gamma);
    if (fallback) {
        maj = VectorField(
            m, false,
            [alphas, beta, gamma, m](double t, std::span<const double> x,
                                     std::span<const double>, std::span<double> o) {
                o[0] = -alphas[0].value(t) * x[0] + beta.value(t) + gamma.value(t);
                for (int i = 1; i < m; ++i) {
                    auto ui = static_cast<std::size_t>(i);
                    o[ui] = x[ui - 1] - alphas[ui].value(t) * x[ui];
                }
            },
            [alphas, beta, gamma](double t0, double t1, std::vector<double>& out2) {
                for (const auto& a : alphas) a.breakpoints_in(t0, t1, out2);
                beta.breakpoints_in(t0, t1, out2);
                gamma.breakpoints_in(t0, t1, out2);
            });
    }
    VectorField mino = drive_system(false, h0);

    std::vector<double> zero(static_cast<std::size_t>(m), 0.0);
    auto bseg = solve_ode(translate(maj, start), 0.0, zero, t_hi - start, opts);
    auto aseg = solve_ode(translate(mino, start), 0.0, zero, t_hi - start, opts);
    if (bseg.status() != TrajectorySegment::Status::Complete ||
        aseg.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("cyclic linear bound solve blew up");

    out.b = EquilibriumTrace::from_function(
        [&](double t) { return bseg.value(t - start); }, m, t_lo, t_hi, dt, TraceKind::Super);
    out.a = EquilibriumTrace::from_function(
        [&](double t) { return aseg.value(t - start); }, m, t_lo, t_hi, dt, TraceKind::Sub);
    return out;
}

}  // namespace monoflow
