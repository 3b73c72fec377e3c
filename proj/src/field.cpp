#include "monoflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace monoflow {

std::string condition_name(ConditionFlag c) {
    switch (c) {
        case ConditionFlag::Kx: return "Kx";
        case ConditionFlag::Ky: return "Ky";
        case ConditionFlag::Kxy: return "Kxy";
        case ConditionFlag::K1: return "K1";
        case ConditionFlag::K2: return "K2";
        case ConditionFlag::S: return "S";
        case ConditionFlag::StrongS: return "strongS";
    }
    return "?";
}

ConditionFlag condition_from_name(const std::string& name) {
    if (name == "Kx") return ConditionFlag::Kx;
    if (name == "Ky") return ConditionFlag::Ky;
    if (name == "Kxy") return ConditionFlag::Kxy;
    if (name == "K1") return ConditionFlag::K1;
    if (name == "K2") return ConditionFlag::K2;
    if (name == "S") return ConditionFlag::S;
    if (name == "strongS") return ConditionFlag::StrongS;
    throw std::invalid_argument("unknown condition: " + name);
}

VectorField::VectorField(int dim, bool delayed, Evaluator eval, BreakpointFn breakpoints,
                         std::set<ConditionFlag> flags)
    : dim_(dim), delayed_(delayed), eval_(std::move(eval)),
      breakpoints_(std::move(breakpoints)), flags_(std::move(flags)) {
    if (dim_ <= 0) throw std::invalid_argument("field dimension must be positive");
}

void VectorField::eval(double t, std::span<const double> x, std::span<const double> y,
                       std::span<double> out) const {
    eval_(shift_ + t, x, y, out);
}

std::vector<double> VectorField::eval(double t, const std::vector<double>& x,
                                      const std::vector<double>& y) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    eval(t, x, y, out);
    return out;
}

double VectorField::eval1(double t, double x, double y) const {
    double out;
    eval(t, std::span<const double>(&x, 1), std::span<const double>(&y, 1),
         std::span<double>(&out, 1));
    return out;
}

std::vector<double> VectorField::breakpoints_in(double t0, double t1) const {
    std::vector<double> raw;
    if (breakpoints_) breakpoints_(shift_ + t0, shift_ + t1, raw);
    for (double& b : raw) b -= shift_;
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              raw.end());
    return raw;
}

VectorField VectorField::translated(double s) const {
    VectorField g = *this;
    g.shift_ += s;
    return g;
}

VectorField translate(const VectorField& f, double s) { return f.translated(s); }

std::string ConditionReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"condition\":\"" << condition << "\",\"trials\":" << trials
       << ",\"worst_violation\":" << worst_violation << ",\"witness\":";
    if (has_witness) {
        os << "{\"t\":" << witness_t << ",\"points\":[";
        for (std::size_t i = 0; i < witness_points.size(); ++i)
            os << (i ? "," : "") << witness_points[i];
        os << "]}";
    } else {
        os << "null";
    }
    os << ",\"verdict\":\"" << (pass ? "pass" : "fail") << "\"}";
    return os.str();
}

namespace {

/// Sample times avoiding breakpoints (conditions only hold for a.e. t):
// uniform draws nudged off breakpoints, plus midpoints between breakpoints.
std::vector<double> condition_times(const VectorField& f, const ConditionSampler& s, long count,
                                    std::mt19937& rng) {
    std::vector<double> bps = f.breakpoints_in(s.t_lo, s.t_hi);
    std::vector<double> times;
    std::uniform_real_distribution<double> ut(s.t_lo, s.t_hi);
    for (long i = 0; i < count; ++i) {
        double t = ut(rng);
        for (double b : bps)
            if (std::abs(t - b) < 1e-9) t += 1e-6;
        times.push_back(t);
    }
    for (std::size_t i = 0; i + 1 < bps.size() && i < 256; ++i)
        times.push_back(0.5 * (bps[i] + bps[i + 1]));
    return times;
}

struct Worst {
    double violation = -std::numeric_limits<double>::infinity();
    double t = 0.0;
    std::vector<double> points;

    void offer(double v, double t_, std::initializer_list<const std::vector<double>*> pts) {
        if (v > violation) {
            violation = v;
            t = t_;
            points.clear();
            for (const auto* p : pts) points.insert(points.end(), p->begin(), p->end());
        }
    }
};

}  // namespace

ConditionReport check_condition(const VectorField& f, ConditionFlag cond,
                                const ConditionSampler& s) {
    std::mt19937 rng(s.seed);
    std::uniform_real_distribution<double> ubox(-s.radius, s.radius);
    std::uniform_real_distribution<double> upos(0.0, s.radius);
    std::uniform_real_distribution<double> ubump(0.0, 0.5 * s.radius);
    std::uniform_real_distribution<double> ulam(0.01, 0.99);
    std::uniform_int_distribution<int> ucomp(0, f.dim() - 1);
    const auto n = static_cast<std::size_t>(f.dim());

    auto box = [&] {
        std::vector<double> v(n);
        for (double& x : v) x = ubox(rng);
        return v;
    };
    auto nonneg = [&] {
        std::vector<double> v(n);
        for (double& x : v) x = upos(rng);
        return v;
    };
    auto above = [&](const std::vector<double>& a) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = a[i] + ubump(rng);
        return v;
    };

    ConditionReport rep;
    rep.condition = condition_name(cond);
    Worst worst;

    if (cond == ConditionFlag::StrongS) {
        // every subinterval of the declared length must exhibit a strict margin
        long nsub = std::max<long>(1, std::lround((s.t_hi - s.t_lo) / s.strict_interval));
        long per = std::max<long>(8, s.trials / nsub);
        for (long k = 0; k < nsub; ++k) {
            double lo = s.t_lo + (s.t_hi - s.t_lo) * double(k) / double(nsub);
            double hi = s.t_lo + (s.t_hi - s.t_lo) * double(k + 1) / double(nsub);
            std::uniform_real_distribution<double> ut(lo, hi);
            double best = -std::numeric_limits<double>::infinity();
            double best_t = lo;
            std::vector<double> best_pts;
            for (long i = 0; i < per; ++i) {
                double t = ut(rng), lam = ulam(rng);
                std::vector<double> x(n), y(n);
                for (std::size_t j = 0; j < n; ++j) x[j] = 0.05 + upos(rng);
                for (std::size_t j = 0; j < n; ++j) y[j] = 0.05 + upos(rng);
                std::vector<double> lx(n), ly(n);
                for (std::size_t j = 0; j < n; ++j) lx[j] = lam * x[j];
                for (std::size_t j = 0; j < n; ++j) ly[j] = lam * y[j];
                auto fs = f.eval(t, lx, ly);
                auto fb = f.eval(t, x, y);
                double margin = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < n; ++j)
                    margin = std::min(margin, fs[j] - lam * fb[j]);
                double ymin = *std::min_element(y.begin(), y.end());
                double thr = s.strict_scale * (1.0 - lam) * std::min(ymin, 1.0);
                double score = margin - thr;
                rep.trials++;
                if (score > best) {
                    best = score;
                    best_t = t;
                    best_pts = x;
                    best_pts.insert(best_pts.end(), y.begin(), y.end());
                    best_pts.push_back(lam);
                }
            }
            // deficit > 0 means no sample in this window achieved a strict margin
            worst.offer(-best, best_t, {&best_pts});
        }
        rep.worst_violation = worst.violation;
        // the threshold can be smaller than the generic tolerance, so the
        // strict variant demands an outright non-negative best score
        rep.pass = rep.worst_violation <= 0.0;
        if (!rep.pass) {
            rep.has_witness = true;
            rep.witness_t = worst.t;
            rep.witness_points = worst.points;
        }
        return rep;
    }

    auto times = condition_times(f, s, s.trials, rng);
    std::vector<double> zero(n, 0.0);
    for (double t : times) {
        rep.trials++;
        switch (cond) {
            case ConditionFlag::Kx: {
                auto a = box();
                auto b = above(a);
                int k = ucomp(rng);
                b[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
                auto c = box();
                double v = f.eval(t, a, c)[static_cast<std::size_t>(k)] -
                           f.eval(t, b, c)[static_cast<std::size_t>(k)];
                worst.offer(v, t, {&a, &b, &c});
                break;
            }
            case ConditionFlag::Ky: {
                auto a = box();
                auto b = box();
                auto c = above(b);
                auto fb = f.eval(t, a, b);
                auto fc = f.eval(t, a, c);
                for (std::size_t k = 0; k < n; ++k) worst.offer(fb[k] - fc[k], t, {&a, &b, &c});
                break;
            }
            case ConditionFlag::Kxy: {
                auto a = box();
                auto b = above(a);
                auto c = box();
                auto d = above(c);
                auto fac = f.eval(t, a, c);
                auto fbd = f.eval(t, b, d);
                for (std::size_t k = 0; k < n; ++k)
                    worst.offer(fac[k] - fbd[k], t, {&a, &b, &c, &d});
                break;
            }
            case ConditionFlag::K1: {
                auto a = box();
                auto b = above(a);
                int k = ucomp(rng);
                b[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
                double v = f.eval(t, a, zero)[static_cast<std::size_t>(k)] -
                           f.eval(t, b, zero)[static_cast<std::size_t>(k)];
                worst.offer(v, t, {&a, &b});
                break;
            }
            case ConditionFlag::K2: {
                auto a = box();
                auto b = above(a);
                auto fa = f.eval(t, a, zero);
                auto fb = f.eval(t, b, zero);
                for (std::size_t k = 0; k < n; ++k) worst.offer(fa[k] - fb[k], t, {&a, &b});
                break;
            }
            case ConditionFlag::S: {
                auto x = nonneg();
                auto y = nonneg();
                double lam = ulam(rng);
                std::vector<double> lx(n), ly(n);
                for (std::size_t j = 0; j < n; ++j) lx[j] = lam * x[j];
                for (std::size_t j = 0; j < n; ++j) ly[j] = lam * y[j];
                auto fl = f.eval(t, lx, ly);
                auto fb = f.eval(t, x, y);
                std::vector<double> lamv{lam};
                for (std::size_t k = 0; k < n; ++k)
                    worst.offer(lam * fb[k] - fl[k], t, {&x, &y, &lamv});
                break;
            }
            default:
                throw std::logic_error("unreachable");
        }
    }
    rep.worst_violation = worst.violation;
    rep.pass = rep.worst_violation <= s.tolerance;
    if (!rep.pass) {
        rep.has_witness = true;
        rep.witness_t = worst.t;
        rep.witness_points = worst.points;
    }
    return rep;
}

double SampledFunction::value(double t) const {
    auto it = std::upper_bound(edges.begin(), edges.end(), t);
    if (it == edges.begin() || it == edges.end()) {
        if (t == edges.back()) return values.back();
        throw std::out_of_range("sampled function queried outside its range");
    }
    return values[static_cast<std::size_t>(it - edges.begin()) - 1];
}

double SampledFunction::integral(double a, double b) const {
    if (b < a) return -integral(b, a);
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double lo = std::max(a, edges[i]);
        double hi = std::min(b, edges[i + 1]);
        if (hi > lo) acc += values[i] * (hi - lo);
    }
    return acc;
}

double SampledFunction::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

SampledFunction optimal_m_bound(const VectorField& f, double radius, double t_lo, double t_hi,
                                const MBoundGrid& grid) {
    if (radius <= 0.0) throw std::invalid_argument("m-bound radius must be positive");
    const int d = f.delayed() ? 2 * f.dim() : f.dim();
    const auto n = static_cast<std::size_t>(f.dim());

    // cell edges: uniform grid refined with declared breakpoints
    std::vector<double> edges;
    for (int i = 0; i <= grid.cells; ++i)
        edges.push_back(t_lo + (t_hi - t_lo) * i / grid.cells);
    for (double b : f.breakpoints_in(t_lo, t_hi)) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());

    // direction set in [-1,1]^d: lattice plus seeded random points
    int q = grid.lattice_per_axis;
    while (q > 2 && std::pow(double(q), d) > 40000.0) --q;
    std::vector<std::vector<double>> dirs;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
        std::vector<double> u(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k)
            u[static_cast<std::size_t>(k)] = q == 1 ? 0.0 : -1.0 + 2.0 * idx[static_cast<std::size_t>(k)] / (q - 1);
        dirs.push_back(std::move(u));
        int k = 0;
        while (k < d && ++idx[static_cast<std::size_t>(k)] == q) idx[static_cast<std::size_t>(k++)] = 0;
        if (k == d) break;
    }
    std::mt19937 rng(grid.seed);
    std::uniform_real_distribution<double> u11(-1.0, 1.0);
    for (int i = 0; i < grid.random_points; ++i) {
        std::vector<double> u(static_cast<std::size_t>(d));
        for (double& x : u) x = u11(rng);
        dirs.push_back(std::move(u));
    }

    // dyadic radius ladder keeps sample sets nested across dyadic j
    std::vector<double> radii{radius};
    for (double r = 1.0 / 64.0; r < radius; r *= 2.0) radii.push_back(r);

    SampledFunction m;
    m.edges = edges;
    std::vector<double> x(n), y(n), out(n);
    for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
        double t = 0.5 * (edges[c] + edges[c + 1]);
        double best = 0.0;
        for (const auto& u : dirs)
            for (double r : radii) {
                for (std::size_t k = 0; k < n; ++k) x[k] = r * u[k];
                if (f.delayed())
                    for (std::size_t k = 0; k < n; ++k) y[k] = r * u[n + k];
                else
                    std::fill(y.begin(), y.end(), 0.0);
                f.eval(t, x, y, out);
                for (std::size_t k = 0; k < n; ++k) {
                    if (!std::isfinite(out[k])) {
                        std::ostringstream os;
                        os << "non-finite field value at t=" << t << " x[" << k << "]=" << x[k];
                        throw std::runtime_error(os.str());
                    }
                    best = std::max(best, std::abs(out[k]));
                }
            }
        m.values.push_back(best);
    }
    return m;
}

EquicontinuityResult check_l1loc_equicontinuity(const std::vector<CoefficientSignal>& signals,
                                                double r, double eps) {
    if (signals.empty()) return {true, r};
    const int kGrid = 4096;

    auto window_sup = [&](double delta) {
        double sup = 0.0;
        for (const auto& sig : signals) {
            std::vector<double> starts;
            for (int i = 0; i <= 512; ++i)
                starts.push_back(-r + (2.0 * r - delta) * i / 512.0);
            std::vector<double> bps;
            sig.breakpoints_in(-r, r, bps);
            for (double b : bps) {
                starts.push_back(b);
                starts.push_back(b - delta);
            }
            for (double s : starts) {
                if (s < -r || s + delta > r) continue;
                sup = std::max(sup, sig.integral(s, s + delta));
            }
        }
        return sup;
    };

    // window sup is nondecreasing in delta, so binary search the grid
    int lo = 0, hi = kGrid;  // invariant: ok(lo), not ok(hi+1); check hi first
    if (window_sup(r) <= eps + 1e-12) return {true, r};
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (window_sup(r * mid / kGrid) <= eps + 1e-12)
            lo = mid;
        else
            hi = mid - 1;
    }
    if (lo == 0) return {false, 0.0};
    return {true, r * lo / kGrid};
}

}  // namespace monoflow
