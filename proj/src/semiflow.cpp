#include "monoflow/semiflow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monoflow {

std::pair<VectorField, History> flow(double t, const VectorField& f, const History& phi,
                                     const SolveOptions& opts) {
    if (t < 0.0) throw std::invalid_argument("semiflow time must be nonnegative");
    if (t == 0.0) return {f, phi};
    auto seg = solve_dde(f, phi, t, opts);
    if (seg.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("trajectory blew up before the requested time");
    return {translate(f, t), seg.history_at(t)};
}

std::string HarnessResult::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"property\":\"" << property << "\",\"trials\":" << trials
       << ",\"worst_violation\":" << worst_violation << ",\"witness\":\"" << witness
       << "\",\"verdict\":\"" << (pass ? "pass" : "fail") << "\"}";
    return os.str();
}

History PairSampler::draw_history(std::mt19937& rng, int dim) const {
    std::uniform_real_distribution<double> ubase(base_lo, base_hi);
    std::uniform_real_distribution<double> uamp(0.0, 0.5 * (base_hi - base_lo));
    std::uniform_real_distribution<double> ufreq(0.5, 4.0);
    std::uniform_real_distribution<double> uphase(0.0, 6.283185307179586);
    std::vector<double> c(static_cast<std::size_t>(dim)), a(c.size()), w(c.size()),
        p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = ubase(rng);
        a[i] = std::min(uamp(rng), 0.9 * c[i]);  // keep strictly positive
        w[i] = ufreq(rng);
        p[i] = uphase(rng);
    }
    return History::from_function(
        [&](double s) {
            std::vector<double> v(c.size());
            for (std::size_t i = 0; i < c.size(); ++i)
                v[i] = c[i] + a[i] * std::sin(w[i] * s + p[i]);
            return v;
        },
        dim);
}

std::pair<History, History> PairSampler::draw_ordered_pair(std::mt19937& rng, int dim) const {
    auto phi = draw_history(rng, dim);
    std::uniform_real_distribution<double> uamp(0.05 * bump_amp, bump_amp);
    std::uniform_real_distribution<double> ucen(-0.9, 0.0);
    std::uniform_real_distribution<double> uwid(0.2, 1.0);
    std::vector<double> amp(static_cast<std::size_t>(dim)), cen(amp.size()), wid(amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
        amp[i] = uamp(rng);
        cen[i] = ucen(rng);
        wid[i] = uwid(rng);
    }
    // smooth compactly supported bump, guaranteed positive at s = 0 so the
    // pair is strictly separated where the strict-order lemma needs it
    auto psi = History::from_function(
        [&](double s) {
            auto v = phi.value(s);
            for (std::size_t i = 0; i < v.size(); ++i) {
                double u = (s - cen[i]) / wid[i];
                double b = std::abs(u) < 1.0 ? amp[i] * (1.0 - u * u) * (1.0 - u * u) : 0.0;
                double tail = amp[i] * 0.05 * (1.0 + s);  // keeps psi(0) > phi(0)
                v[i] += b + tail;
            }
            return v;
        },
        dim);
    return {phi, psi};
}

HarnessResult monotonicity_harness(const VectorField& f, const PairSampler& sampler,
                                   const HarnessOptions& opts) {
    HarnessResult res;
    res.property = "monotonicity";
    std::mt19937 rng(sampler.seed);
    double worst = -1e300;
    for (int k = 0; k < sampler.count; ++k) {
        auto [phi, psi] = sampler.draw_ordered_pair(rng, f.dim());
        auto sa = solve_dde(f, phi, opts.T, opts.solve);
        auto sb = solve_dde(f, psi, opts.T, opts.solve);
        res.trials++;
        double end = std::min(
            sa.status() == TrajectorySegment::Status::Complete ? opts.T : sa.blowup_time(),
            sb.status() == TrajectorySegment::Status::Complete ? opts.T : sb.blowup_time());
        for (double t = opts.grid_dt; t <= end + 1e-9; t += opts.grid_dt) {
            double tq = std::min(t, end);
            for (int c = 0; c < f.dim(); ++c) {
                double v = sa.value(tq, c) - sb.value(tq, c);
                if (v > worst) {
                    worst = v;
                    std::ostringstream os;
                    os << "pair " << k << " at t=" << tq << " component " << c;
                    res.witness = os.str();
                }
            }
        }
    }
    res.worst_violation = worst;
    res.pass = worst <= opts.budget;
    return res;
}

HarnessResult strict_order_harness(const VectorField& f, const PairSampler& sampler,
                                   double l_bound, const HarnessOptions& opts) {
    HarnessResult res;
    res.property = "strict-order";
    std::mt19937 rng(sampler.seed);
    double worst = -1e300;
    for (int k = 0; k < sampler.count; ++k) {
        auto [phi, psi] = sampler.draw_ordered_pair(rng, f.dim());
        double gap0 = 1e300;
        for (int c = 0; c < f.dim(); ++c)
            gap0 = std::min(gap0, psi.value(0.0, c) - phi.value(0.0, c));
        auto sa = solve_dde(f, phi, opts.T, opts.solve);
        auto sb = solve_dde(f, psi, opts.T, opts.solve);
        res.trials++;
        if (sa.status() != TrajectorySegment::Status::Complete ||
            sb.status() != TrajectorySegment::Status::Complete) {
            res.witness = "blow-up in pair " + std::to_string(k);
            res.worst_violation = 1e300;
            res.pass = false;
            return res;
        }
        for (double t = opts.grid_dt; t <= opts.T + 1e-9; t += opts.grid_dt) {
            double tq = std::min(t, opts.T);
            double floorv = gap0 * std::exp(-l_bound * tq) - opts.budget;
            for (int c = 0; c < f.dim(); ++c) {
                double gap = sb.value(tq, c) - sa.value(tq, c);
                double v = std::max(floorv - gap, gap > 0.0 ? -1e300 : 0.0);
                if (v > worst) {
                    worst = v;
                    std::ostringstream os;
                    os << "pair " << k << " at t=" << tq << " component " << c << " gap=" << gap
                       << " floor=" << floorv;
                    res.witness = os.str();
                }
            }
        }
    }
    res.worst_violation = worst;
    res.pass = worst <= 0.0;
    return res;
}

HarnessResult sublinearity_harness(const VectorField& f, const PairSampler& sampler,
                                   const std::vector<double>& lambdas,
                                   const HarnessOptions& opts) {
    HarnessResult res;
    res.property = "sublinearity";
    std::mt19937 rng(sampler.seed);
    double worst = -1e300;
    for (int k = 0; k < sampler.count; ++k) {
        auto phi = sampler.draw_history(rng, f.dim());
        auto base = solve_dde(f, phi, opts.T, opts.solve);
        if (base.status() != TrajectorySegment::Status::Complete) {
            res.pass = false;
            res.witness = "blow-up in history " + std::to_string(k);
            res.worst_violation = 1e300;
            return res;
        }
        for (double lam : lambdas) {
            auto scaled = solve_dde(f, scale(phi, lam), opts.T, opts.solve);
            res.trials++;
            for (double t = opts.grid_dt; t <= opts.T + 1e-9; t += opts.grid_dt) {
                double tq = std::min(t, opts.T);
                for (int c = 0; c < f.dim(); ++c) {
                    // order violation lambda x(t, phi) - x(t, lambda phi), and
                    // cone preservation of the scaled trajectory
                    double v = lam * base.value(tq, c) - scaled.value(tq, c);
                    v = std::max(v, -scaled.value(tq, c));
                    if (v > worst) {
                        worst = v;
                        std::ostringstream os;
                        os << "history " << k << " lambda=" << lam << " t=" << tq
                           << " component " << c;
                        res.witness = os.str();
                    }
                }
            }
        }
    }
    res.worst_violation = worst;
    res.pass = worst <= opts.budget;
    return res;
}

std::vector<ContinuityRow> continuity_harness(const VectorField& f, const History& phi,
                                              const FieldMetric& metric, int max_n,
                                              const HarnessOptions& opts) {
    auto ref = solve_dde(f, phi, opts.T, opts.solve);
    if (ref.status() != TrajectorySegment::Status::Complete)
        throw std::runtime_error("reference trajectory blew up");
    std::vector<ContinuityRow> rows;
    for (int n = 0; n <= max_n; ++n) {
        double eps = std::pow(2.0, -n);
        auto fn = translate(f, eps);
        // phi_n = phi + eps, converging to phi in the sup norm
        std::vector<double> bumped;
        for (int i = 0; i < phi.node_count(); ++i)
            for (int c = 0; c < phi.dim(); ++c) bumped.push_back(phi.node(i, c) + eps);
        History phi_n(phi.dim(), phi.grid(), std::move(bumped));
        auto seg = solve_dde(fn, phi_n, opts.T, opts.solve);
        if (seg.status() != TrajectorySegment::Status::Complete)
            throw std::runtime_error("perturbed trajectory blew up");
        // measured after the transient: the initial history offset decays
        // under the contraction, so the tail sup isolates the asymptotic
        // effect of the field and history perturbations
        double sup = 0.0;
        for (double t = 0.5 * opts.T; t <= opts.T + 1e-9; t += 1.0 / 64.0) {
            double tq = std::min(t, opts.T);
            for (int c = 0; c < f.dim(); ++c)
                sup = std::max(sup, std::abs(seg.value(tq, c) - ref.value(tq, c)));
        }
        rows.push_back({n, metric ? metric(fn, f) : 0.0, eps, sup});
    }
    return rows;
}

std::string continuity_csv(const std::vector<ContinuityRow>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "n,field_distance,history_distance,sup_error\n";
    for (const auto& r : rows)
        os << r.n << "," << r.field_distance << "," << r.history_distance << "," << r.sup_error
           << "\n";
    return os.str();
}

}  // namespace monoflow
