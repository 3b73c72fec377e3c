#include "monoflow/topologies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace monoflow {

namespace {

/// Composite Simpson on [a, b] split at the breakpoints of both fields, applied
/// to a scalar integrand.
double integrate_split(const VectorField& f, const VectorField& g, double a, double b,
                       const std::function<double(double)>& integrand) {
    std::vector<double> knots{a, b};
    for (double t : f.breakpoints_in(a, b)) knots.push_back(t);
    for (double t : g.breakpoints_in(a, b)) knots.push_back(t);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        double lo = knots[k], hi = knots[k + 1];
        if (hi - lo < 1e-14) continue;
        int cells = std::max(4, static_cast<int>(std::ceil((hi - lo) * 16.0)));
        double h = (hi - lo) / cells;
        // keep evaluations inside the open subinterval so a jump at a knot is
        // read one-sidedly from the piece being integrated
        double eps = 1e-9 * (hi - lo);
        auto at = [&](double t) { return integrand(std::clamp(t, lo + eps, hi - eps)); };
        double acc = 0.0;
        for (int c = 0; c < cells; ++c) {
            double x0 = lo + c * h, x2 = x0 + h, x1 = 0.5 * (x0 + x2);
            acc += (h / 6.0) * (at(x0) + 4.0 * at(x1) + at(x2));
        }
        total += acc;
    }
    return total;
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

SeminormBasis SeminormBasis::standard(int dim, unsigned seed) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    SeminormBasis basis;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> upt(0.1, 3.0);
    const double qs[] = {1.0, 2.0, 4.0, 8.0};
    std::vector<std::vector<double>> lattice = {
        std::vector<double>(static_cast<std::size_t>(dim), 0.5),
        std::vector<double>(static_cast<std::size_t>(dim), 1.0),
        std::vector<double>(static_cast<std::size_t>(dim), 2.0)};
    double wsum = 0.0;
    std::vector<SeminormBasis::Term> terms;
    for (int k = 0; k < 4; ++k) {
        double w = std::pow(2.0, -(k + 1));
        // three lattice points and two random points per interval
        std::vector<std::vector<double>> pts = lattice;
        for (int r = 0; r < 2; ++r) {
            std::vector<double> p(static_cast<std::size_t>(dim));
            for (double& c : p) c = upt(rng);
            pts.push_back(std::move(p));
        }
        double wterm = w / static_cast<double>(pts.size());
        for (auto& p : pts) {
            Term t;
            t.q = qs[k];
            t.x = p;
            t.y = p;
            t.weight = wterm;
            wsum += wterm;
            terms.push_back(std::move(t));
        }
    }
    // normalize so the total weight is exactly 1 and the metric is bounded by 1
    for (auto& t : terms) t.weight /= wsum;
    basis.terms = std::move(terms);
    return basis;
}

std::string DistanceReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"metric\":\"" << metric << "\",\"value\":" << value << ",\"terms\":[";
    for (std::size_t i = 0; i < terms.size(); ++i) os << (i ? "," : "") << terms[i];
    os << "]}";
    return os.str();
}

DistanceReport tp_distance_report(const VectorField& f, const VectorField& g,
                                  const SeminormBasis& basis) {
    if (f.dim() != g.dim()) throw std::invalid_argument("field dimensions differ");
    DistanceReport rep;
    rep.metric = "T_P";
    for (const auto& term : basis.terms) {
        auto integrand = [&](double t) {
            auto df = f.eval(t, term.x, term.y);
            auto dg = g.eval(t, term.x, term.y);
            for (std::size_t i = 0; i < df.size(); ++i) df[i] -= dg[i];
            return sup_abs(df);
        };
        double v = integrate_split(f, g, -term.q, term.q, integrand);
        double contrib = term.weight * std::min(1.0, v);
        rep.terms.push_back(contrib);
        rep.value += contrib;
    }
    return rep;
}

double tp_distance(const VectorField& f, const VectorField& g, const SeminormBasis& basis) {
    return tp_distance_report(f, g, basis).value;
}

double sigma_p_distance(const VectorField& f, const VectorField& g,
                        const SeminormBasis& basis) {
    if (f.dim() != g.dim()) throw std::invalid_argument("field dimensions differ");
    double total = 0.0;
    for (const auto& term : basis.terms) {
        double worst = 0.0;
        for (int c = 0; c < f.dim(); ++c) {
            auto integrand = [&](double t) {
                auto df = f.eval(t, term.x, term.y);
                auto dg = g.eval(t, term.x, term.y);
                return df[static_cast<std::size_t>(c)] - dg[static_cast<std::size_t>(c)];
            };
            worst = std::max(worst,
                             std::abs(integrate_split(f, g, -term.q, term.q, integrand)));
        }
        total += term.weight * std::min(1.0, worst);
    }
    return total;
}

double Modulus::operator()(double arg) const {
    if (s.empty()) return 0.0;
    if (arg <= s.front()) return v.front();
    if (arg >= s.back()) return v.back();
    auto it = std::upper_bound(s.begin(), s.end(), arg);
    std::size_t hi = static_cast<std::size_t>(it - s.begin());
    std::size_t lo = hi - 1;
    double w = (arg - s[lo]) / (s[hi] - s[lo]);
    return v[lo] + w * (v[hi] - v[lo]);
}

Modulus moduli_from_mbounds(const std::vector<SampledFunction>& mbounds, double len,
                            int grid) {
    if (len <= 0.0 || grid < 2) throw std::invalid_argument("invalid modulus grid");
    Modulus theta;
    theta.s.resize(static_cast<std::size_t>(grid) + 1);
    theta.v.resize(theta.s.size());
    for (int k = 0; k <= grid; ++k) {
        double s = len * k / grid;
        theta.s[static_cast<std::size_t>(k)] = s;
        double best = 0.0;
        for (const auto& m : mbounds) {
            if (m.edges.size() < 2) continue;
            double lo = m.edges.front(), hi = m.edges.back();
            // sup over window starts; candidate starts are the cell edges and
            // the points where a window ends at a cell edge
            std::vector<double> starts = m.edges;
            for (double e : m.edges)
                if (e - s >= lo) starts.push_back(e - s);
            for (double t : starts) {
                if (t < lo || t + s > hi + 1e-12) continue;
                best = std::max(best, m.integral(t, std::min(t + s, hi)));
            }
        }
        theta.v[static_cast<std::size_t>(k)] = best;
    }
    theta.v.front() = 0.0;
    for (std::size_t i = 1; i < theta.v.size(); ++i)
        theta.v[i] = std::max(theta.v[i], theta.v[i - 1]);
    return theta;
}

double theta_d_seminorm(const VectorField& f, const VectorField& g, double i_lo, double i_hi,
                        const std::vector<double>& y, double j, const Modulus& theta,
                        const ThetaDOptions& opts) {
    if (i_hi <= i_lo) throw std::invalid_argument("empty interval");
    if (f.dim() != g.dim() ||
        y.size() != static_cast<std::size_t>(f.dim()))
        throw std::invalid_argument("dimension mismatch");
    const int dim = f.dim();
    auto diff_at = [&](double t, const std::vector<double>& x) {
        auto df = f.eval(t, x, y);
        auto dg = g.eval(t, x, y);
        for (std::size_t i = 0; i < df.size(); ++i) df[i] -= dg[i];
        return sup_abs(df);
    };
    auto integrate_path = [&](const std::function<std::vector<double>(double)>& path) {
        return integrate_split(f, g, i_lo, i_hi,
                               [&](double t) { return diff_at(t, path(t)); });
    };

    double best = 0.0;
    // constant lattice candidates
    for (int k = 0; k < opts.lattice; ++k) {
        double level = -j + 2.0 * j * k / std::max(1, opts.lattice - 1);
        std::vector<double> x(static_cast<std::size_t>(dim), level);
        best = std::max(best, integrate_path([&](double) { return x; }));
    }

    const double cell = (i_hi - i_lo) / opts.path_cells;
    auto admissible_step = theta(cell);
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> ulevel(-j, j);
    std::uniform_real_distribution<double> ustep(-1.0, 1.0);

    auto piecewise = [&](const std::vector<std::vector<double>>& nodes) {
        return [&, nodes](double t) {
            int c = std::clamp(static_cast<int>((t - i_lo) / cell), 0, opts.path_cells - 1);
            return nodes[static_cast<std::size_t>(c)];
        };
    };

    // random admissible paths: increments between cells bounded by theta(cell)
    for (int r = 0; r < opts.random_paths; ++r) {
        std::vector<std::vector<double>> nodes(static_cast<std::size_t>(opts.path_cells));
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (double& c : x) c = ulevel(rng);
        for (auto& n : nodes) {
            n = x;
            for (double& c : x)
                c = std::clamp(c + admissible_step * ustep(rng), -j, j);
        }
        best = std::max(best, integrate_path(piecewise(nodes)));
    }

    // greedy path: per cell, pick the lattice level maximizing the midpoint
    // integrand, reachable from the previous level under theta
    {
        std::vector<std::vector<double>> nodes(static_cast<std::size_t>(opts.path_cells));
        std::vector<double> prev(static_cast<std::size_t>(dim), 0.0);
        for (int c = 0; c < opts.path_cells; ++c) {
            double mid = i_lo + (c + 0.5) * cell;
            std::vector<double> pick = prev;
            double val = -1.0;
            for (int k = 0; k < opts.lattice; ++k) {
                double level = -j + 2.0 * j * k / std::max(1, opts.lattice - 1);
                std::vector<double> cand(static_cast<std::size_t>(dim));
                for (std::size_t i = 0; i < cand.size(); ++i)
                    cand[i] = std::clamp(level, prev[i] - admissible_step,
                                         prev[i] + admissible_step);
                double v = diff_at(mid, cand);
                if (v > val) {
                    val = v;
                    pick = cand;
                }
            }
            nodes[static_cast<std::size_t>(c)] = pick;
            prev = pick;
        }
        best = std::max(best, integrate_path(piecewise(nodes)));
    }
    return best;
}

}  // namespace monoflow
