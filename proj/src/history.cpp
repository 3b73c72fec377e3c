#include "monoflow/history.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace monoflow {

History::History(int dim, int nodes_per_unit, std::vector<double> samples,
                 std::vector<double> derivs)
    : dim_(dim), M_(nodes_per_unit), samples_(std::move(samples)), derivs_(std::move(derivs)) {
    if (dim_ <= 0) throw std::invalid_argument("history dimension must be positive");
    if (M_ < 16) throw std::invalid_argument("history grid must have at least 16 nodes per unit");
    const auto expected = static_cast<std::size_t>(M_ + 1) * static_cast<std::size_t>(dim_);
    if (samples_.size() != expected)
        throw std::invalid_argument("history sample count does not match grid");
    if (!derivs_.empty() && derivs_.size() != expected)
        throw std::invalid_argument("history derivative count does not match grid");
    for (double v : samples_)
        if (!std::isfinite(v)) throw std::invalid_argument("history samples must be finite");
}

History History::constant(const std::vector<double>& value, int nodes_per_unit) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(nodes_per_unit + 1) * value.size());
    for (int i = 0; i <= nodes_per_unit; ++i)
        samples.insert(samples.end(), value.begin(), value.end());
    std::vector<double> derivs(samples.size(), 0.0);
    return History(static_cast<int>(value.size()), nodes_per_unit, std::move(samples),
                   std::move(derivs));
}

History History::constant1(double value, int nodes_per_unit) {
    return constant(std::vector<double>{value}, nodes_per_unit);
}

History History::from_function(const std::function<std::vector<double>(double)>& fn, int dim,
                               int nodes_per_unit) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(nodes_per_unit + 1) * static_cast<std::size_t>(dim));
    for (int i = 0; i <= nodes_per_unit; ++i) {
        auto v = fn(-1.0 + double(i) / nodes_per_unit);
        if (static_cast<int>(v.size()) != dim)
            throw std::invalid_argument("history function dimension mismatch");
        samples.insert(samples.end(), v.begin(), v.end());
    }
    return History(dim, nodes_per_unit, std::move(samples));
}

History History::from_scalar_function(const std::function<double(double)>& fn,
                                      int nodes_per_unit) {
    return from_function([&](double s) { return std::vector<double>{fn(s)}; }, 1, nodes_per_unit);
}

std::vector<double> History::value(double s) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    for (int c = 0; c < dim_; ++c) out[static_cast<std::size_t>(c)] = value(s, c);
    return out;
}

double History::value(double s, int c) const {
    if (s < -1.0 - 1e-12 || s > 1e-12) throw std::out_of_range("history argument outside [-1,0]");
    s = std::clamp(s, -1.0, 0.0);
    double pos = (s + 1.0) * M_;
    int i = std::min(static_cast<int>(pos), M_ - 1);
    double u = pos - i;
    if (u < 1e-13) return node(i, c);
    if (u > 1.0 - 1e-13) return node(i + 1, c);
    double h = 1.0 / M_;
    double y0 = node(i, c), y1 = node(i + 1, c);
    if (derivs_.empty()) return y0 + (y1 - y0) * u;
    double d0 = derivs_[idx(i, c)], d1 = derivs_[idx(i + 1, c)];
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 +
           (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
}

double History::sup_norm() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

double History::min_entry() const {
    return *std::min_element(samples_.begin(), samples_.end());
}

double History::sup_dist(const History& a, const History& b) {
    if (a.dim_ != b.dim_ || a.M_ != b.M_)
        throw std::invalid_argument("history grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.samples_.size(); ++i)
        m = std::max(m, std::abs(a.samples_[i] - b.samples_[i]));
    return m;
}

std::string History::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "s";
    for (int c = 0; c < dim_; ++c) os << ",x" << (c + 1);
    os << "\n";
    for (int i = 0; i <= M_; ++i) {
        os << node_time(i);
        for (int c = 0; c < dim_; ++c) os << "," << node(i, c);
        os << "\n";
    }
    return os.str();
}

std::string History::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (int i = 0; i <= M_; ++i) {
        os << (i ? "," : "") << "[" << node_time(i);
        for (int c = 0; c < dim_; ++c) os << "," << node(i, c);
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {
void require_same_grid(const History& a, const History& b) {
    if (a.dim() != b.dim() || a.grid() != b.grid())
        throw std::invalid_argument("history grid mismatch");
}
}  // namespace

bool order_leq(const History& a, const History& b, double eta) {
    require_same_grid(a, b);
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c)
            if (a.node(i, c) > b.node(i, c) + eta) return false;
    return true;
}

bool order_lt(const History& a, const History& b, double eta) {
    if (!order_leq(a, b, eta)) return false;
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c)
            if (a.node(i, c) != b.node(i, c)) return true;
    return false;
}

bool order_ll(const History& a, const History& b, double eta) {
    require_same_grid(a, b);
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c)
            if (!(a.node(i, c) + eta < b.node(i, c))) return false;
    return true;
}

double part_metric(const History& a, const History& b) {
    require_same_grid(a, b);
    double p = 0.0;
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c) {
            double x = a.node(i, c), y = b.node(i, c);
            if (!(x > 0.0) || !(y > 0.0))
                throw std::domain_error("part metric requires histories in the interior of the cone");
            p = std::max(p, std::abs(std::log(y / x)));
        }
    return p;
}

History scale(const History& a, double lambda) {
    std::vector<double> samples, derivs;
    samples.reserve(static_cast<std::size_t>(a.node_count()) * static_cast<std::size_t>(a.dim()));
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c) samples.push_back(lambda * a.node(i, c));
    return History(a.dim(), a.grid(), std::move(samples));
}

History affine(const History& a, const History& b, double theta) {
    require_same_grid(a, b);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(a.node_count()) * static_cast<std::size_t>(a.dim()));
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c)
            samples.push_back((1.0 - theta) * a.node(i, c) + theta * b.node(i, c));
    return History(a.dim(), a.grid(), std::move(samples));
}

History add(const History& a, const History& b) {
    require_same_grid(a, b);
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(a.node_count()) * static_cast<std::size_t>(a.dim()));
    for (int i = 0; i <= a.grid(); ++i)
        for (int c = 0; c < a.dim(); ++c) samples.push_back(a.node(i, c) + b.node(i, c));
    return History(a.dim(), a.grid(), std::move(samples));
}

}  // namespace monoflow
