#ifndef MONOFLOW_HISTORY_HPP
#define MONOFLOW_HISTORY_HPP

#include <functional>
#include <string>
#include <vector>

namespace monoflow {

/// Continuous function on [-1, 0] into R^N stored on a uniform node grid of
/// step 1/M. Interpolation is cubic Hermite when node derivatives are stored,
/// piecewise linear otherwise. Histories are immutable values.
class History {
public:
    static constexpr int kDefaultNodes = 64;

    History() = default;
    History(int dim, int nodes_per_unit, std::vector<double> samples,
            std::vector<double> derivs = {});

    static History constant(const std::vector<double>& value, int nodes_per_unit = kDefaultNodes);
    static History constant1(double value, int nodes_per_unit = kDefaultNodes);
    static History from_function(const std::function<std::vector<double>(double)>& fn, int dim,
                                 int nodes_per_unit = kDefaultNodes);
    static History from_scalar_function(const std::function<double(double)>& fn,
                                        int nodes_per_unit = kDefaultNodes);

    int dim() const { return dim_; }
    int grid() const { return M_; }                  // nodes per delay unit
    int node_count() const { return M_ + 1; }
    double node_time(int i) const { return -1.0 + double(i) / M_; }
    double node(int i, int c) const { return samples_[idx(i, c)]; }
    bool has_derivatives() const { return !derivs_.empty(); }
    /// Stored Hermite slope at a node; forward difference if none stored.
    double node_deriv(int i, int c) const {
        if (!derivs_.empty()) return derivs_[idx(i, c)];
        int j = i < M_ ? i : M_ - 1;
        return (samples_[idx(j + 1, c)] - samples_[idx(j, c)]) * M_;
    }

    std::vector<double> value(double s) const;       // s in [-1, 0]
    double value(double s, int c) const;

    double sup_norm() const;
    double min_entry() const;
    static double sup_dist(const History& a, const History& b);

    std::string to_csv() const;                      // columns: s, x1..xN
    std::string to_json() const;

private:
    std::size_t idx(int i, int c) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
               static_cast<std::size_t>(c);
    }

    int dim_ = 0;
    int M_ = kDefaultNodes;
    std::vector<double> samples_;  // (M+1) x N, row per node
    std::vector<double> derivs_;   // same layout, optional
};

/// Componentwise order at grid nodes, with optional slack eta.
bool order_leq(const History& a, const History& b, double eta = 0.0);
/// leq and not pointwise equal.
bool order_lt(const History& a, const History& b, double eta = 0.0);
/// strict at every node and component.
bool order_ll(const History& a, const History& b, double eta = 0.0);

/// Part metric on the interior of the positive cone:
/// max over nodes and components of |log(b_i(s)/a_i(s))|.
/// Throws if either history has a nonpositive node value.
double part_metric(const History& a, const History& b);

History scale(const History& a, double lambda);
History affine(const History& a, const History& b, double theta);  // (1-theta) a + theta b
History add(const History& a, const History& b);

}  // namespace monoflow

#endif
