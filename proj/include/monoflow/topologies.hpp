#ifndef MONOFLOW_TOPOLOGIES_HPP
#define MONOFLOW_TOPOLOGIES_HPP

#include <functional>
#include <string>
#include <vector>

#include "monoflow/field.hpp"

namespace monoflow {

/// Weighted enumeration of integral seminorms p_{I,x}(f) = int_I |f(t,x)| dt:
/// intervals [-q, q] with evaluation points from a seeded lattice, weights
/// summing to at most 1.
struct SeminormBasis {
    struct Term {
        double q = 1.0;              // interval [-q, q]
        std::vector<double> x;       // instantaneous argument
        std::vector<double> y;       // delayed argument
        double weight = 0.5;
    };
    std::vector<Term> terms;

    /// q in {1, 2, 4, 8}, a few lattice + seeded random points per interval,
    /// weights 2^{-k} normalized to sum <= 1.
    static SeminormBasis standard(int dim, unsigned seed = 1);
};

struct DistanceReport {
    std::string metric;
    double value = 0.0;
    std::vector<double> terms;
    std::string to_json() const;
};

/// Sum of w_k min(1, int_{I_k} |(f-g)(t, x_k, y_k)|_inf dt); quadrature splits
/// at the breakpoints of both fields.
double tp_distance(const VectorField& f, const VectorField& g, const SeminormBasis& basis);
DistanceReport tp_distance_report(const VectorField& f, const VectorField& g,
                                  const SeminormBasis& basis);

/// Variant with |int_{I_k} (f-g) dt|_inf per term: always <= tp_distance.
double sigma_p_distance(const VectorField& f, const VectorField& g, const SeminormBasis& basis);

/// Nondecreasing modulus of continuity with theta(0) = 0, tabulated on a grid.
struct Modulus {
    std::vector<double> s;  // sorted, s.front() == 0
    std::vector<double> v;  // nondecreasing, v.front() == 0

    double operator()(double arg) const;  // linear interpolation, clamped
};

/// theta(s) = max over the family of sup_t int_t^{t+s} m(u) du on [0, len]:
/// the moduli the m-bounds induce.
Modulus moduli_from_mbounds(const std::vector<SampledFunction>& mbounds, double len,
                            int grid = 64);

struct ThetaDOptions {
    int lattice = 9;          // constant candidates per axis
    int random_paths = 50;
    int path_cells = 32;
    unsigned seed = 1;
};

/// Lower bound for sup over paths x with |x| <= j and increments bounded by
/// theta of int_I |(f-g)(t, x(t), y)| dt. Candidates: lattice constants,
/// random admissible paths, and a greedy path chasing the largest integrand.
/// The true sup is over an infinite-dimensional set; this is reported as a
/// lower bound by construction.
double theta_d_seminorm(const VectorField& f, const VectorField& g, double i_lo, double i_hi,
                        const std::vector<double>& y, double j, const Modulus& theta,
                        const ThetaDOptions& opts = {});

}  // namespace monoflow

#endif
