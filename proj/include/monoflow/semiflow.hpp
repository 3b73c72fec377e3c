#ifndef MONOFLOW_SEMIFLOW_HPP
#define MONOFLOW_SEMIFLOW_HPP

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "monoflow/field.hpp"
#include "monoflow/history.hpp"
#include "monoflow/solver.hpp"

namespace monoflow {

/// Skew-product semiflow step: (t, f, phi) -> (f_t, x_t(., f, phi)).
std::pair<VectorField, History> flow(double t, const VectorField& f, const History& phi,
                                     const SolveOptions& opts = {});

struct HarnessResult {
    std::string property;
    long trials = 0;
    double worst_violation = 0.0;
    std::string witness;  // human-readable description of the worst trial
    bool pass = true;
    std::string to_json() const;
};

/// Seeded sampler of strictly positive histories and ordered pairs. Pairs are
/// psi = phi + nonnegative smooth bump, so violations near the order boundary
/// are explored.
struct PairSampler {
    unsigned seed = 1;
    int count = 100;
    double base_lo = 0.5;
    double base_hi = 2.0;
    double bump_amp = 1.0;

    History draw_history(std::mt19937& rng, int dim) const;
    /// first <= second nodewise; second(0) > first(0) strictly.
    std::pair<History, History> draw_ordered_pair(std::mt19937& rng, int dim) const;
};

struct HarnessOptions {
    double T = 10.0;
    double grid_dt = 0.25;   // order assertions checked on this t-grid
    double budget = 1e-7;    // integrator error allowance
    SolveOptions solve;
};

/// phi <= psi implies x(t, f, phi) <= x(t, f, psi): worst violation is the
/// max of x(t, phi) - x(t, psi) over pairs, grid times and components.
HarnessResult monotonicity_harness(const VectorField& f, const PairSampler& sampler,
                                   const HarnessOptions& opts = {});

/// Strict gap persistence with the exponential comparison floor
/// gap(t) >= gap(0) exp(-l t) - budget, where l bounds the Lipschitz constant
/// of the field in its instantaneous argument.
HarnessResult strict_order_harness(const VectorField& f, const PairSampler& sampler,
                                   double l_bound, const HarnessOptions& opts = {});

/// x_t(., f, lambda phi) >= lambda x_t(., f, phi) for lambda in (0, 1], plus
/// cone preservation x >= 0 from nonnegative data.
HarnessResult sublinearity_harness(const VectorField& f, const PairSampler& sampler,
                                   const std::vector<double>& lambdas,
                                   const HarnessOptions& opts = {});

struct ContinuityRow {
    int n = 0;
    double field_distance = 0.0;
    double history_distance = 0.0;
    double sup_error = 0.0;
};

using FieldMetric = std::function<double(const VectorField&, const VectorField&)>;

/// Convergence table for f_n = translate(f, 2^{-n}), phi_n = phi + 2^{-n}:
/// emits per-n field distance (under the supplied metric), history distance
/// and solution sup-error on [-1, T].
std::vector<ContinuityRow> continuity_harness(const VectorField& f, const History& phi,
                                              const FieldMetric& metric, int max_n,
                                              const HarnessOptions& opts = {});

std::string continuity_csv(const std::vector<ContinuityRow>& rows);

}  // namespace monoflow

#endif
