#pragma once

#include <Eigen/Dense>

#include <vector>

#include "bc/boundary_algebra.hpp"
#include "bc/interval_cavity.hpp"

namespace bc {

// Record of a Trotter convergence sweep. `t` is the half-time of the
// alternating product (total evolution 2t); errors are B-norm distances to
// the form-sum reference at the final time, pointwise and averaged over the
// sampled window. fitted_order is the power p in error ~ N^{-p} from a
// log-log least-squares fit (NaN when too few nonzero errors to fit).
struct TrotterReport {
    std::vector<int> n_values;
    double t = 0.0;
    std::vector<double> pointwise_errors;
    std::vector<double> time_averaged_errors;
    double fitted_order = 0.0;
};

// ( e^{-i(t/N) H_1} e^{-i(t/N) H_2} )^N psi0. Both cavities must share the
// lattice and the admissible subspace; pairs with genuinely different
// constraints are rejected (use penalty_dirichlet for those).
StateVector alternating_product(const StateVector& psi0, double t, int n,
                                const Cavity1D& c1, const Cavity1D& c2);

// e^{-i 2t H_W} psi0: the Trotter-limit reference evolution.
StateVector limit_reference(const StateVector& psi0, double t, const Cavity1D& w_cavity);

// Pointwise error at half-time `avg_t_end * j/(samples-1)` averaged with the
// trapezoidal rule; the convergence statement for alternating boundary
// conditions is guaranteed only in this averaged sense.
double time_averaged_error(const StateVector& psi0, double avg_t_end, int samples, int n,
                           const Cavity1D& c1, const Cavity1D& c2,
                           const Cavity1D& w_cavity);

// Sweep over N values (strictly increasing). avg_t_end <= 0 selects the
// default window [0, 2t].
TrotterReport convergence_sweep(const StateVector& psi0, double t,
                                const std::vector<int>& n_values, const Cavity1D& c1,
                                const Cavity1D& c2, const Cavity1D& w_cavity,
                                double avg_t_end = -1.0, int avg_samples = 5);

// One penalty step: Dirichlet replaced by Robin with K = lambda I.
struct PenaltyEntry {
    double lambda = 0.0;
    double pointwise_error = 0.0;
    double time_averaged_error = 0.0;
    Eigen::VectorXd eigenvalues;            // composed cavity
    Eigen::VectorXd reference_eigenvalues;  // true Dirichlet-composed cavity
    double max_relative_eigenvalue_error = 0.0;
};

// Approaches the Dirichlet partner through the semi-gapped Robin family
// K = lambda I, lambda ascending: for each lambda the composed cavity is
// swept against its own Trotter limit and its low spectrum is compared with
// the exact Dirichlet composition.
std::vector<PenaltyEntry> penalty_dirichlet(const std::vector<double>& lambdas,
                                            const BoundaryUnitary& partner, int cells,
                                            double mass, const StateVector& psi0, double t,
                                            int n, int eigenvalue_count = 5);

}  // namespace bc
