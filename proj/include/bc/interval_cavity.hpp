#pragma once

#include <Eigen/Dense>

#include <memory>

#include "bc/boundary_algebra.hpp"
#include "bc/errors.hpp"

namespace bc {

// Nodal coefficients of a piecewise-linear wave function on the interval
// lattice; the physical norm is the B-weighted one, ||psi||^2 = psi^dag B psi.
using StateVector = Eigen::VectorXcd;

// Discrete kinetic-energy form on Omega = (0,1) with boundary coupling:
//
//   q(psi) = [ psi^dag S psi + phi^dag K phi ] / (2 mass),
//   phi = (psi_0, psi_M),   constraint  P phi = 0,
//
// assembled with conforming P1 elements and a consistent mass matrix. The
// constraint is imposed by restriction to an orthonormal admissible basis Z;
// spectra and propagators act on the Hermitian-definite pencil
// (Z^dag A Z, Z^dag B Z). Immutable after construction; the spectral
// factorization is computed once on first use and shared by copies.
class Cavity1D {
   public:
    Cavity1D(Eigen::Matrix2cd constraint_p, Eigen::Matrix2cd boundary_k, int cells,
             double mass);

    int cells() const { return cells_; }
    Eigen::Index nodes() const { return cells_ + 1; }
    double grid_h() const { return 1.0 / cells_; }
    double mass() const { return mass_; }

    const Eigen::MatrixXd& stiffness() const { return stiffness_; }
    const Eigen::MatrixXd& mass_matrix() const { return mass_matrix_; }
    const Eigen::Matrix2cd& boundary_k() const { return boundary_k_; }
    const Eigen::Matrix2cd& constraint_p() const { return constraint_p_; }

    // Orthonormal basis of {v : P (v_0, v_M) = 0}: interior nodes first,
    // then the admissible boundary directions.
    const ComplexMatrix& reduced_basis() const { return reduced_basis_; }
    Eigen::Index reduced_dim() const { return reduced_basis_.cols(); }

    const ComplexMatrix& reduced_hamiltonian() const { return hamiltonian_; }
    const ComplexMatrix& reduced_mass() const { return reduced_mass_; }

    struct Spectral {
        Eigen::VectorXd eigenvalues;  // ascending
        ComplexMatrix modes;          // full-lattice eigenvectors, B-orthonormal
        ComplexMatrix extract;        // modes^dag B: reduced coordinates of a state
    };
    const Spectral& spectral() const;

   private:
    struct SpectralHolder;

    int cells_;
    double mass_;
    Eigen::Matrix2cd constraint_p_;
    Eigen::Matrix2cd boundary_k_;
    Eigen::MatrixXd stiffness_;
    Eigen::MatrixXd mass_matrix_;
    ComplexMatrix reduced_basis_;
    ComplexMatrix hamiltonian_;
    ComplexMatrix reduced_mass_;
    std::shared_ptr<SpectralHolder> spectral_cache_;
};

// Lattice realization of the extension selected by the boundary unitary.
Cavity1D build_cavity(const BoundaryUnitary& u, int cells, double mass = 0.5);

// phi = (psi_0, psi_M).
Eigen::Vector2cd boundary_trace(const StateVector& psi, const Cavity1D& cavity);

// Lowest `count` eigenvalues of the reduced pencil, ascending.
Eigen::VectorXd spectrum(const Cavity1D& cavity, int count);

// exp(-i t H) psi0 through the spectral factorization; B-norm preserving.
StateVector propagate(const Cavity1D& cavity, const StateVector& psi0, double t);

double b_norm(const Cavity1D& cavity, const StateVector& psi);

// Euclidean projection onto the admissible subspace (only boundary entries
// are touched).
StateVector project_to_domain(const Cavity1D& cavity, const StateVector& psi);

// B-normalized Gaussian bump, projected into the admissible subspace. The
// default center avoids the lattice symmetry axis.
StateVector gaussian_state(const Cavity1D& cavity, double center = 0.37,
                           double width = 0.1);

// Cavity of the half form sum: averaged boundary operator on the meet of
// the admissible boundary ranges, bulk matrices unchanged.
Cavity1D form_sum(const Cavity1D& c1, const Cavity1D& c2);

// || Pi_1 A_1 Pi_1 - Pi_2 A_2 Pi_2 ||_F with Pi_i the admissible-subspace
// projectors: compares the two Hamiltonians basis-independently on the
// common reduced space. Throws ConstraintMismatchError when the reduced
// spaces differ.
double verify_representation(const Cavity1D& c12, const Cavity1D& w_cavity);

}  // namespace bc
