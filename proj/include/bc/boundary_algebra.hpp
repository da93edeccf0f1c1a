#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "bc/errors.hpp"

namespace bc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultUnitarityTol = 1e-10;
inline constexpr double kDefaultClusterTol = 1e-8;
inline constexpr double kDefaultGapThreshold = 1e-6;
inline constexpr double kDefaultNullTol = 1e-10;

struct UnitaryCheck {
    bool is_unitary = false;
    double defect = 0.0;  // ||M^dag M - I||_F
};

// defect = ||M^dag M - I||_F; is_unitary iff defect <= tol * dim.
UnitaryCheck validate_unitary(const ComplexMatrix& m, double tol = kDefaultUnitarityTol);

// A boundary condition: a finite unitary matrix acting on the (truncated)
// space of boundary data. Validated on construction.
class BoundaryUnitary {
   public:
    explicit BoundaryUnitary(ComplexMatrix matrix, double unitarity_tol = kDefaultUnitarityTol);

    const ComplexMatrix& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    double unitarity_tol() const { return unitarity_tol_; }

    static BoundaryUnitary dirichlet(Eigen::Index dim);  // U = I
    static BoundaryUnitary neumann(Eigen::Index dim);    // U = -I

   private:
    ComplexMatrix matrix_;
    double unitarity_tol_;
};

// Orthogonal projections onto the eigenvalue-1 cluster of U and its
// complement. Eigenvalues with cluster_tol < |lambda - 1| < 10*cluster_tol
// are kept in Q but reported in `ambiguous`: they are too close to 1 to be
// trusted as genuinely Robin-like directions.
struct ProjectionSplit {
    ComplexMatrix p;
    ComplexMatrix q;
    std::vector<Complex> ambiguous;
};

ProjectionSplit eigenprojection_one(const BoundaryUnitary& u,
                                    double cluster_tol = kDefaultClusterTol);

// Cayley transform (A - iI)(A + iI)^{-1} of a Hermitian matrix. The result
// is unitary and has no eigenvalue at 1.
ComplexMatrix cayley(const ComplexMatrix& hermitian);

// Inverse Cayley transform i(I + V)(I - V)^{-1} of a unitary matrix whose
// spectrum stays at distance > gap_tol from 1; Hermitian on that condition.
// Throws NotInvertibleError listing the offending eigenvalues otherwise.
ComplexMatrix inverse_cayley(const ComplexMatrix& unitary, double gap_tol);

// Spectral data of a boundary unitary: U = P + V with V = QUQ unitary on
// Ran Q, and K = -C^{-1}(V) on Ran Q (zero on Ran P) the boundary operator
// realizing the Robin-type coupling.
struct ExtensionDecomposition {
    ComplexMatrix p;               // eigenprojection at 1
    ComplexMatrix q;               // I - p
    ComplexMatrix v;               // QUQ
    ComplexMatrix k;               // Hermitian, supported on Ran q
    double gap = 2.0;              // min |lambda - 1| over the Q spectrum
    double semigap_lower_bound = 0.0;  // min eigenvalue of k; +inf if q = 0
};

ExtensionDecomposition decompose(const BoundaryUnitary& u,
                                 double cluster_tol = kDefaultClusterTol);

// gap: distance of the non-1 spectrum to the point 1 (2 when Q = 0).
// semigap: angular size of the largest spectrum-free arc swept clockwise
// from 1, i.e. {e^{i a} : a in (-eps, 0)} extended past -1 if possible.
// k_lower_bound = -cot(semigap/2) is a lower bound for the spectrum of K
// (+inf when Q = 0). Both flags compare against `gap_threshold`.
struct GapDiagnostics {
    double gap = 2.0;
    bool is_gapped = true;
    double semigap = 0.0;
    bool is_semigapped = false;
    double k_lower_bound = 0.0;
};

GapDiagnostics gap_diagnostics(const BoundaryUnitary& u,
                               double cluster_tol = kDefaultClusterTol,
                               double gap_threshold = kDefaultGapThreshold);

// Orthonormal basis of Ran(I - p) for a Hermitian projection p, as matrix
// columns. Rank-0 and full-rank inputs yield exactly the identity and the
// empty matrix; column phases are canonical (largest entry real positive).
ComplexMatrix orthonormal_complement(const ComplexMatrix& p);

// Orthogonal projection onto Ran(q1) ∩ Ran(q2), computed as the projection
// onto the null space of (I - q1) + (I - q2): a PSD sum vanishes on a
// vector iff both terms do. Eigenvalues below null_tol count as zero.
ComplexMatrix projection_meet(const ComplexMatrix& q1, const ComplexMatrix& q2,
                              double null_tol = kDefaultNullTol);

// Boundary unitary of the quadratic form with constraint projection p and
// boundary operator k (Hermitian, kp = pk = 0): U = p + C(-k) on Ran(I-p).
BoundaryUnitary reconstruct_unitary(const ComplexMatrix& p, const ComplexMatrix& k);

// Composition law for rapidly alternating boundary conditions: Dirichlet
// directions accumulate (Q_12 = Q_1 ∧ Q_2) and boundary operators average
// (K_12 = (K_1 + K_2)/2 compressed to Ran Q_12). Requires both inputs
// gapped; commutative and idempotent.
BoundaryUnitary compose(const BoundaryUnitary& u1, const BoundaryUnitary& u2,
                        double cluster_tol = kDefaultClusterTol);

enum class BoundaryClass {
    dirichlet,      // P = I
    neumann,        // U = -I
    robin,          // P = 0, K diagonal
    periodic_type,  // P onto span{(1,-1)/sqrt(2)}, K = 0
    mixed,          // 0 < rank P < dim
    generic,
};

std::string to_string(BoundaryClass c);

BoundaryClass classify(const BoundaryUnitary& u, double cluster_tol = kDefaultClusterTol);

}  // namespace bc
