#include "bc/boundary_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bc {

namespace {

constexpr Complex kImag{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string shape_string(const ComplexMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

// Eigen-system of a (validated) unitary matrix via the complex Schur form.
// A unitary matrix is normal, so its Schur factor T is diagonal up to
// roundoff and the Schur vectors are an orthonormal eigenbasis; this keeps
// the derived spectral projections Hermitian and idempotent at machine
// precision, which a general eigensolver does not guarantee for clustered
// eigenvalues.
struct UnitaryEigensystem {
    ComplexMatrix vectors;      // unitary, columns are eigenvectors
    ComplexVector eigenvalues;  // on the unit circle
};

UnitaryEigensystem unitary_eigensystem(const ComplexMatrix& u) {
    Eigen::ComplexSchur<ComplexMatrix> schur(u, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("Schur decomposition of boundary unitary failed to converge");
    }
    const ComplexMatrix& t = schur.matrixT();
    const Eigen::Index n = u.rows();
    double off = 0.0;
    for (Eigen::Index j = 1; j < n; ++j) {
        off += t.col(j).head(j).squaredNorm();
    }
    if (std::sqrt(off) > 1e-7 * static_cast<double>(n)) {
        throw NumericalError("input is too far from normal for a spectral split");
    }
    return {schur.matrixU(), t.diagonal()};
}

// arg(lambda) in (-pi, pi]; the branch point sits at the eigenvalue 1.
double principal_angle(Complex lambda) {
    double theta = std::arg(lambda);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    return theta;
}

bool in_one_cluster(Complex lambda, double cluster_tol) {
    return std::abs(lambda - Complex{1.0, 0.0}) <= cluster_tol;
}

}  // namespace

ComplexMatrix orthonormal_complement(const ComplexMatrix& p) {
    const Eigen::Index n = p.rows();
    if (p.norm() < 1e-12) {
        return ComplexMatrix::Identity(n, n);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of projection failed");
    }
    Eigen::Index rank0 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ev = es.eigenvalues()(i);
        if (std::abs(ev) > 1e-8 && std::abs(ev - 1.0) > 1e-8) {
            throw DomainError("matrix is not an orthogonal projection");
        }
        if (ev < 0.5) ++rank0;
    }
    ComplexMatrix basis = es.eigenvectors().leftCols(rank0);
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        Eigen::Index imax = 0;
        basis.col(j).cwiseAbs().maxCoeff(&imax);
        const Complex pivot = basis(imax, j);
        if (std::abs(pivot) > 0.0) basis.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
    return basis;
}

UnitaryCheck validate_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ShapeError("validate_unitary: expected a nonempty square matrix, got " +
                         shape_string(m));
    }
    const Eigen::Index n = m.rows();
    const double defect = (m.adjoint() * m - ComplexMatrix::Identity(n, n)).norm();
    return {defect <= tol * static_cast<double>(n), defect};
}

BoundaryUnitary::BoundaryUnitary(ComplexMatrix matrix, double unitarity_tol)
    : matrix_(std::move(matrix)), unitarity_tol_(unitarity_tol) {
    const UnitaryCheck check = validate_unitary(matrix_, unitarity_tol_);
    if (!check.is_unitary) {
        std::ostringstream os;
        os << "matrix is not unitary: defect " << check.defect << " exceeds "
           << unitarity_tol_ << " * " << matrix_.rows();
        throw DomainError(os.str());
    }
}

BoundaryUnitary BoundaryUnitary::dirichlet(Eigen::Index dim) {
    return BoundaryUnitary(ComplexMatrix::Identity(dim, dim));
}

BoundaryUnitary BoundaryUnitary::neumann(Eigen::Index dim) {
    return BoundaryUnitary(-ComplexMatrix::Identity(dim, dim));
}

ProjectionSplit eigenprojection_one(const BoundaryUnitary& u, double cluster_tol) {
    const auto sys = unitary_eigensystem(u.matrix());
    const Eigen::Index n = u.dim();

    ProjectionSplit split;
    split.p = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lambda = sys.eigenvalues(i);
        const double dist = std::abs(lambda - Complex{1.0, 0.0});
        if (dist <= cluster_tol) {
            split.p += sys.vectors.col(i) * sys.vectors.col(i).adjoint();
        } else if (dist < 10.0 * cluster_tol) {
            split.ambiguous.push_back(lambda);
        }
    }
    split.p = 0.5 * (split.p + split.p.adjoint().eval());
    split.q = ComplexMatrix::Identity(n, n) - split.p;
    return split;
}

ComplexMatrix cayley(const ComplexMatrix& hermitian) {
    if (hermitian.rows() != hermitian.cols()) {
        throw ShapeError("cayley: expected a square matrix, got " + shape_string(hermitian));
    }
    const double herm_defect = (hermitian - hermitian.adjoint()).norm();
    if (herm_defect > 1e-10 * (1.0 + hermitian.norm())) {
        std::ostringstream os;
        os << "cayley: input is not Hermitian (defect " << herm_defect << ")";
        throw DomainError(os.str());
    }
    if (hermitian.rows() == 0) {
        return hermitian;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (hermitian + hermitian.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalError("cayley: eigendecomposition failed");
    }
    ComplexVector phases(hermitian.rows());
    for (Eigen::Index i = 0; i < hermitian.rows(); ++i) {
        const double a = es.eigenvalues()(i);
        phases(i) = (a - kImag) / (a + kImag);
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix inverse_cayley(const ComplexMatrix& unitary, double gap_tol) {
    const UnitaryCheck check = validate_unitary(unitary);
    if (!check.is_unitary) {
        throw DomainError("inverse_cayley: input is not unitary");
    }
    const auto sys = unitary_eigensystem(unitary);
    const Eigen::Index n = unitary.rows();

    std::vector<Complex> offending;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(sys.eigenvalues(i) - Complex{1.0, 0.0}) <= gap_tol) {
            offending.push_back(sys.eigenvalues(i));
        }
    }
    if (!offending.empty()) {
        std::ostringstream os;
        os << "inverse_cayley: I - V is not invertible, eigenvalues within " << gap_tol
           << " of 1:";
        for (Complex lambda : offending) {
            os << " (" << lambda.real() << (lambda.imag() < 0 ? "" : "+") << lambda.imag()
               << "i)";
        }
        throw NotInvertibleError(os.str());
    }

    // i(1 + e^{i theta})/(1 - e^{i theta}) = -cot(theta/2), real as it must be.
    Eigen::VectorXd values(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        values(i) = -1.0 / std::tan(0.5 * principal_angle(sys.eigenvalues(i)));
    }
    ComplexMatrix k = sys.vectors * values.asDiagonal() * sys.vectors.adjoint();
    return 0.5 * (k + k.adjoint().eval());
}

ExtensionDecomposition decompose(const BoundaryUnitary& u, double cluster_tol) {
    const auto sys = unitary_eigensystem(u.matrix());
    const Eigen::Index n = u.dim();

    std::vector<Eigen::Index> rest;
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (in_one_cluster(sys.eigenvalues(i), cluster_tol)) {
            p += sys.vectors.col(i) * sys.vectors.col(i).adjoint();
        } else {
            rest.push_back(i);
        }
    }
    p = 0.5 * (p + p.adjoint().eval());

    ExtensionDecomposition dec;
    dec.p = p;
    dec.q = ComplexMatrix::Identity(n, n) - p;
    dec.v = dec.q * u.matrix() * dec.q;
    dec.k = ComplexMatrix::Zero(n, n);
    dec.gap = 2.0;
    dec.semigap_lower_bound = kInf;
    if (rest.empty()) {
        return dec;  // U = I up to the cluster: pure Dirichlet, K empty
    }

    ComplexMatrix y(n, static_cast<Eigen::Index>(rest.size()));
    for (std::size_t j = 0; j < rest.size(); ++j) {
        y.col(static_cast<Eigen::Index>(j)) = sys.vectors.col(rest[j]);
    }
    // K = -C^{-1}(V) on Ran Q, extended by zero on Ran P. The restriction
    // of U to the Q-invariant subspace carries exactly the non-1 spectrum,
    // so inverse_cayley's own gap check guards the construction.
    const ComplexMatrix v_reduced = y.adjoint() * u.matrix() * y;
    const ComplexMatrix k_reduced = -inverse_cayley(v_reduced, cluster_tol);
    dec.k = y * k_reduced * y.adjoint();
    dec.k = 0.5 * (dec.k + dec.k.adjoint().eval());

    dec.gap = kInf;
    dec.semigap_lower_bound = kInf;
    for (Eigen::Index i : rest) {
        const Complex lambda = sys.eigenvalues(i);
        dec.gap = std::min(dec.gap, std::abs(lambda - Complex{1.0, 0.0}));
        const double k_i = 1.0 / std::tan(0.5 * principal_angle(lambda));
        dec.semigap_lower_bound = std::min(dec.semigap_lower_bound, k_i);
    }
    return dec;
}

GapDiagnostics gap_diagnostics(const BoundaryUnitary& u, double cluster_tol,
                               double gap_threshold) {
    const auto sys = unitary_eigensystem(u.matrix());
    const Eigen::Index n = u.dim();

    GapDiagnostics diag;
    diag.gap = 2.0;
    double clockwise_arc = 2.0 * std::numbers::pi;  // empty Q: whole circle free
    bool have_rest = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lambda = sys.eigenvalues(i);
        if (in_one_cluster(lambda, cluster_tol)) continue;
        if (!have_rest) {
            diag.gap = kInf;
            have_rest = true;
        }
        diag.gap = std::min(diag.gap, std::abs(lambda - Complex{1.0, 0.0}));
        const double theta = principal_angle(lambda);
        // clockwise angular distance from 1 to lambda
        const double arc = theta < 0.0 ? -theta : 2.0 * std::numbers::pi - theta;
        clockwise_arc = std::min(clockwise_arc, arc);
    }
    diag.semigap = clockwise_arc;
    diag.is_gapped = diag.gap >= gap_threshold;
    diag.is_semigapped = diag.semigap >= gap_threshold;
    diag.k_lower_bound = clockwise_arc >= 2.0 * std::numbers::pi - 1e-15
                             ? kInf
                             : -1.0 / std::tan(0.5 * clockwise_arc);
    return diag;
}

ComplexMatrix projection_meet(const ComplexMatrix& q1, const ComplexMatrix& q2,
                              double null_tol) {
    if (q1.rows() != q1.cols() || q2.rows() != q2.cols() || q1.rows() != q2.rows()) {
        throw ShapeError("projection_meet: projections must be square and of equal size (" +
                         shape_string(q1) + " vs " + shape_string(q2) + ")");
    }
    const Eigen::Index n = q1.rows();
    const ComplexMatrix sum =
        2.0 * ComplexMatrix::Identity(n, n) - q1 - q2;  // (I-q1) + (I-q2), PSD
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sum + sum.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalError("projection_meet: eigendecomposition failed");
    }
    ComplexMatrix meet = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (es.eigenvalues()(i) < null_tol) {
            meet += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        }
    }
    return 0.5 * (meet + meet.adjoint().eval());
}

BoundaryUnitary reconstruct_unitary(const ComplexMatrix& p, const ComplexMatrix& k) {
    if (p.rows() != p.cols() || k.rows() != k.cols() || p.rows() != k.rows()) {
        throw ShapeError("reconstruct_unitary: p and k must be square and of equal size");
    }
    const Eigen::Index n = p.rows();
    if ((p * p - p).norm() > 1e-8 * static_cast<double>(n) ||
        (p - p.adjoint()).norm() > 1e-8 * static_cast<double>(n)) {
        throw DomainError("reconstruct_unitary: p is not an orthogonal projection");
    }
    const double k_scale = 1.0 + k.norm();
    if ((k - k.adjoint()).norm() > 1e-9 * k_scale) {
        throw DomainError("reconstruct_unitary: k is not Hermitian");
    }
    if ((k * p).norm() > 1e-8 * k_scale || (p * k).norm() > 1e-8 * k_scale) {
        throw DomainError("reconstruct_unitary: k is not supported on Ran(I - p)");
    }

    const ComplexMatrix y = orthonormal_complement(p);
    ComplexMatrix u = p;
    if (y.cols() > 0) {
        const ComplexMatrix k_reduced = y.adjoint() * k * y;
        u += y * cayley(-k_reduced) * y.adjoint();
    }
    return BoundaryUnitary(std::move(u));
}

BoundaryUnitary compose(const BoundaryUnitary& u1, const BoundaryUnitary& u2,
                        double cluster_tol) {
    if (u1.dim() != u2.dim()) {
        throw ShapeError("compose: boundary unitaries have different dimensions");
    }
    const ExtensionDecomposition d1 = decompose(u1, cluster_tol);
    const ExtensionDecomposition d2 = decompose(u2, cluster_tol);

    const ComplexMatrix q12 = projection_meet(d1.q, d2.q);
    const Eigen::Index n = u1.dim();
    const ComplexMatrix p12 = ComplexMatrix::Identity(n, n) - q12;
    const ComplexMatrix k12 = q12 * (0.5 * (d1.k + d2.k)) * q12;
    return reconstruct_unitary(p12, k12);
}

std::string to_string(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::dirichlet: return "dirichlet";
        case BoundaryClass::neumann: return "neumann";
        case BoundaryClass::robin: return "robin";
        case BoundaryClass::periodic_type: return "periodic-type";
        case BoundaryClass::mixed: return "mixed";
        case BoundaryClass::generic: return "generic";
    }
    return "generic";
}

BoundaryClass classify(const BoundaryUnitary& u, double cluster_tol) {
    const Eigen::Index n = u.dim();
    const double tol = 1e-8 * static_cast<double>(n);
    if ((u.matrix() - ComplexMatrix::Identity(n, n)).norm() <= tol) {
        return BoundaryClass::dirichlet;
    }
    if ((u.matrix() + ComplexMatrix::Identity(n, n)).norm() <= tol) {
        return BoundaryClass::neumann;
    }

    const ExtensionDecomposition dec = decompose(u, cluster_tol);
    const double rank_p = dec.p.real().trace();
    if (rank_p > static_cast<double>(n) - 0.5) {
        return BoundaryClass::dirichlet;
    }
    if (rank_p < 0.5) {
        ComplexMatrix off = dec.k;
        off.diagonal().setZero();
        return off.norm() <= 1e-8 * (1.0 + dec.k.norm()) ? BoundaryClass::robin
                                                         : BoundaryClass::generic;
    }
    if (n == 2 && rank_p < 1.5) {
        Eigen::Vector2cd dir;
        dir << Complex{1.0, 0.0}, Complex{-1.0, 0.0};
        dir /= std::sqrt(2.0);
        const ComplexMatrix p_periodic = dir * dir.adjoint();
        if ((dec.p - p_periodic).norm() <= 1e-8 && dec.k.norm() <= 1e-8) {
            return BoundaryClass::periodic_type;
        }
    }
    return BoundaryClass::mixed;
}

}  // namespace bc
