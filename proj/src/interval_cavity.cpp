#include "bc/interval_cavity.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace bc {

namespace {

constexpr Complex kImag{0.0, 1.0};

// Imaginary content relative to scale; used to route real pencils to the
// real solver (roughly 4x cheaper than the complex one at M = 512).
bool effectively_real(const ComplexMatrix& m) {
    return m.imag().lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + m.real().norm());
}

}  // namespace

struct Cavity1D::SpectralHolder {
    std::once_flag once;
    Spectral data;
};

Cavity1D::Cavity1D(Eigen::Matrix2cd constraint_p, Eigen::Matrix2cd boundary_k, int cells,
                   double mass)
    : cells_(cells),
      mass_(mass),
      constraint_p_(std::move(constraint_p)),
      boundary_k_(std::move(boundary_k)) {
    if (cells_ < 8) {
        throw DomainError("Cavity1D: at least 8 cells are required");
    }
    if (!(mass_ > 0.0)) {
        throw DomainError("Cavity1D: mass must be positive");
    }
    if ((constraint_p_ * constraint_p_ - constraint_p_).norm() > 1e-8 ||
        (constraint_p_ - constraint_p_.adjoint()).norm() > 1e-8) {
        throw DomainError("Cavity1D: constraint is not an orthogonal projection");
    }
    const double k_scale = 1.0 + boundary_k_.norm();
    if ((boundary_k_ - boundary_k_.adjoint()).norm() > 1e-9 * k_scale) {
        throw DomainError("Cavity1D: boundary operator is not Hermitian");
    }
    if ((boundary_k_ * constraint_p_).norm() > 1e-8 * k_scale) {
        throw DomainError("Cavity1D: boundary operator must vanish on the constraint range");
    }

    const Eigen::Index n = nodes();
    const double h = grid_h();

    stiffness_ = Eigen::MatrixXd::Zero(n, n);
    mass_matrix_ = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index e = 0; e < cells_; ++e) {
        stiffness_(e, e) += 1.0 / h;
        stiffness_(e + 1, e + 1) += 1.0 / h;
        stiffness_(e, e + 1) -= 1.0 / h;
        stiffness_(e + 1, e) -= 1.0 / h;
        mass_matrix_(e, e) += h / 3.0;
        mass_matrix_(e + 1, e + 1) += h / 3.0;
        mass_matrix_(e, e + 1) += h / 6.0;
        mass_matrix_(e + 1, e) += h / 6.0;
    }

    // Admissible basis: interior nodes, then boundary vectors spanning Ran Q
    // lifted to the end nodes.
    const ComplexMatrix boundary_dirs = orthonormal_complement(constraint_p_);
    const Eigen::Index n_red = (n - 2) + boundary_dirs.cols();
    reduced_basis_ = ComplexMatrix::Zero(n, n_red);
    for (Eigen::Index j = 1; j < n - 1; ++j) {
        reduced_basis_(j, j - 1) = 1.0;
    }
    for (Eigen::Index j = 0; j < boundary_dirs.cols(); ++j) {
        reduced_basis_(0, n - 2 + j) = boundary_dirs(0, j);
        reduced_basis_(n - 1, n - 2 + j) = boundary_dirs(1, j);
    }

    ComplexMatrix full = stiffness_.cast<Complex>();
    full(0, 0) += boundary_k_(0, 0);
    full(0, n - 1) += boundary_k_(0, 1);
    full(n - 1, 0) += boundary_k_(1, 0);
    full(n - 1, n - 1) += boundary_k_(1, 1);
    full /= 2.0 * mass_;

    hamiltonian_ = reduced_basis_.adjoint() * full * reduced_basis_;
    hamiltonian_ = 0.5 * (hamiltonian_ + hamiltonian_.adjoint().eval());
    reduced_mass_ = reduced_basis_.adjoint() * mass_matrix_.cast<Complex>() * reduced_basis_;
    reduced_mass_ = 0.5 * (reduced_mass_ + reduced_mass_.adjoint().eval());

    spectral_cache_ = std::make_shared<SpectralHolder>();
}

const Cavity1D::Spectral& Cavity1D::spectral() const {
    std::call_once(spectral_cache_->once, [this] {
        Eigen::VectorXd eigenvalues;
        ComplexMatrix vectors;
        if (effectively_real(hamiltonian_) && effectively_real(reduced_mass_) &&
            effectively_real(reduced_basis_)) {
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
                hamiltonian_.real(), reduced_mass_.real());
            if (solver.info() != Eigen::Success) {
                throw NumericalError("Cavity1D: generalized eigensolver failed");
            }
            eigenvalues = solver.eigenvalues();
            vectors = solver.eigenvectors().cast<Complex>();
        } else {
            Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian_,
                                                                           reduced_mass_);
            if (solver.info() != Eigen::Success) {
                throw NumericalError("Cavity1D: generalized eigensolver failed");
            }
            eigenvalues = solver.eigenvalues();
            vectors = solver.eigenvectors();
        }
        spectral_cache_->data.eigenvalues = std::move(eigenvalues);
        spectral_cache_->data.modes = reduced_basis_ * vectors;
        spectral_cache_->data.extract =
            spectral_cache_->data.modes.adjoint() * mass_matrix_.cast<Complex>();
    });
    return spectral_cache_->data;
}

Cavity1D build_cavity(const BoundaryUnitary& u, int cells, double mass) {
    if (u.dim() != 2) {
        throw ShapeError("build_cavity: interval boundary unitaries are 2x2");
    }
    const ExtensionDecomposition dec = decompose(u);
    return Cavity1D(dec.p, dec.k, cells, mass);
}

Eigen::Vector2cd boundary_trace(const StateVector& psi, const Cavity1D& cavity) {
    if (psi.size() != cavity.nodes()) {
        std::ostringstream os;
        os << "boundary_trace: state has " << psi.size() << " nodes, cavity expects "
           << cavity.nodes();
        throw ShapeError(os.str());
    }
    Eigen::Vector2cd phi;
    phi << psi(0), psi(psi.size() - 1);
    return phi;
}

Eigen::VectorXd spectrum(const Cavity1D& cavity, int count) {
    if (count < 0 || count > cavity.reduced_dim()) {
        throw DomainError("spectrum: count exceeds the reduced dimension");
    }
    return cavity.spectral().eigenvalues.head(count);
}

StateVector propagate(const Cavity1D& cavity, const StateVector& psi0, double t) {
    if (psi0.size() != cavity.nodes()) {
        throw ShapeError("propagate: state size does not match the lattice");
    }
    const StateVector projected = project_to_domain(cavity, psi0);
    if ((psi0 - projected).norm() > 1e-8 * std::max(1.0, psi0.norm())) {
        throw DomainError("propagate: state violates the boundary constraint");
    }
    if (t == 0.0) {
        return psi0;
    }
    const auto& spec = cavity.spectral();
    ComplexVector coeffs = spec.extract * psi0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        coeffs(i) *= std::exp(-kImag * spec.eigenvalues(i) * t);
    }
    return spec.modes * coeffs;
}

double b_norm(const Cavity1D& cavity, const StateVector& psi) {
    const Complex q = psi.adjoint() * (cavity.mass_matrix().cast<Complex>() * psi);
    return std::sqrt(std::max(0.0, q.real()));
}

StateVector project_to_domain(const Cavity1D& cavity, const StateVector& psi) {
    const ComplexMatrix& z = cavity.reduced_basis();
    return z * (z.adjoint() * psi);
}

StateVector gaussian_state(const Cavity1D& cavity, double center, double width) {
    if (!(width > 0.0)) {
        throw DomainError("gaussian_state: width must be positive");
    }
    const Eigen::Index n = cavity.nodes();
    StateVector psi(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) * cavity.grid_h();
        const double d = (x - center) / width;
        psi(j) = std::exp(-0.5 * d * d);
    }
    psi = project_to_domain(cavity, psi);
    const double norm = b_norm(cavity, psi);
    if (norm < 1e-12) {
        throw DomainError("gaussian_state: state vanishes on the admissible subspace");
    }
    return psi / norm;
}

Cavity1D form_sum(const Cavity1D& c1, const Cavity1D& c2) {
    if (c1.cells() != c2.cells()) {
        throw DomainError("form_sum: grid mismatch");
    }
    if (c1.mass() != c2.mass()) {
        throw DomainError("form_sum: mass mismatch");
    }
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const ComplexMatrix q12 =
        projection_meet(id - c1.constraint_p(), id - c2.constraint_p());
    const Eigen::Matrix2cd k12 =
        q12 * (0.5 * (c1.boundary_k() + c2.boundary_k())) * q12;
    return Cavity1D(id - q12, k12, c1.cells(), c1.mass());
}

double verify_representation(const Cavity1D& c12, const Cavity1D& w_cavity) {
    if (c12.cells() != w_cavity.cells() || c12.mass() != w_cavity.mass()) {
        throw DomainError("verify_representation: lattice mismatch");
    }
    if (c12.reduced_dim() != w_cavity.reduced_dim()) {
        std::ostringstream os;
        os << "verify_representation: reduced dimensions differ (" << c12.reduced_dim()
           << " vs " << w_cavity.reduced_dim() << "); composition inconsistency";
        throw ConstraintMismatchError(os.str());
    }
    if ((c12.constraint_p() - w_cavity.constraint_p()).norm() > 1e-8) {
        throw ConstraintMismatchError(
            "verify_representation: constraint projections differ; composition inconsistency");
    }
    const ComplexMatrix lhs =
        c12.reduced_basis() * c12.reduced_hamiltonian() * c12.reduced_basis().adjoint();
    const ComplexMatrix rhs = w_cavity.reduced_basis() * w_cavity.reduced_hamiltonian() *
                              w_cavity.reduced_basis().adjoint();
    return (lhs - rhs).norm();
}

}  // namespace bc
