#include "bc/trotter.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bc {

namespace {

constexpr Complex kImag{0.0, 1.0};

void require_shared_domain(const Cavity1D& c1, const Cavity1D& c2) {
    if (c1.cells() != c2.cells() || c1.mass() != c2.mass()) {
        throw DomainError("alternating evolution: cavities live on different lattices");
    }
    if ((c1.constraint_p() - c2.constraint_p()).norm() > 1e-8) {
        throw DomainError(
            "alternating evolution: cavities have different constraint subspaces; "
            "a hard-constrained product is not simulated on the lattice, use the "
            "penalty route (penalty_dirichlet) instead");
    }
}

// exp(-i tau H) as a pair of maps into and out of the eigenbasis.
struct CachedPropagator {
    const Cavity1D::Spectral* spec;
    ComplexVector phases;

    CachedPropagator(const Cavity1D& cavity, double tau) : spec(&cavity.spectral()) {
        phases.resize(spec->eigenvalues.size());
        for (Eigen::Index i = 0; i < phases.size(); ++i) {
            phases(i) = std::exp(-kImag * spec->eigenvalues(i) * tau);
        }
    }

    void apply(StateVector& psi) const {
        ComplexVector coeffs = spec->extract * psi;
        coeffs.array() *= phases.array();
        psi = spec->modes * coeffs;
    }
};

double fit_order(const std::vector<int>& n_values, const std::vector<double>& errors) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i] > 1e-14) {
            xs.push_back(std::log(static_cast<double>(n_values[i])));
            ys.push_back(std::log(errors[i]));
        }
    }
    if (xs.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double count = static_cast<double>(xs.size());
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return -slope;
}

}  // namespace

StateVector alternating_product(const StateVector& psi0, double t, int n,
                                const Cavity1D& c1, const Cavity1D& c2) {
    if (n < 1) {
        throw DomainError("alternating_product: N must be at least 1");
    }
    require_shared_domain(c1, c2);
    if (psi0.size() != c1.nodes()) {
        throw ShapeError("alternating_product: state size does not match the lattice");
    }
    const double tau = t / static_cast<double>(n);
    const CachedPropagator step1(c1, tau);
    const CachedPropagator step2(c2, tau);
    StateVector psi = psi0;
    for (int k = 0; k < n; ++k) {
        step2.apply(psi);
        step1.apply(psi);
    }
    return psi;
}

StateVector limit_reference(const StateVector& psi0, double t, const Cavity1D& w_cavity) {
    return propagate(w_cavity, psi0, 2.0 * t);
}

double time_averaged_error(const StateVector& psi0, double avg_t_end, int samples, int n,
                           const Cavity1D& c1, const Cavity1D& c2,
                           const Cavity1D& w_cavity) {
    if (!(avg_t_end > 0.0)) {
        throw DomainError("time_averaged_error: the averaging window must be positive");
    }
    if (samples < 4) {
        throw DomainError("time_averaged_error: at least 4 samples are required");
    }
    const double dt = avg_t_end / static_cast<double>(samples - 1);
    double sum = 0.0;
    for (int j = 1; j < samples; ++j) {  // error at t = 0 vanishes identically
        const double tj = dt * static_cast<double>(j);
        const StateVector alt = alternating_product(psi0, tj, n, c1, c2);
        const StateVector ref = limit_reference(psi0, tj, w_cavity);
        const double err = b_norm(c1, alt - ref);
        sum += (j == samples - 1 ? 0.5 : 1.0) * dt * err;
    }
    return sum / avg_t_end;
}

TrotterReport convergence_sweep(const StateVector& psi0, double t,
                                const std::vector<int>& n_values, const Cavity1D& c1,
                                const Cavity1D& c2, const Cavity1D& w_cavity,
                                double avg_t_end, int avg_samples) {
    if (n_values.empty()) {
        throw DomainError("convergence_sweep: empty N schedule");
    }
    for (std::size_t i = 1; i < n_values.size(); ++i) {
        if (n_values[i] <= n_values[i - 1]) {
            throw DomainError("convergence_sweep: N values must be strictly increasing");
        }
    }
    if (avg_t_end <= 0.0) {
        avg_t_end = 2.0 * t;
    }

    TrotterReport report;
    report.n_values = n_values;
    report.t = t;
    const StateVector ref = limit_reference(psi0, t, w_cavity);
    for (int n : n_values) {
        const StateVector alt = alternating_product(psi0, t, n, c1, c2);
        report.pointwise_errors.push_back(b_norm(c1, alt - ref));
        report.time_averaged_errors.push_back(
            time_averaged_error(psi0, avg_t_end, avg_samples, n, c1, c2, w_cavity));
    }
    report.fitted_order = fit_order(report.n_values, report.pointwise_errors);
    return report;
}

std::vector<PenaltyEntry> penalty_dirichlet(const std::vector<double>& lambdas,
                                            const BoundaryUnitary& partner, int cells,
                                            double mass, const StateVector& psi0, double t,
                                            int n, int eigenvalue_count) {
    if (lambdas.empty()) {
        throw DomainError("penalty_dirichlet: empty lambda schedule");
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] < 0.0 || (i > 0 && lambdas[i] <= lambdas[i - 1])) {
            throw DomainError(
                "penalty_dirichlet: lambdas must be nonnegative and strictly increasing");
        }
    }

    const Cavity1D partner_cavity = build_cavity(partner, cells, mass);
    const Cavity1D dirichlet_composed =
        build_cavity(compose(BoundaryUnitary::dirichlet(2), partner), cells, mass);
    const Eigen::VectorXd reference = spectrum(dirichlet_composed, eigenvalue_count);

    std::vector<PenaltyEntry> entries;
    entries.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const BoundaryUnitary u_lambda = reconstruct_unitary(
            ComplexMatrix::Zero(2, 2), lambda * ComplexMatrix::Identity(2, 2));
        const Cavity1D penalized = build_cavity(u_lambda, cells, mass);
        const Cavity1D composed = build_cavity(compose(u_lambda, partner), cells, mass);

        PenaltyEntry entry;
        entry.lambda = lambda;
        const StateVector alt = alternating_product(psi0, t, n, penalized, partner_cavity);
        entry.pointwise_error = b_norm(penalized, alt - limit_reference(psi0, t, composed));
        entry.time_averaged_error =
            time_averaged_error(psi0, 2.0 * t, 5, n, penalized, partner_cavity, composed);
        entry.eigenvalues = spectrum(composed, eigenvalue_count);
        entry.reference_eigenvalues = reference;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < entry.eigenvalues.size(); ++i) {
            worst = std::max(worst, std::abs(entry.eigenvalues(i) - reference(i)) /
                                        std::abs(reference(i)));
        }
        entry.max_relative_eigenvalue_error = worst;
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace bc
