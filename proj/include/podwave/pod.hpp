#ifndef PODWAVE_POD_HPP
#define PODWAVE_POD_HPP
//
// Proper orthogonal decomposition in X = L2(0,1) of snapshot data built
// three ways: the snapshots themselves (Standard), one snapshot plus all
// first difference quotients (DQ1), and one snapshot, one first difference
// quotient plus all second difference quotients (DDQ).
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "podwave/difference.hpp"
#include "podwave/fem1d.hpp"
#include "podwave/numerics.hpp"
#include "podwave/wave.hpp"

namespace podwave {

enum class PodMethod { Standard, DQ1, DDQ };

inline std::string to_string(PodMethod m)
{
    switch (m) {
    case PodMethod::Standard: return "standard";
    case PodMethod::DQ1: return "dq1";
    case PodMethod::DDQ: return "ddq";
    }
    return "unknown";
}

inline PodMethod parse_pod_method(std::string_view name)
{
    if (name == "standard")
        return PodMethod::Standard;
    if (name == "dq1")
        return PodMethod::DQ1;
    if (name == "ddq")
        return PodMethod::DDQ;
    throw std::invalid_argument("unknown POD method '" + std::string(name) + "' (expected standard, dq1 or ddq)");
}

enum class Norm { L2, H10 };
enum class Projector { Orthogonal, Ritz };

inline std::string to_string(Norm n) { return n == Norm::L2 ? "L2" : "H10"; }
inline std::string to_string(Projector p) { return p == Projector::Orthogonal ? "L2proj" : "ritz"; }

inline double norm_sq(const FemSpace& space, Norm norm, std::span<const double> v)
{
    return norm == Norm::L2 ? space.l2_norm_sq(v) : space.h10_norm_sq(v);
}

//
// POD data w^1..w^{N_w} with weights gamma_j. Row j of vectors is w^{j+1}.
//
struct PodDataSet {
    DenseMatrix vectors;
    Vector weights;
    PodMethod method = PodMethod::Standard;

    std::size_t size() const { return vectors.rows(); }
};

//
// Standard: w^j = u^j, gamma_j = dt.
// DQ1:      w^1 = u^1, w^{j+1} = d u^j;            gamma = (1, dt, ..., dt).
// DDQ:      w^1 = u^1, w^2 = d u^1, w^{j+1} = dd u^j; gamma = (1, 1, dt, ..., dt).
//
inline PodDataSet build_dataset(const Trajectory& traj, PodMethod method)
{
    const std::size_t n = traj.size();
    const std::size_t m = traj.space.n_dof();
    const double dt = traj.grid.dt();
    if (method == PodMethod::DQ1 && n < 2)
        throw std::invalid_argument("build_dataset: DQ1 data needs N >= 2");
    if (method == PodMethod::DDQ && n < 3)
        throw std::invalid_argument("build_dataset: DDQ data needs N >= 3");

    PodDataSet data{DenseMatrix(n, m), Vector(n, dt), method};
    auto put = [&](std::size_t row, const Vector& v) { std::copy(v.begin(), v.end(), data.vectors.row(row).begin()); };

    switch (method) {
    case PodMethod::Standard:
        data.vectors = traj.states;
        break;
    case PodMethod::DQ1:
        std::copy(traj.state(0).begin(), traj.state(0).end(), data.vectors.row(0).begin());
        data.weights[0] = 1.0;
        for (std::size_t j = 0; j + 1 < n; ++j)
            put(j + 1, diff::forward(traj.state(j), traj.state(j + 1), dt));
        break;
    case PodMethod::DDQ:
        std::copy(traj.state(0).begin(), traj.state(0).end(), data.vectors.row(0).begin());
        put(1, diff::forward(traj.state(0), traj.state(1), dt));
        data.weights[0] = data.weights[1] = 1.0;
        for (std::size_t j = 1; j + 1 < n; ++j)
            put(j + 1, diff::second(traj.state(j - 1), traj.state(j), traj.state(j + 1), dt));
        break;
    }
    return data;
}

// Svd: QR + one-sided Jacobi on the weighted data matrix (accurate tail).
// Gram: Jacobi eigensolve of the weighted Gram matrix (tail limited to
// about eps * lambda_1); kept as an independent cross-check.
enum class PodSolver { Svd, Gram };

struct PodOptions {
    double rank_tolerance = 1e-22;  // keep lambda_k > tol * lambda_1
    PodSolver solver = PodSolver::Svd;
};

//
// POD modes phi_k (rows of modes, M-orthonormal) and eigenvalues lambda_k
// (descending, all above the rank threshold). The singular values of the
// POD operator are sqrt(lambda_k).
//
struct PodBasis {
    DenseMatrix modes;
    Vector eigenvalues;
    PodMethod method = PodMethod::Standard;
    double T = 0.0;   // length of the data time interval
    double dt = 0.0;  // data time step
    // every computed eigenvalue, including those below the threshold
    Vector spectrum;

    std::size_t rank() const { return eigenvalues.size(); }
    std::size_t n_dof() const { return modes.cols(); }
    std::span<const double> mode(std::size_t k) const { return modes.row(k); }
};

namespace detail {

// spatial Gram matrix sum_j gamma_j w^j (w^j)^T
inline DenseMatrix weighted_gram(const PodDataSet& data)
{
    const std::size_t m = data.vectors.cols();
    DenseMatrix g(m, m);
    for (std::size_t j = 0; j < data.size(); ++j) {
        const auto w = data.vectors.row(j);
        const double gamma = data.weights[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double gi = gamma * w[i];
            if (gi == 0.0)
                continue;
            double* gr = &g(i, 0);
            for (std::size_t k = i; k < m; ++k)
                gr[k] += gi * w[k];
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < i; ++k)
            g(i, k) = g(k, i);
    return g;
}

// L^T G L for the lower bidiagonal Cholesky factor L of the mass matrix
inline DenseMatrix congruence(const DenseMatrix& g, const BidiagonalFactor& l)
{
    const std::size_t m = g.rows();
    DenseMatrix gl(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
            gl(i, k) = g(i, k) * l.diag[k] + (k + 1 < m ? g(i, k + 1) * l.sub[k] : 0.0);
    DenseMatrix out(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j)
            out(k, j) = l.diag[k] * gl(k, j) + (k + 1 < m ? l.sub[k] * gl(k + 1, j) : 0.0);
    return out;
}

// B = L^T W Gamma^{1/2}: row i, column j holds sqrt(gamma_j) (L^T w^j)_i;
// zero columns are appended when there are fewer vectors than unknowns so
// that B is never taller than wide
inline DenseMatrix weighted_data(const PodDataSet& data, const BidiagonalFactor& l)
{
    const std::size_t m = data.vectors.cols();
    const std::size_t n = data.size();
    DenseMatrix b(m, std::max(m, n));
    for (std::size_t j = 0; j < n; ++j) {
        const double g = std::sqrt(data.weights[j]);
        const Vector lw = l.apply_transpose(data.vectors.row(j));
        for (std::size_t i = 0; i < m; ++i)
            b(i, j) = g * lw[i];
    }
    return b;
}

}  // namespace detail

//
// Weighted POD in L2: with M = L L^T and B = L^T W Gamma^{1/2}, the
// eigenvalues are those of B B^T and the modes are L^{-T} times its
// eigenvectors.
//
inline PodBasis compute_basis(const PodDataSet& data, const FemSpace& space, const PodOptions& opts = {})
{
    detail::require(data.vectors.cols() == space.n_dof(), "compute_basis: data does not match the FE space");
    detail::require(data.weights.size() == data.size(), "compute_basis: weight count mismatch");

    for (double g : data.weights)
        detail::require(g >= 0.0, "compute_basis: negative weight");

    const BidiagonalFactor l = cholesky_tridiagonal(space.mass());
    SymEigResult eig;
    if (opts.solver == PodSolver::Gram) {
        eig = sym_eig(detail::congruence(detail::weighted_gram(data), l));
    } else {
        LeftSvdResult svd = svd_left(detail::weighted_data(data, l));
        eig.eigenvalues.resize(svd.singular_values.size());
        for (std::size_t k = 0; k < svd.singular_values.size(); ++k)
            eig.eigenvalues[k] = svd.singular_values[k] * svd.singular_values[k];
        eig.eigenvectors = std::move(svd.left_vectors);
    }

    PodBasis basis;
    basis.method = data.method;
    basis.spectrum = eig.eigenvalues;
    const double lead = eig.eigenvalues.front();
    if (!(lead > 0.0))
        throw std::invalid_argument("compute_basis: POD data is identically zero");

    std::size_t s = 0;
    while (s < eig.eigenvalues.size() && eig.eigenvalues[s] > opts.rank_tolerance * lead)
        ++s;

    const std::size_t m = space.n_dof();
    basis.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + static_cast<std::ptrdiff_t>(s));
    basis.modes = DenseMatrix(s, m);
    for (std::size_t k = 0; k < s; ++k) {
        Vector phi = eig.eigenvectors.column(k);
        l.solve_transpose_in_place(phi);
        // first clearly nonzero coefficient positive
        const double big = norm_inf(phi);
        for (double v : phi)
            if (std::abs(v) > 1e-8 * big) {
                if (v < 0.0)
                    for (double& x : phi)
                        x = -x;
                break;
            }
        std::copy(phi.begin(), phi.end(), basis.modes.row(k).begin());
    }
    return basis;
}

inline PodBasis compute_basis(const Trajectory& traj, PodMethod method, const PodOptions& opts = {})
{
    PodBasis b = compute_basis(build_dataset(traj, method), traj.space, opts);
    b.T = traj.grid.T();
    b.dt = traj.grid.dt();
    return b;
}

//
// Projection onto X_r = span{phi_1..phi_r}: either L2-orthogonal or the
// Ritz projection (H10-orthogonal). The operator data is cached for reuse
// over many vectors.
//
class ModalProjector {
public:
    ModalProjector(const PodBasis& basis, std::size_t r, const FemSpace& space, Projector kind)
        : kind_(kind)
    {
        if (r < 1 || r > basis.rank())
            throw std::invalid_argument("projector: r = " + std::to_string(r) + " outside [1, " +
                                        std::to_string(basis.rank()) + "]");
        detail::require(basis.n_dof() == space.n_dof(), "projector: basis does not match the FE space");
        const std::size_t m = space.n_dof();
        modes_ = DenseMatrix(r, m);
        weighted_ = DenseMatrix(r, m);
        const TridiagonalMatrix& gram = kind == Projector::Orthogonal ? space.mass() : space.stiffness();
        for (std::size_t k = 0; k < r; ++k) {
            std::copy(basis.mode(k).begin(), basis.mode(k).end(), modes_.row(k).begin());
            const Vector wk = gram.apply(basis.mode(k));
            std::copy(wk.begin(), wk.end(), weighted_.row(k).begin());
        }
        if (kind == Projector::Ritz) {
            DenseMatrix reduced(r, r);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    reduced(i, j) = dot(weighted_.row(i), modes_.row(j));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < i; ++j)
                    reduced(i, j) = reduced(j, i) = 0.5 * (reduced(i, j) + reduced(j, i));
            try {
                chol_.emplace(reduced);
            }
            catch (const NumericalError&) {
                throw NumericalError("Ritz projection: reduced stiffness matrix is singular");
            }
        }
    }

    std::size_t rank() const { return modes_.rows(); }

    // modal coefficients c with P v = sum_k c_k phi_k
    Vector coefficients(std::span<const double> v) const
    {
        Vector c = weighted_.apply(v);
        if (chol_)
            chol_->solve_in_place(c);
        return c;
    }

    Vector apply(std::span<const double> v) const { return modes_.apply_transpose(coefficients(v)); }

    // v - P v
    Vector residual(std::span<const double> v) const
    {
        const Vector c = coefficients(v);
        Vector out(v.begin(), v.end());
        for (std::size_t k = 0; k < c.size(); ++k)
            axpy(-c[k], modes_.row(k), out);
        return out;
    }

private:
    Projector kind_;
    DenseMatrix modes_;
    DenseMatrix weighted_;  // rows M phi_k or A phi_k
    std::optional<DenseCholesky> chol_;
};

// Pi_r v = sum_{k<=r} (v, phi_k)_{L2} phi_k
inline Vector project_l2(const PodBasis& basis, std::size_t r, const FemSpace& space, std::span<const double> v)
{
    return ModalProjector(basis, r, space, Projector::Orthogonal).apply(v);
}

// R_r v: (grad(v - R_r v), grad phi_k) = 0, k <= r
inline Vector project_ritz(const PodBasis& basis, std::size_t r, const FemSpace& space, std::span<const double> v)
{
    return ModalProjector(basis, r, space, Projector::Ritz).apply(v);
}

// sum_j gamma_j |w^j - P w^j|^2 in the requested norm
inline double data_error_actual(const PodDataSet& data, const PodBasis& basis, std::size_t r, const FemSpace& space,
                                Norm norm, Projector projector)
{
    const ModalProjector proj(basis, r, space, projector);
    double total = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j)
        total += data.weights[j] * norm_sq(space, norm, proj.residual(data.vectors.row(j)));
    return total;
}

inline double data_error_actual(const Trajectory& traj, const PodBasis& basis, std::size_t r, Norm norm,
                                Projector projector)
{
    return data_error_actual(build_dataset(traj, basis.method), basis, r, traj.space, norm, projector);
}

//
// sum_{k>r}^{s} lambda_k m_k with m_k = |phi_k - P phi_k|^2 in the requested
// norm; this is 1 for the L2 norm with the orthogonal projector and
// |phi_k|^2_Y for any norm with the orthogonal projector.
//
inline double data_error_formula(const PodBasis& basis, std::size_t r, const FemSpace& space, Norm norm,
                                 Projector projector)
{
    if (r == basis.rank())
        return 0.0;
    const ModalProjector proj(basis, r, space, projector);
    double total = 0.0;
    for (std::size_t k = r; k < basis.rank(); ++k) {
        double weight = 1.0;
        if (norm == Norm::H10 || projector == Projector::Ritz)
            weight = projector == Projector::Orthogonal ? norm_sq(space, norm, basis.mode(k))
                                                        : norm_sq(space, norm, proj.residual(basis.mode(k)));
        total += basis.eigenvalues[k] * weight;
    }
    return total;
}

//////////////////////////////////////////////////////////////////////
//
// Pointwise data error bounds
//
//////////////////////////////////////////////////////////////////////

struct BoundConstants {
    double C1;         // DQ max bound, 2 max{T,1}
    double C2;         // DDQ max bound, 3 max{T^3,1}
    double C3;         // DDQ difference bound, 2 max{T,1}
    double C_sum_DQ;   // 4 max{T^2,T}
    double C_sum_DDQ;  // 6 max{T^4,T}
    double C_p;        // Poincare constant of (0,1)

    static BoundConstants for_interval(double T)
    {
        detail::require(T > 0.0, "BoundConstants: T must be positive");
        return {2.0 * std::max(T, 1.0),
                3.0 * std::max(T * T * T, 1.0),
                2.0 * std::max(T, 1.0),
                4.0 * std::max(T * T, T),
                6.0 * std::max(T * T * T * T, T),
                std::numbers::pi * std::numbers::pi};
    }
};

enum class BoundKind { Max, WeightedSum };

struct BoundCheck {
    double lhs;
    double rhs;
    double ratio;  // lhs / rhs; 0 when both vanish, +inf when only rhs does
};

inline double bound_ratio(double lhs, double rhs)
{
    if (rhs > 0.0)
        return lhs / rhs;
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

//
// max_j |u^j - P u^j|^2 (or sum_j dt |u^j - P u^j|^2) against C times the
// tail formula, for DQ1 or DDQ bases.
//
inline BoundCheck pointwise_bound_check(const Trajectory& traj, const PodBasis& basis, std::size_t r, Norm norm,
                                        Projector projector, BoundKind kind = BoundKind::Max)
{
    if (basis.method == PodMethod::Standard)
        throw std::invalid_argument("pointwise_bound_check: standard POD has no pointwise data bound");
    const BoundConstants consts = BoundConstants::for_interval(traj.grid.T());
    double constant = 0.0;
    if (basis.method == PodMethod::DQ1)
        constant = kind == BoundKind::Max ? consts.C1 : consts.C_sum_DQ;
    else
        constant = kind == BoundKind::Max ? consts.C2 : consts.C_sum_DDQ;

    const ModalProjector proj(basis, r, traj.space, projector);
    double lhs = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double e = norm_sq(traj.space, norm, proj.residual(traj.state(j)));
        lhs = kind == BoundKind::Max ? std::max(lhs, e) : lhs + traj.grid.dt() * e;
    }
    const double rhs = constant * data_error_formula(basis, r, traj.space, norm, projector);
    return {lhs, rhs, bound_ratio(lhs, rhs)};
}

//
// Representation of a sequence through its second difference quotients:
//   d z^n = d z^1 + dt sum_{i=2}^{n} dd z^i
//   z^n   = z^1 + (n-1) dt d z^1 + dt^2 sum_{i=2}^{n-1} (n-i) dd z^i
// ddq[i] holds dd z^{i+1} (i.e. ddq[1] is dd z^2); n is 1-based.
//
inline Vector telescoped_difference(std::span<const double> dz1, const DenseMatrix& ddq, double dt, std::size_t n)
{
    detail::require(n >= 2 && n <= ddq.rows(), "telescoped_difference: n out of range");
    Vector out(dz1.begin(), dz1.end());
    for (std::size_t i = 2; i <= n; ++i)
        axpy(dt, ddq.row(i - 1), out);
    return out;
}

inline Vector telescoped_state(std::span<const double> z1, std::span<const double> dz1, const DenseMatrix& ddq,
                               double dt, std::size_t n)
{
    detail::require(n >= 3 && n - 1 <= ddq.rows(), "telescoped_state: n out of range");
    Vector out(z1.begin(), z1.end());
    axpy(static_cast<double>(n - 1) * dt, dz1, out);
    for (std::size_t i = 2; i + 1 <= n; ++i)
        axpy(dt * dt * static_cast<double>(n - i), ddq.row(i - 1), out);
    return out;
}

//
// Both sides of the general sequence bounds for z^1..z^N with dt = T/(N-1),
// under a caller-supplied squared norm.
//
struct SequenceBounds {
    BoundCheck dq_max;        // max |z^j|^2 <= C1 (|z^1|^2 + sum dt |d z^l|^2)
    BoundCheck ddq_max;       // max |z^j|^2 <= C2 (|z^1|^2 + |d z^1|^2 + sum dt |dd z^i|^2)
    BoundCheck ddq_avg;       // max_{j>=2} |zbar^j|^2 <= C2 (...)
    BoundCheck ddq_forward;   // max |d z^j|^2 <= C3 (|d z^1|^2 + sum dt |dd z^i|^2)
    BoundCheck ddq_backward;  // max_{j>=2} |d^- z^j|^2 <= C3 (...)
    BoundCheck ddq_centered;  // max_{2<=j<=N-1} |d zbar^j|^2 <= C3 (...)
};

template <typename NormSq>
SequenceBounds sequence_bounds(const DenseMatrix& z, double T, NormSq&& norm_sq_fn)
{
    const std::size_t n = z.rows();
    detail::require(n >= 3, "sequence_bounds: need at least 3 members");
    const double dt = T / static_cast<double>(n - 1);
    const BoundConstants k = BoundConstants::for_interval(T);

    double max_z = 0.0, max_avg = 0.0, max_fwd = 0.0, max_bwd = 0.0, max_ctr = 0.0;
    double sum_dq = 0.0, sum_ddq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        max_z = std::max(max_z, norm_sq_fn(z.row(j)));
        if (j >= 1) {
            max_avg = std::max(max_avg, norm_sq_fn(diff::backward_average(z.row(j - 1), z.row(j))));
            const double fwd = norm_sq_fn(diff::forward(z.row(j - 1), z.row(j), dt));
            max_fwd = std::max(max_fwd, fwd);
            max_bwd = std::max(max_bwd, fwd);  // d z^{j-1} = d^- z^j
            sum_dq += dt * fwd;
        }
        if (j >= 1 && j + 1 < n) {
            sum_ddq += dt * norm_sq_fn(diff::second(z.row(j - 1), z.row(j), z.row(j + 1), dt));
            max_ctr = std::max(max_ctr, norm_sq_fn(diff::centered(z.row(j - 1), z.row(j + 1), dt)));
        }
    }
    const double z1 = norm_sq_fn(z.row(0));
    const double dz1 = norm_sq_fn(diff::forward(z.row(0), z.row(1), dt));

    auto make = [](double lhs, double rhs) { return BoundCheck{lhs, rhs, bound_ratio(lhs, rhs)}; };
    const double ddq_data = z1 + dz1 + sum_ddq;
    const double ddq_diff = dz1 + sum_ddq;
    return {make(max_z, k.C1 * (z1 + sum_dq)),  make(max_z, k.C2 * ddq_data),    make(max_avg, k.C2 * ddq_data),
            make(max_fwd, k.C3 * ddq_diff),     make(max_bwd, k.C3 * ddq_diff), make(max_ctr, k.C3 * ddq_diff)};
}

}  // namespace podwave

#endif  // PODWAVE_POD_HPP
