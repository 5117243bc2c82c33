#ifndef PODWAVE_ROM_HPP
#define PODWAVE_ROM_HPP
//
// POD-Galerkin reduced model of the damped wave equation. The modes are
// M-orthonormal, so the reduced mass matrix is the identity and only the
// reduced stiffness S_r = Phi_r^T A Phi_r is needed. The reduced model is
// advanced with the same three-level scheme as the FE model.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "podwave/fem1d.hpp"
#include "podwave/numerics.hpp"
#include "podwave/pod.hpp"
#include "podwave/wave.hpp"

namespace podwave {

struct RomSystem {
    std::size_t r = 0;
    FemSpace space;
    DenseMatrix modes;      // r x n_dof, rows phi_k
    DenseMatrix stiffness;  // S_r
    WaveParams params;
    TimeGrid grid;
    Vector a1;  // reduced initial states
    Vector a2;
};

//
// Galerkin system on span{phi_1..phi_r}; the starting values are the
// L2 projections of the FE starting values u1, u2.
//
inline RomSystem build_rom(const PodBasis& basis, std::size_t r, const FemSpace& space, const WaveParams& params,
                           const TimeGrid& grid, std::span<const double> u1, std::span<const double> u2)
{
    params.validate();
    if (r < 1 || r > basis.rank())
        throw std::invalid_argument("build_rom: r = " + std::to_string(r) + " outside [1, " +
                                    std::to_string(basis.rank()) + "]");
    detail::require(basis.n_dof() == space.n_dof(), "build_rom: basis does not match the FE space");
    detail::require(u1.size() == space.n_dof() && u2.size() == space.n_dof(),
                    "build_rom: initial states do not match the FE space");

    const std::size_t m = space.n_dof();
    RomSystem sys{r, space, DenseMatrix(r, m), DenseMatrix(r, r), params, grid, Vector(r), Vector(r)};
    DenseMatrix m_phi(r, m);
    DenseMatrix a_phi(r, m);
    for (std::size_t k = 0; k < r; ++k) {
        std::copy(basis.mode(k).begin(), basis.mode(k).end(), sys.modes.row(k).begin());
        const Vector mk = space.mass().apply(basis.mode(k));
        const Vector ak = space.stiffness().apply(basis.mode(k));
        std::copy(mk.begin(), mk.end(), m_phi.row(k).begin());
        std::copy(ak.begin(), ak.end(), a_phi.row(k).begin());
    }

    double mass_defect = 0.0;
    double asym = 0.0;
    double s_max = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const double mij = dot(m_phi.row(i), sys.modes.row(j));
            mass_defect = std::max(mass_defect, std::abs(mij - (i == j ? 1.0 : 0.0)));
            sys.stiffness(i, j) = dot(a_phi.row(i), sys.modes.row(j));
            s_max = std::max(s_max, std::abs(sys.stiffness(i, j)));
        }
    if (mass_defect > 1e-10)
        throw NumericalError("build_rom: modes are not M-orthonormal (defect " + std::to_string(mass_defect) + ")");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            asym = std::max(asym, std::abs(sys.stiffness(i, j) - sys.stiffness(j, i)));
            sys.stiffness(i, j) = sys.stiffness(j, i) = 0.5 * (sys.stiffness(i, j) + sys.stiffness(j, i));
        }
    if (asym > 1e-12 * std::max(1.0, s_max))
        throw NumericalError("build_rom: reduced stiffness is not symmetric");

    sys.a1 = m_phi.apply(u1);
    sys.a2 = m_phi.apply(u2);
    return sys;
}

// reduced coefficients a^n, one row per time level
inline DenseMatrix integrate_rom(const RomSystem& sys)
{
    const std::size_t r = sys.r;
    const std::size_t n = sys.grid.size();
    const double dt = sys.grid.dt();
    const double c2 = sys.params.c * sys.params.c;
    const double D = sys.params.D;
    const double G = sys.params.G;

    const double lhs_i = 1.0 / (dt * dt) + D / (2.0 * dt);
    const double lhs_s = c2 / 4.0 + G / (2.0 * dt);
    const double cur_i = 2.0 / (dt * dt);
    const double cur_s = -c2 / 2.0;
    const double prev_i = -1.0 / (dt * dt) + D / (2.0 * dt);
    const double prev_s = -c2 / 4.0 + G / (2.0 * dt);

    DenseMatrix lhs(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            lhs(i, j) = lhs_s * sys.stiffness(i, j) + (i == j ? lhs_i : 0.0);
    const DenseCholesky chol(lhs);

    DenseMatrix a(n, r);
    std::copy(sys.a1.begin(), sys.a1.end(), a.row(0).begin());
    std::copy(sys.a2.begin(), sys.a2.end(), a.row(1).begin());
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const auto prev = a.row(j - 1);
        const auto curr = a.row(j);
        const Vector s_prev = sys.stiffness.apply(prev);
        const Vector s_curr = sys.stiffness.apply(curr);
        auto next = a.row(j + 1);
        for (std::size_t i = 0; i < r; ++i)
            next[i] = cur_i * curr[i] + cur_s * s_curr[i] + prev_i * prev[i] + prev_s * s_prev[i];
        chol.solve_in_place(next);
    }
    return a;
}

// reconstructed full-order approximation u_r^n = sum_k a_k^n phi_k
inline Trajectory solve_rom(const RomSystem& sys)
{
    const DenseMatrix a = integrate_rom(sys);
    Trajectory out(sys.space, sys.grid);
    for (std::size_t j = 0; j < a.rows(); ++j) {
        const Vector u = sys.modes.apply_transpose(a.row(j));
        std::copy(u.begin(), u.end(), out.state(j).begin());
    }
    return out;
}

//
// Errors e^n = u_h^n - u_r^n split as e = eta - phi with eta = u_h - R_r u_h
// and phi = u_r - R_r u_h (R_r the Ritz projection). Squared norms unless
// the name says otherwise. The ratios are the observed constants in the
// energy and pointwise ROM error bounds; NaN when the denominator vanishes.
//
struct RomErrorReport {
    std::size_t r = 0;
    double max_pointwise_l2 = 0.0;  // max_n ||e^n||^2
    double max_l2 = 0.0;            // max_n ||e^n||
    double max_energy = 0.0;        // max over levels 2..N of E(e^n)
    double final_time_l2 = 0.0;     // ||e^N||
    double max_eta_l2 = 0.0;        // max_n ||eta^n||
    double max_phi_l2 = 0.0;        // max_n ||phi^n||
    double split_residual = 0.0;    // max_n max_i |e - (eta - phi)|
    double phi1_l2_sq = 0.0;        // ||phi^1||^2
    double phi2_energy = 0.0;       // E(phi^2)
    double tail_l2 = 0.0;           // sum_{k>r} lambda_k ||phi_k - R_r phi_k||^2_{L2}
    double tail_h10 = 0.0;          // same in H10
    double ratio_energy = std::numeric_limits<double>::quiet_NaN();
    double ratio_pointwise = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double ratio_denominator_floor = 1e-14;

inline RomErrorReport error_report(const Trajectory& fe, const Trajectory& rom, const PodBasis& basis, std::size_t r,
                                   const WaveParams& params)
{
    if (r < 1 || r > basis.rank())
        throw std::invalid_argument("error_report: r = " + std::to_string(r) + " outside [1, " +
                                    std::to_string(basis.rank()) + "]");
    detail::require(fe.size() == rom.size() && fe.size() >= 2, "error_report: trajectories differ in length");
    detail::require(fe.space.n_dof() == rom.space.n_dof(), "error_report: trajectories differ in space");

    const FemSpace& space = fe.space;
    const double dt = fe.grid.dt();
    const ModalProjector ritz(basis, r, space, Projector::Ritz);

    RomErrorReport rep;
    rep.r = r;
    Vector e_prev;
    Vector phi_prev;
    for (std::size_t n = 0; n < fe.size(); ++n) {
        const auto uh = fe.state(n);
        const auto ur = rom.state(n);
        const Vector ruh = ritz.apply(uh);
        const Vector eta = subtract(uh, ruh);
        const Vector phi = subtract(ur, ruh);
        const Vector e = subtract(uh, ur);
        for (std::size_t i = 0; i < e.size(); ++i)
            rep.split_residual = std::max(rep.split_residual, std::abs(e[i] - (eta[i] - phi[i])));

        const double e_sq = space.l2_norm_sq(e);
        rep.max_pointwise_l2 = std::max(rep.max_pointwise_l2, e_sq);
        rep.max_eta_l2 = std::max(rep.max_eta_l2, std::sqrt(space.l2_norm_sq(eta)));
        rep.max_phi_l2 = std::max(rep.max_phi_l2, std::sqrt(space.l2_norm_sq(phi)));
        if (n == 0)
            rep.phi1_l2_sq = space.l2_norm_sq(phi);
        if (n >= 1)
            rep.max_energy = std::max(rep.max_energy, energy(space, params.c, dt, e_prev, e));
        if (n == 1)
            rep.phi2_energy = energy(space, params.c, dt, phi_prev, phi);
        if (n + 1 == fe.size())
            rep.final_time_l2 = std::sqrt(e_sq);
        e_prev = e;
        phi_prev = phi;
    }
    rep.max_l2 = std::sqrt(rep.max_pointwise_l2);

    for (std::size_t k = r; k < basis.rank(); ++k) {
        const Vector d = ritz.residual(basis.mode(k));
        rep.tail_l2 += basis.eigenvalues[k] * space.l2_norm_sq(d);
        rep.tail_h10 += basis.eigenvalues[k] * space.h10_norm_sq(d);
    }

    const double den_energy = rep.phi2_energy + rep.tail_l2 + rep.tail_h10;
    const double den_pointwise = rep.phi1_l2_sq + rep.phi2_energy + rep.tail_l2;
    if (den_energy >= ratio_denominator_floor)
        rep.ratio_energy = rep.max_energy / den_energy;
    if (den_pointwise >= ratio_denominator_floor)
        rep.ratio_pointwise = rep.max_pointwise_l2 / den_pointwise;
    return rep;
}

}  // namespace podwave

#endif  // PODWAVE_ROM_HPP
