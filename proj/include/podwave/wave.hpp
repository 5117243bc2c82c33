#ifndef PODWAVE_WAVE_HPP
#define PODWAVE_WAVE_HPP
//
// Damped wave equation u_tt - c^2 u_xx + D u_t - G u_txx = 0 on (0,1) with
// zero Dirichlet data: three-level implicit FE time stepping, second-order
// starting values, discrete energy and the separation-of-variables series.
//

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "podwave/difference.hpp"
#include "podwave/fem1d.hpp"
#include "podwave/numerics.hpp"

namespace podwave {

struct WaveParams {
    double c = 1.0;  // wave speed
    double D = 0.0;  // viscous damping
    double G = 0.0;  // Kelvin-Voigt damping

    void validate() const
    {
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("WaveParams: wave speed c must be positive");
        if (!(D >= 0.0) || !(G >= 0.0))
            throw std::invalid_argument("WaveParams: damping coefficients must be non-negative");
    }

    bool damped() const { return D > 0.0 || G > 0.0; }
};

//
// Uniform time grid t_j = (j-1) dt, j = 1..N, dt = T/(N-1). Index 0 in code
// is the first time level.
//
class TimeGrid {
public:
    TimeGrid(double T, std::size_t n_steps) : T_(T), n_(n_steps)
    {
        if (!(T > 0.0))
            throw std::invalid_argument("TimeGrid: final time must be positive");
        if (n_steps < 3)
            throw std::invalid_argument("TimeGrid: need at least 3 time levels");
        dt_ = T / static_cast<double>(n_steps - 1);
    }

    // grid with step dt; T/dt must be an integer to 1e-9 relative
    static TimeGrid from_step(double T, double dt)
    {
        if (!(dt > 0.0) || !(T > 0.0))
            throw std::invalid_argument("TimeGrid: T and dt must be positive");
        const double ratio = T / dt;
        const double steps = std::round(ratio);
        if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
            throw std::invalid_argument("TimeGrid: dt = " + std::to_string(dt) +
                                        " does not divide T = " + std::to_string(T));
        return TimeGrid(T, static_cast<std::size_t>(steps) + 1);
    }

    double T() const { return T_; }
    double dt() const { return dt_; }
    std::size_t size() const { return n_; }
    double time(std::size_t j) const { return static_cast<double>(j) * dt_; }

    // first n levels of this grid
    TimeGrid truncated(std::size_t n) const
    {
        if (n > n_)
            throw std::invalid_argument("TimeGrid::truncated: more levels than available");
        TimeGrid g = *this;
        g.n_ = n;
        g.T_ = static_cast<double>(n - 1) * dt_;
        return g;
    }

private:
    double T_;
    std::size_t n_;
    double dt_;
};

//
// Sequence of FE coefficient vectors on a time grid; row j of states holds
// the vector at t_j.
//
struct Trajectory {
    FemSpace space;
    TimeGrid grid;
    DenseMatrix states;

    Trajectory(FemSpace space_, TimeGrid grid_)
        : space(std::move(space_)), grid(grid_), states(grid.size(), space.n_dof())
    {}

    std::size_t size() const { return states.rows(); }
    std::span<const double> state(std::size_t j) const { return states.row(j); }
    std::span<double> state(std::size_t j) { return states.row(j); }

    // trajectory restricted to the first n time levels
    Trajectory head(std::size_t n) const
    {
        Trajectory out(space, grid.truncated(n));
        for (std::size_t j = 0; j < n; ++j)
            std::copy(state(j).begin(), state(j).end(), out.state(j).begin());
        return out;
    }
};

// u0 = (e^x + x^2 - cos(pi x)) sin(pi x) + (e^{x^2} + x^2 - x) sin(5 pi x)
inline double default_initial_displacement(double x)
{
    using std::numbers::pi;
    return (std::exp(x) + x * x - std::cos(pi * x)) * std::sin(pi * x) +
           (std::exp(x * x) + x * x - x) * std::sin(5.0 * pi * x);
}

inline double zero_function(double) { return 0.0; }

//
// Starting values u^1 = P_h u0 and u^2 = P_h u_2, where
//   u_2 = u0 + dt u00 + dt^2/2 u_tt(0)
// and u_tt(0) is eliminated with the weak form of the equation.
//
inline std::pair<Vector, Vector> initial_states(const FemSpace& space, const TimeGrid& grid,
                                                const WaveParams& params, const ScalarFunction& u0,
                                                const ScalarFunction& u00)
{
    params.validate();
    const double dt = grid.dt();
    const Vector load_u0 = space.load_vector(u0);
    const Vector load_u00 = space.load_vector(u00);
    const Vector stiff_u0 = space.stiffness_load(u0);
    const Vector stiff_u00 = space.stiffness_load(u00);

    Vector rhs(space.n_dof());
    const double half_dt2 = 0.5 * dt * dt;
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = load_u0[i] + dt * load_u00[i] -
                 half_dt2 * (params.c * params.c * stiff_u0[i] + params.G * stiff_u00[i] +
                             params.D * load_u00[i]);

    const TridiagonalFactor mass(space.mass());
    return {mass.solve(load_u0), mass.solve(rhs)};
}

//
// One step of
//   (dd u^n, v) + c^2 (grad uhat^n, grad v) + D (d ubar^n, v) + G (d grad ubar^n, grad v) = 0
// with uhat^n = (u^{n+1} + 2u^n + u^{n-1})/4 and d ubar^n = (u^{n+1} - u^{n-1})/(2dt).
// The system matrix is constant, so it is factored once.
//
class WaveStepper {
public:
    WaveStepper(const FemSpace& space, const WaveParams& params, const TimeGrid& grid)
        : lhs_(make_lhs(space, params, grid.dt())),
          curr_(space.mass().combine(2.0 / sq(grid.dt()), space.stiffness(), -0.5 * sq(params.c))),
          prev_(space.mass().combine(-1.0 / sq(grid.dt()) + params.D / (2.0 * grid.dt()), space.stiffness(),
                                     -0.25 * sq(params.c) + params.G / (2.0 * grid.dt())))
    {}

    Vector step(std::span<const double> prev, std::span<const double> curr) const
    {
        Vector rhs = curr_.apply(curr);
        const Vector p = prev_.apply(prev);
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] += p[i];
        lhs_.solve_in_place(rhs);
        return rhs;
    }

private:
    static double sq(double x) { return x * x; }

    static TridiagonalFactor make_lhs(const FemSpace& space, const WaveParams& params, double dt)
    {
        params.validate();
        return TridiagonalFactor(space.mass().combine(1.0 / sq(dt) + params.D / (2.0 * dt), space.stiffness(),
                                                      0.25 * sq(params.c) + params.G / (2.0 * dt)));
    }

    TridiagonalFactor lhs_;
    TridiagonalMatrix curr_;
    TridiagonalMatrix prev_;
};

inline Vector step(const FemSpace& space, const WaveParams& params, const TimeGrid& grid,
                   std::span<const double> prev, std::span<const double> curr)
{
    return WaveStepper(space, params, grid).step(prev, curr);
}

inline Trajectory solve(const FemSpace& space, const TimeGrid& grid, const WaveParams& params,
                        const ScalarFunction& u0, const ScalarFunction& u00)
{
    Trajectory traj(space, grid);
    auto [u1, u2] = initial_states(space, grid, params, u0, u00);
    std::copy(u1.begin(), u1.end(), traj.state(0).begin());
    std::copy(u2.begin(), u2.end(), traj.state(1).begin());
    const WaveStepper stepper(space, params, grid);
    for (std::size_t n = 1; n + 1 < grid.size(); ++n) {
        const Vector next = stepper.step(traj.state(n - 1), traj.state(n));
        std::copy(next.begin(), next.end(), traj.state(n + 1).begin());
    }
    return traj;
}

//
// E(u^n) = 1/2 |d^- u^n|^2_{L2} + c^2/2 |grad ubar^n|^2_{L2}, from the two
// levels u^{n-1}, u^n.
//
inline double energy(const FemSpace& space, double c, double dt, std::span<const double> prev,
                     std::span<const double> curr)
{
    const Vector velocity = diff::backward(prev, curr, dt);
    const Vector average = diff::backward_average(prev, curr);
    return 0.5 * space.l2_norm_sq(velocity) + 0.5 * c * c * space.h10_norm_sq(average);
}

// energy at level n (0-based, n >= 1)
inline double energy(const Trajectory& traj, double c, std::size_t n)
{
    if (n < 1 || n >= traj.size())
        throw std::out_of_range("energy: level must satisfy 1 <= n < N");
    return energy(traj.space, c, traj.grid.dt(), traj.state(n - 1), traj.state(n));
}

//
// Per-step energy balance at interior level n (0-based, 1 <= n <= N-2):
// rate = (E(u^{n+1}) - E(u^n))/dt and dissipation = -D|d ubar^n|^2 - G|d grad ubar^n|^2.
//
struct EnergyBalance {
    double time;
    double energy;
    double rate;
    double dissipation;
};

inline std::vector<EnergyBalance> energy_balance(const Trajectory& traj, const WaveParams& params)
{
    const double dt = traj.grid.dt();
    std::vector<EnergyBalance> out;
    if (traj.size() < 3)
        return out;
    out.reserve(traj.size() - 2);
    double e_curr = energy(traj, params.c, 1);
    for (std::size_t n = 1; n + 1 < traj.size(); ++n) {
        const double e_next = energy(traj, params.c, n + 1);
        const Vector rate = diff::centered(traj.state(n - 1), traj.state(n + 1), dt);
        const double dissipation =
            -params.D * traj.space.l2_norm_sq(rate) - params.G * traj.space.h10_norm_sq(rate);
        out.push_back({traj.grid.time(n), e_curr, (e_next - e_curr) / dt, dissipation});
        e_curr = e_next;
    }
    return out;
}

//////////////////////////////////////////////////////////////////////
//
// Separation-of-variables series
//
//////////////////////////////////////////////////////////////////////

struct SeriesOptions {
    std::size_t k_max = 200;
    std::size_t panels = 2000;
};

//
// u(x,t) = sum_k e^{-delta_k t/2} (a_k e^{xi_k t} + b_k e^{-xi_k t}) sin(k pi x)
// with delta_k = D + G (k pi)^2 and xi_k = sqrt(delta_k^2/4 - c^2 (k pi)^2).
// For D > 0, G = 0 and D = 0, G > 0 this is the usual pair of series; with
// both zero it is the undamped series.
//
class AnalyticSeriesSolution {
public:
    struct Mode {
        double wavenumber;  // k pi
        double decay;       // delta_k / 2
        std::complex<double> xi;
        std::complex<double> a;
        std::complex<double> b;
        bool critical;  // |xi| below threshold: (a + b t) e^{-decay t}
    };

    AnalyticSeriesSolution(const WaveParams& params, const ScalarFunction& u0, const ScalarFunction& u00,
                           const SeriesOptions& opts = {})
        : params_(params)
    {
        params.validate();
        detail::require(opts.k_max >= 1, "AnalyticSeriesSolution: k_max must be positive");
        using std::numbers::pi;

        // sample both functions once at the composite Gauss points
        const std::size_t n_pts = opts.panels * 5;
        std::vector<double> xs(n_pts), ws(n_pts), f0(n_pts), f1(n_pts);
        const double width = 1.0 / static_cast<double>(opts.panels);
        for (std::size_t p = 0; p < opts.panels; ++p)
            for (std::size_t q = 0; q < 5; ++q) {
                const std::size_t i = p * 5 + q;
                xs[i] = (static_cast<double>(p) + 0.5) * width + 0.5 * width * GaussLegendre5::nodes[q];
                ws[i] = 0.5 * width * GaussLegendre5::weights[q];
                f0[i] = u0(xs[i]);
                f1[i] = u00(xs[i]);
            }

        modes_.reserve(opts.k_max);
        for (std::size_t k = 1; k <= opts.k_max; ++k) {
            const double lam = pi * static_cast<double>(k);
            double disp = 0.0;
            double vel = 0.0;
            for (std::size_t i = 0; i < n_pts; ++i) {
                const double s = std::sin(lam * xs[i]);
                disp += ws[i] * f0[i] * s;
                vel += ws[i] * f1[i] * s;
            }
            disp *= 2.0;
            vel *= 2.0;

            Mode m{};
            m.wavenumber = lam;
            const double delta = params.D + params.G * lam * lam;
            m.decay = 0.5 * delta;
            m.xi = std::sqrt(std::complex<double>(0.25 * delta * delta - params.c * params.c * lam * lam, 0.0));
            m.critical = std::abs(m.xi) < 1e-12;
            if (m.critical) {
                // u_k(t) = (a + b t) e^{-decay t}
                m.a = disp;
                m.b = vel + m.decay * disp;
            } else {
                // a + b = disp, xi (a - b) - decay (a + b) = vel
                const std::complex<double> diff = (vel + m.decay * disp) / m.xi;
                m.a = 0.5 * (disp + diff);
                m.b = 0.5 * (disp - diff);
            }
            modes_.push_back(m);
            sine_coefficients_.push_back(disp);
            velocity_coefficients_.push_back(vel);
        }
    }

    const WaveParams& params() const { return params_; }
    const std::vector<Mode>& modes() const { return modes_; }
    std::size_t k_max() const { return modes_.size(); }

    // 2 int_0^1 u0 sin(k pi x) dx, k = 1..k_max (index k-1)
    const std::vector<double>& sine_coefficients() const { return sine_coefficients_; }
    const std::vector<double>& velocity_coefficients() const { return velocity_coefficients_; }

    // complex time factor of mode k (1-based)
    std::complex<double> modal_amplitude(std::size_t k, double t) const
    {
        const Mode& m = modes_.at(k - 1);
        const double envelope = std::exp(-m.decay * t);
        if (m.critical)
            return envelope * (m.a + m.b * t);
        return envelope * (m.a * std::exp(m.xi * t) + m.b * std::exp(-m.xi * t));
    }

    double operator()(double x, double t) const
    {
        double s = 0.0;
        for (std::size_t k = 1; k <= modes_.size(); ++k)
            s += modal_amplitude(k, t).real() * std::sin(modes_[k - 1].wavenumber * x);
        return s;
    }

    // largest |imag| over the modal time factors at time t
    double imaginary_residue(double t) const
    {
        double m = 0.0;
        for (std::size_t k = 1; k <= modes_.size(); ++k)
            m = std::max(m, std::abs(modal_amplitude(k, t).imag()));
        return m;
    }

    // magnitude of the last quarter of the retained coefficients; a large value
    // means k_max is too small for the data
    double tail_magnitude() const
    {
        double s = 0.0;
        const std::size_t start = modes_.size() - modes_.size() / 4;
        for (std::size_t k = start; k < modes_.size(); ++k)
            s += std::abs(sine_coefficients_[k]) +
                 std::abs(velocity_coefficients_[k]) / (params_.c * modes_[k].wavenumber);
        return s;
    }

    ScalarFunction at_time(double t) const
    {
        return [this, t](double x) { return (*this)(x, t); };
    }

private:
    WaveParams params_;
    std::vector<Mode> modes_;
    std::vector<double> sine_coefficients_;
    std::vector<double> velocity_coefficients_;
};

inline double analytic_eval(const AnalyticSeriesSolution& sol, double x, double t) { return sol(x, t); }

// a mode is oscillatory when xi_k is purely imaginary
inline bool mode_is_oscillatory(const WaveParams& params, std::size_t k)
{
    const double lam = std::numbers::pi * static_cast<double>(k);
    const double delta = params.D + params.G * lam * lam;
    return 0.25 * delta * delta - params.c * params.c * lam * lam < 0.0;
}

}  // namespace podwave

#endif  // PODWAVE_WAVE_HPP
