#include <gtest/gtest.h>

#include <cmath>

#include "podwave/rom.hpp"
#include "test_util.hpp"

using namespace podwave;

namespace {

Trajectory wave(const WaveParams& p, std::size_t elements = 20, std::size_t levels = 30, double T = 29.0 / 800.0)
{
    return solve(FemSpace(elements), TimeGrid(T, levels), p, default_initial_displacement, zero_function);
}

RomSystem rom_for(const Trajectory& fe, const PodBasis& b, std::size_t r, const WaveParams& p)
{
    return build_rom(b, r, fe.space, p, fe.grid, fe.state(0), fe.state(1));
}

double max_l2(const Trajectory& t)
{
    double m = 0.0;
    for (std::size_t n = 0; n < t.size(); ++n)
        m = std::max(m, std::sqrt(t.space.l2_norm_sq(t.state(n))));
    return m;
}

}  // namespace

TEST(Rom, FullBasisReproducesFe)
{
    for (const WaveParams p : {WaveParams{1.0, 0.1, 0.0}, WaveParams{1.0, 0.0, 0.001}, WaveParams{1.0, 0.0, 0.0}})
        for (PodMethod m : {PodMethod::Standard, PodMethod::DQ1, PodMethod::DDQ}) {
            const Trajectory fe = wave(p);
            const PodBasis b = compute_basis(fe, m);
            const Trajectory rom = solve_rom(rom_for(fe, b, b.rank(), p));
            double err = 0.0;
            for (std::size_t n = 0; n < fe.size(); ++n)
                err = std::max(err, std::sqrt(fe.space.l2_norm_sq(subtract(fe.state(n), rom.state(n)))));
            EXPECT_LE(err, 1e-8 * max_l2(fe)) << to_string(m) << " D=" << p.D << " G=" << p.G;
        }
}

TEST(Rom, ZeroInitialDataStaysZero)
{
    const WaveParams p{1.0, 0.1, 0.0};
    const Trajectory fe = wave(p);
    const PodBasis b = compute_basis(fe, PodMethod::Standard);
    const Vector z(fe.space.n_dof(), 0.0);
    const Trajectory rom = solve_rom(build_rom(b, 3, fe.space, p, fe.grid, z, z));
    EXPECT_EQ(norm_inf(rom.states.entries()), 0.0);
}

TEST(Rom, ReducedOperatorsAndInitialCoefficients)
{
    const WaveParams p{1.0, 0.0, 0.001};
    const Trajectory fe = wave(p);
    const PodBasis b = compute_basis(fe, PodMethod::DDQ);
    const RomSystem sys = rom_for(fe, b, 4, p);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_EQ(sys.stiffness(i, j), sys.stiffness(j, i));
            EXPECT_NEAR(sys.stiffness(i, j), fe.space.h10_inner(b.mode(i), b.mode(j)),
                        1e-12 * std::abs(sys.stiffness(0, 0)) + 1e-12);
        }
        EXPECT_NEAR(sys.a1[i], fe.space.l2_inner(b.mode(i), fe.state(0)), 1e-13);
        EXPECT_NEAR(sys.a2[i], fe.space.l2_inner(b.mode(i), fe.state(1)), 1e-13);
    }
}

TEST(Rom, CoefficientsSatisfyReducedScheme)
{
    const WaveParams p{1.5, 0.2, 0.003};
    const Trajectory fe = wave(p, 30, 41, 0.5);
    const PodBasis b = compute_basis(fe, PodMethod::Standard);
    const RomSystem sys = rom_for(fe, b, 5, p);
    const DenseMatrix a = integrate_rom(sys);
    const double dt = fe.grid.dt();
    double worst = 0.0;
    for (std::size_t n = 1; n + 1 < a.rows(); ++n) {
        Vector res = diff::second(a.row(n - 1), a.row(n), a.row(n + 1), dt);
        const Vector ctr = diff::centered(a.row(n - 1), a.row(n + 1), dt);
        axpy(p.c * p.c, sys.stiffness.apply(diff::centered_average(a.row(n - 1), a.row(n), a.row(n + 1))), res);
        axpy(p.D, ctr, res);
        axpy(p.G, sys.stiffness.apply(ctr), res);
        worst = std::max(worst, norm_inf(res) / std::max(1.0, norm_inf(diff::second(a.row(n - 1), a.row(n), a.row(n + 1), dt))));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Rom, EnergyBalance)
{
    for (const WaveParams p : {WaveParams{1.0, 0.1, 0.0}, WaveParams{1.0, 0.0, 0.001}, WaveParams{1.0, 0.0, 0.0}}) {
        const Trajectory fe = wave(p, 40, 201, 1.0);
        const PodBasis b = compute_basis(fe, PodMethod::DDQ);
        const Trajectory rom = solve_rom(rom_for(fe, b, 6, p));
        const double e2 = energy(rom, p.c, 1);
        double worst = 0.0;
        for (const auto& step : energy_balance(rom, p))
            worst = std::max(worst, std::abs(step.rate - step.dissipation));
        EXPECT_LE(worst / e2, 1e-10) << "D=" << p.D << " G=" << p.G;
        if (!p.damped()) {
            for (std::size_t n = 1; n < rom.size(); ++n)
                EXPECT_NEAR(energy(rom, p.c, n), e2, 1e-10 * e2);
        }
    }
}

TEST(Rom, ErrorReportSplitAndFields)
{
    const WaveParams p{1.0, 0.1, 0.0};
    const Trajectory fe = wave(p, 40, 201, 1.0);
    const PodBasis b = compute_basis(fe, PodMethod::DDQ);
    const Trajectory rom = solve_rom(rom_for(fe, b, 5, p));
    const RomErrorReport rep = error_report(fe, rom, b, 5, p);
    EXPECT_EQ(rep.r, 5u);
    EXPECT_LE(rep.split_residual, 1e-14 * norm_inf(fe.states.entries()));
    EXPECT_NEAR(rep.max_l2 * rep.max_l2, rep.max_pointwise_l2, 1e-15);

    // direct recomputation of the headline numbers
    double max_sq = 0.0, max_e = 0.0;
    for (std::size_t n = 0; n < fe.size(); ++n) {
        const Vector e = subtract(fe.state(n), rom.state(n));
        max_sq = std::max(max_sq, fe.space.l2_norm_sq(e));
        if (n >= 1)
            max_e = std::max(max_e, energy(fe.space, p.c, fe.grid.dt(), subtract(fe.state(n - 1), rom.state(n - 1)), e));
    }
    EXPECT_DOUBLE_EQ(rep.max_pointwise_l2, max_sq);
    EXPECT_DOUBLE_EQ(rep.max_energy, max_e);
    const Vector eN = subtract(fe.state(fe.size() - 1), rom.state(rom.size() - 1));
    EXPECT_DOUBLE_EQ(rep.final_time_l2, std::sqrt(fe.space.l2_norm_sq(eN)));

    EXPECT_TRUE(std::isfinite(rep.ratio_energy));
    EXPECT_GT(rep.ratio_energy, 0.0);
    EXPECT_LE(rep.ratio_energy, 1.0);
    EXPECT_TRUE(std::isfinite(rep.ratio_pointwise));
    EXPECT_GT(rep.ratio_pointwise, 0.0);
    EXPECT_LE(rep.ratio_pointwise, 1.0);
}

TEST(Rom, FullRankReportsNotApplicableRatios)
{
    const WaveParams p{1.0, 0.1, 0.0};
    const Trajectory fe = wave(p);
    const PodBasis b = compute_basis(fe, PodMethod::DDQ);
    const Trajectory rom = solve_rom(rom_for(fe, b, b.rank(), p));
    const RomErrorReport rep = error_report(fe, rom, b, b.rank(), p);
    EXPECT_EQ(rep.tail_l2, 0.0);
    EXPECT_EQ(rep.tail_h10, 0.0);
    EXPECT_TRUE(std::isnan(rep.ratio_energy));
    EXPECT_TRUE(std::isnan(rep.ratio_pointwise));
    EXPECT_LE(rep.max_l2, 1e-8 * max_l2(fe));
}

TEST(Rom, LargerBasisIsMoreAccurate)
{
    const WaveParams p{1.0, 0.0, 0.001};
    const Trajectory fe = wave(p, 60, 401, 2.0);
    const PodBasis b = compute_basis(fe, PodMethod::Standard);
    const double e_small = error_report(fe, solve_rom(rom_for(fe, b, 3, p)), b, 3, p).max_pointwise_l2;
    const double e_large = error_report(fe, solve_rom(rom_for(fe, b, 12, p)), b, 12, p).max_pointwise_l2;
    EXPECT_LE(e_large, e_small);
}

TEST(Rom, RejectsBadInput)
{
    const WaveParams p{1.0, 0.1, 0.0};
    const Trajectory fe = wave(p);
    PodBasis b = compute_basis(fe, PodMethod::Standard);
    EXPECT_THROW(rom_for(fe, b, 0, p), std::invalid_argument);
    EXPECT_THROW(rom_for(fe, b, b.rank() + 1, p), std::invalid_argument);
    const Trajectory rom = solve_rom(rom_for(fe, b, 2, p));
    EXPECT_THROW(error_report(fe, rom, b, b.rank() + 1, p), std::invalid_argument);
    for (double& x : b.modes.entries())
        x *= 2.0;
    EXPECT_THROW(rom_for(fe, b, 2, p), NumericalError);
}
