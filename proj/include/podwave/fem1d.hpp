#ifndef PODWAVE_FEM1D_HPP
#define PODWAVE_FEM1D_HPP
//
// Piecewise-linear finite elements on a uniform mesh of (0,1) with zero
// Dirichlet data. Boundary nodes are eliminated, so every vector holds the
// values at the n_elements - 1 interior nodes.
//

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

#include "podwave/numerics.hpp"

namespace podwave {

using ScalarFunction = std::function<double(double)>;

// 5-point Gauss-Legendre rule on [-1, 1]
struct GaussLegendre5 {
    static constexpr std::array<double, 5> nodes{
        -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
        0.5384693101056830910363144, 0.9061798459386639927976269};
    static constexpr std::array<double, 5> weights{
        0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
        0.4786286704993664680412915, 0.2369268850561890875142640};
};

// composite 5-point Gauss quadrature of f on [a, b]
inline double integrate(const ScalarFunction& f, double a, double b, std::size_t panels)
{
    detail::require(panels >= 1, "integrate: need at least one panel");
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * width;
        double s = 0.0;
        for (std::size_t q = 0; q < 5; ++q)
            s += GaussLegendre5::weights[q] * f(mid + 0.5 * width * GaussLegendre5::nodes[q]);
        total += 0.5 * width * s;
    }
    return total;
}

class FemSpace {
public:
    explicit FemSpace(std::size_t n_elements) : n_elements_(n_elements)
    {
        if (n_elements < 2)
            throw std::invalid_argument("FemSpace: need at least 2 elements");
        h_ = 1.0 / static_cast<double>(n_elements);
        const std::size_t m = n_elements - 1;
        mass_ = TridiagonalMatrix::toeplitz(m, 2.0 * h_ / 3.0, h_ / 6.0);
        stiffness_ = TridiagonalMatrix::toeplitz(m, 2.0 / h_, -1.0 / h_);
    }

    std::size_t n_elements() const { return n_elements_; }
    std::size_t n_dof() const { return n_elements_ - 1; }
    double h() const { return h_; }

    // coordinate of node i, i = 0 .. n_elements (0 and n_elements on the boundary)
    double node(std::size_t i) const { return static_cast<double>(i) * h_; }

    const TridiagonalMatrix& mass() const { return mass_; }
    const TridiagonalMatrix& stiffness() const { return stiffness_; }

    // u^T M v
    double l2_inner(std::span<const double> u, std::span<const double> v) const
    {
        return mass_.bilinear(u, v);
    }

    // u^T A v
    double h10_inner(std::span<const double> u, std::span<const double> v) const
    {
        return stiffness_.bilinear(u, v);
    }

    double l2_norm_sq(std::span<const double> u) const { return l2_inner(u, u); }
    double h10_norm_sq(std::span<const double> u) const { return h10_inner(u, u); }

    // b_i = (f, phi_i), 5-point Gauss on each of the two supporting elements
    Vector load_vector(const ScalarFunction& f) const
    {
        Vector b(n_dof(), 0.0);
        for (std::size_t e = 0; e < n_elements_; ++e) {
            const double x0 = node(e);
            for (std::size_t q = 0; q < 5; ++q) {
                const double xi = 0.5 * (GaussLegendre5::nodes[q] + 1.0);  // in [0,1]
                const double w = 0.5 * h_ * GaussLegendre5::weights[q];
                const double fx = f(x0 + xi * h_);
                // left node e carries (1 - xi), right node e+1 carries xi
                if (e >= 1)
                    b[e - 1] += w * fx * (1.0 - xi);
                if (e + 1 <= n_dof())
                    b[e] += w * fx * xi;
            }
        }
        return b;
    }

    // b_i = (f', phi_i'), exact for linear elements: only nodal values of f enter
    Vector stiffness_load(const ScalarFunction& f) const
    {
        const std::size_t n = n_elements_;
        Vector nodal(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            nodal[i] = f(node(i));
        Vector b(n_dof());
        for (std::size_t i = 1; i < n; ++i)
            b[i - 1] = (2.0 * nodal[i] - nodal[i - 1] - nodal[i + 1]) / h_;
        return b;
    }

    // L2 projection P_h f
    Vector l2_project(const ScalarFunction& f) const
    {
        return solve_tridiagonal(mass_, load_vector(f));
    }

    // nodal interpolant at the interior nodes
    Vector interpolate(const ScalarFunction& f) const
    {
        Vector v(n_dof());
        for (std::size_t i = 0; i < n_dof(); ++i)
            v[i] = f(node(i + 1));
        return v;
    }

    // value of the FE function with coefficients u at x in [0,1]
    double evaluate(std::span<const double> u, double x) const
    {
        detail::require(u.size() == n_dof(), "FemSpace::evaluate: dimension mismatch");
        if (x <= 0.0 || x >= 1.0)
            return 0.0;
        const double s = x / h_;
        auto e = static_cast<std::size_t>(s);
        if (e >= n_elements_)
            e = n_elements_ - 1;
        const double xi = s - static_cast<double>(e);
        const double left = e >= 1 ? u[e - 1] : 0.0;
        const double right = e + 1 <= n_dof() ? u[e] : 0.0;
        return (1.0 - xi) * left + xi * right;
    }

    // || u_h - f ||_{L2}, with 5-point Gauss per element
    double l2_error(std::span<const double> u, const ScalarFunction& f) const
    {
        detail::require(u.size() == n_dof(), "FemSpace::l2_error: dimension mismatch");
        double total = 0.0;
        for (std::size_t e = 0; e < n_elements_; ++e) {
            const double left = e >= 1 ? u[e - 1] : 0.0;
            const double right = e + 1 <= n_dof() ? u[e] : 0.0;
            for (std::size_t q = 0; q < 5; ++q) {
                const double xi = 0.5 * (GaussLegendre5::nodes[q] + 1.0);
                const double diff = (1.0 - xi) * left + xi * right - f(node(e) + xi * h_);
                total += 0.5 * h_ * GaussLegendre5::weights[q] * diff * diff;
            }
        }
        return std::sqrt(total);
    }

private:
    std::size_t n_elements_;
    double h_ = 0.0;
    TridiagonalMatrix mass_;
    TridiagonalMatrix stiffness_;
};

inline FemSpace assemble(std::size_t n_elements) { return FemSpace(n_elements); }

}  // namespace podwave

#endif  // PODWAVE_FEM1D_HPP
