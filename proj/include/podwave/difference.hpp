#ifndef PODWAVE_DIFFERENCE_HPP
#define PODWAVE_DIFFERENCE_HPP
//
// Time difference quotients and averages of a vector sequence z^1, z^2, ...
// Arguments are passed explicitly as neighbouring members of the sequence.
//

#include <cstddef>
#include <span>

#include "podwave/numerics.hpp"

namespace podwave::diff {

namespace detail {

template <typename F>
Vector combine(std::span<const double> a, std::span<const double> b, F&& f)
{
    podwave::detail::require(a.size() == b.size(), "difference: size mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f(a[i], b[i]);
    return out;
}

template <typename F>
Vector combine(std::span<const double> a, std::span<const double> b, std::span<const double> c, F&& f)
{
    podwave::detail::require(a.size() == b.size() && b.size() == c.size(), "difference: size mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f(a[i], b[i], c[i]);
    return out;
}

}  // namespace detail

// (z^{j+1} - z^j) / dt
inline Vector forward(std::span<const double> zj, std::span<const double> zj1, double dt)
{
    return detail::combine(zj, zj1, [dt](double a, double b) { return (b - a) / dt; });
}

// (z^j - z^{j-1}) / dt
inline Vector backward(std::span<const double> zjm1, std::span<const double> zj, double dt)
{
    return detail::combine(zjm1, zj, [dt](double a, double b) { return (b - a) / dt; });
}

// (z^{j+1} - 2 z^j + z^{j-1}) / dt^2
inline Vector second(std::span<const double> zjm1, std::span<const double> zj, std::span<const double> zj1,
                     double dt)
{
    const double inv = 1.0 / (dt * dt);
    return detail::combine(zjm1, zj, zj1, [inv](double a, double b, double c) { return (c - 2.0 * b + a) * inv; });
}

// (z^j + z^{j-1}) / 2
inline Vector backward_average(std::span<const double> zjm1, std::span<const double> zj)
{
    return detail::combine(zjm1, zj, [](double a, double b) { return 0.5 * (a + b); });
}

// (z^{j+1} + 2 z^j + z^{j-1}) / 4
inline Vector centered_average(std::span<const double> zjm1, std::span<const double> zj,
                               std::span<const double> zj1)
{
    return detail::combine(zjm1, zj, zj1, [](double a, double b, double c) { return 0.25 * (c + 2.0 * b + a); });
}

// (z^{j+1} - z^{j-1}) / (2 dt), the forward difference of the backward average
inline Vector centered(std::span<const double> zjm1, std::span<const double> zj1, double dt)
{
    return detail::combine(zjm1, zj1, [dt](double a, double c) { return (c - a) / (2.0 * dt); });
}

}  // namespace podwave::diff

#endif  // PODWAVE_DIFFERENCE_HPP
