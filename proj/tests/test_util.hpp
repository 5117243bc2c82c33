#ifndef PODWAVE_TEST_UTIL_HPP
#define PODWAVE_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "podwave/numerics.hpp"

namespace podwave::testing {

class Random {
public:
    explicit Random(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    Vector vector(std::size_t n)
    {
        Vector v(n);
        for (double& x : v)
            x = uniform();
        return v;
    }

    DenseMatrix matrix(std::size_t rows, std::size_t cols)
    {
        DenseMatrix a(rows, cols);
        for (double& x : a.entries())
            x = uniform();
        return a;
    }

    // diagonally dominant, hence SPD
    TridiagonalMatrix spd_tridiagonal(std::size_t n)
    {
        Vector sub(n - 1), diag(n), sup(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            sub[i] = sup[i] = uniform();
        for (std::size_t i = 0; i < n; ++i)
            diag[i] = 2.5 + uniform(0.0, 1.0);
        return TridiagonalMatrix(sub, diag, sup);
    }

    DenseMatrix spd_dense(std::size_t n)
    {
        const DenseMatrix g = matrix(n, n);
        DenseMatrix a = multiply_transposed(g, g);
        for (std::size_t i = 0; i < n; ++i)
            a(i, i) += static_cast<double>(n);
        return a;
    }

    // Q from Gram-Schmidt on a random square matrix (columns orthonormal)
    DenseMatrix orthogonal(std::size_t n)
    {
        DenseMatrix q = matrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t k = 0; k < j; ++k) {
                    double d = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                        d += q(i, k) * q(i, j);
                    for (std::size_t i = 0; i < n; ++i)
                        q(i, j) -= d * q(i, k);
                }
            double nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                nrm += q(i, j) * q(i, j);
            nrm = std::sqrt(nrm);
            for (std::size_t i = 0; i < n; ++i)
                q(i, j) /= nrm;
        }
        return q;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace podwave::testing

#endif  // PODWAVE_TEST_UTIL_HPP
