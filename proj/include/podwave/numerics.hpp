#ifndef PODWAVE_NUMERICS_HPP
#define PODWAVE_NUMERICS_HPP
//
// Small dense and tridiagonal linear-algebra kernels used by the FE solver,
// the POD eigenproblem and the reduced-order model.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace podwave {

using Vector = std::vector<double>;

// Raised when a factorization or iteration breaks down.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const char* what)
{
    if (!cond)
        throw std::invalid_argument(what);
}

}  // namespace detail

//
// vector helpers
//

inline double dot(std::span<const double> a, std::span<const double> b)
{
    detail::require(a.size() == b.size(), "dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm_inf(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a)
        m = std::max(m, std::abs(v));
    return m;
}

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    detail::require(x.size() == y.size(), "axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

inline Vector subtract(std::span<const double> a, std::span<const double> b)
{
    detail::require(a.size() == b.size(), "subtract: size mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

inline Vector scaled(double alpha, std::span<const double> a)
{
    Vector out(a.begin(), a.end());
    for (double& v : out)
        v *= alpha;
    return out;
}

//////////////////////////////////////////////////////////////////////
//
// TridiagonalMatrix
//
//////////////////////////////////////////////////////////////////////

//
// Square tridiagonal matrix stored by diagonals: sub[i] = A(i+1, i),
// diag[i] = A(i, i), sup[i] = A(i, i+1).
//
struct TridiagonalMatrix {
    Vector sub;
    Vector diag;
    Vector sup;

    TridiagonalMatrix() = default;

    TridiagonalMatrix(Vector sub_, Vector diag_, Vector sup_)
        : sub(std::move(sub_)), diag(std::move(diag_)), sup(std::move(sup_))
    {
        detail::require(!diag.empty(), "TridiagonalMatrix: empty diagonal");
        detail::require(sub.size() + 1 == diag.size() && sup.size() + 1 == diag.size(),
                        "TridiagonalMatrix: inconsistent diagonal lengths");
    }

    // constant-coefficient symmetric Toeplitz matrix of order m
    static TridiagonalMatrix toeplitz(std::size_t m, double diag_value, double off_value)
    {
        detail::require(m >= 1, "TridiagonalMatrix: order must be positive");
        return {Vector(m - 1, off_value), Vector(m, diag_value), Vector(m - 1, off_value)};
    }

    std::size_t size() const { return diag.size(); }

    double max_abs() const
    {
        return std::max({podwave::norm_inf(sub), podwave::norm_inf(diag), podwave::norm_inf(sup)});
    }

    // maximum absolute row sum
    double norm_inf() const
    {
        const std::size_t m = size();
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = std::abs(diag[i]);
            if (i > 0)
                s += std::abs(sub[i - 1]);
            if (i + 1 < m)
                s += std::abs(sup[i]);
            best = std::max(best, s);
        }
        return best;
    }

    Vector apply(std::span<const double> x) const
    {
        const std::size_t m = size();
        detail::require(x.size() == m, "TridiagonalMatrix::apply: dimension mismatch");
        Vector y(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = diag[i] * x[i];
            if (i > 0)
                s += sub[i - 1] * x[i - 1];
            if (i + 1 < m)
                s += sup[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    // x^T A y
    double bilinear(std::span<const double> x, std::span<const double> y) const
    {
        const std::size_t m = size();
        detail::require(x.size() == m && y.size() == m, "TridiagonalMatrix::bilinear: dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double row = diag[i] * y[i];
            if (i > 0)
                row += sub[i - 1] * y[i - 1];
            if (i + 1 < m)
                row += sup[i] * y[i + 1];
            s += x[i] * row;
        }
        return s;
    }

    // a*this + b*other
    TridiagonalMatrix combine(double a, const TridiagonalMatrix& other, double b) const
    {
        detail::require(size() == other.size(), "TridiagonalMatrix::combine: dimension mismatch");
        TridiagonalMatrix out = *this;
        for (std::size_t i = 0; i < out.diag.size(); ++i)
            out.diag[i] = a * diag[i] + b * other.diag[i];
        for (std::size_t i = 0; i < out.sub.size(); ++i) {
            out.sub[i] = a * sub[i] + b * other.sub[i];
            out.sup[i] = a * sup[i] + b * other.sup[i];
        }
        return out;
    }
};

//
// Thomas-algorithm LU factorization without pivoting. Factor once, solve
// many right-hand sides.
//
class TridiagonalFactor {
public:
    explicit TridiagonalFactor(const TridiagonalMatrix& a)
        : sub_(a.sub), upper_(a.size() > 1 ? a.size() - 1 : 0), pivot_(a.size())
    {
        const std::size_t m = a.size();
        detail::require(m >= 1, "TridiagonalFactor: empty matrix");
        pivot_[0] = a.diag[0];
        check_pivot(pivot_[0], 0);
        for (std::size_t i = 1; i < m; ++i) {
            upper_[i - 1] = a.sup[i - 1] / pivot_[i - 1];
            pivot_[i] = a.diag[i] - a.sub[i - 1] * upper_[i - 1];
            check_pivot(pivot_[i], i);
        }
    }

    std::size_t size() const { return pivot_.size(); }

    Vector solve(std::span<const double> b) const
    {
        Vector x(b.begin(), b.end());
        solve_in_place(x);
        return x;
    }

    void solve_in_place(std::span<double> x) const
    {
        const std::size_t m = size();
        detail::require(x.size() == m, "TridiagonalFactor::solve: dimension mismatch");
        x[0] /= pivot_[0];
        for (std::size_t i = 1; i < m; ++i)
            x[i] = (x[i] - sub_[i - 1] * x[i - 1]) / pivot_[i];
        for (std::size_t i = m - 1; i-- > 0;)
            x[i] -= upper_[i] * x[i + 1];
    }

private:
    static void check_pivot(double p, std::size_t i)
    {
        if (p == 0.0 || !std::isfinite(p))
            throw NumericalError("tridiagonal solve: zero pivot at row " + std::to_string(i));
    }

    Vector sub_;
    Vector upper_;
    Vector pivot_;
};

inline Vector solve_tridiagonal(const TridiagonalMatrix& a, std::span<const double> b)
{
    detail::require(a.size() == b.size(), "solve_tridiagonal: dimension mismatch");
    return TridiagonalFactor(a).solve(b);
}

//
// Lower bidiagonal Cholesky factor L of an SPD tridiagonal matrix, A = L L^T.
// diag[i] = L(i,i), sub[i] = L(i+1,i).
//
struct BidiagonalFactor {
    Vector diag;
    Vector sub;

    std::size_t size() const { return diag.size(); }

    // y = L^T x
    Vector apply_transpose(std::span<const double> x) const
    {
        const std::size_t m = size();
        detail::require(x.size() == m, "BidiagonalFactor: dimension mismatch");
        Vector y(m);
        for (std::size_t i = 0; i < m; ++i)
            y[i] = diag[i] * x[i] + (i + 1 < m ? sub[i] * x[i + 1] : 0.0);
        return y;
    }

    // y = L x
    Vector apply(std::span<const double> x) const
    {
        const std::size_t m = size();
        detail::require(x.size() == m, "BidiagonalFactor: dimension mismatch");
        Vector y(m);
        for (std::size_t i = 0; i < m; ++i)
            y[i] = diag[i] * x[i] + (i > 0 ? sub[i - 1] * x[i - 1] : 0.0);
        return y;
    }

    // solve L^T y = x in place (back substitution)
    void solve_transpose_in_place(std::span<double> x) const
    {
        const std::size_t m = size();
        detail::require(x.size() == m, "BidiagonalFactor: dimension mismatch");
        x[m - 1] /= diag[m - 1];
        for (std::size_t i = m - 1; i-- > 0;)
            x[i] = (x[i] - sub[i] * x[i + 1]) / diag[i];
    }
};

inline BidiagonalFactor cholesky_tridiagonal(const TridiagonalMatrix& a)
{
    const std::size_t m = a.size();
    detail::require(m >= 1, "cholesky_tridiagonal: empty matrix");
    BidiagonalFactor l{Vector(m), Vector(m - 1)};
    double d = a.diag[0];
    for (std::size_t i = 0; i < m; ++i) {
        if (i > 0) {
            l.sub[i - 1] = a.sub[i - 1] / l.diag[i - 1];
            d = a.diag[i] - l.sub[i - 1] * l.sub[i - 1];
        }
        if (!(d > 0.0))
            throw NumericalError("cholesky_tridiagonal: matrix is not positive definite (row " +
                                 std::to_string(i) + ")");
        l.diag[i] = std::sqrt(d);
    }
    return l;
}

//////////////////////////////////////////////////////////////////////
//
// DenseMatrix
//
//////////////////////////////////////////////////////////////////////

class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value)
    {}

    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
        : rows_(rows), cols_(cols), data_(std::move(entries))
    {
        detail::require(data_.size() == rows * cols, "DenseMatrix: entries length != rows*cols");
    }

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Vector column(std::size_t j) const
    {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }

    void set_column(std::size_t j, std::span<const double> values)
    {
        detail::require(values.size() == rows_, "DenseMatrix::set_column: size mismatch");
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = values[i];
    }

    const Vector& entries() const { return data_; }
    Vector& entries() { return data_; }

    DenseMatrix transpose() const
    {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    // leading columns [0, n)
    DenseMatrix leading_columns(std::size_t n) const
    {
        detail::require(n <= cols_, "DenseMatrix::leading_columns: too many columns");
        DenseMatrix out(rows_, n);
        for (std::size_t i = 0; i < rows_; ++i)
            std::copy_n(data_.begin() + i * cols_, n, out.data_.begin() + i * n);
        return out;
    }

    Vector apply(std::span<const double> x) const
    {
        detail::require(x.size() == cols_, "DenseMatrix::apply: dimension mismatch");
        Vector y(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            y[i] = dot(row(i), x);
        return y;
    }

    Vector apply_transpose(std::span<const double> x) const
    {
        detail::require(x.size() == rows_, "DenseMatrix::apply_transpose: dimension mismatch");
        Vector y(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            axpy(x[i], row(i), y);
        return y;
    }

    double max_abs() const { return norm_inf(data_); }

    double frobenius() const { return std::sqrt(dot(data_, data_)); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b)
{
    detail::require(a.cols() == b.rows(), "multiply: dimension mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik != 0.0)
                axpy(aik, b.row(k), c.row(i));
        }
    return c;
}

// A^T B
inline DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b)
{
    detail::require(a.rows() == b.rows(), "multiply_transposed: dimension mismatch");
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto ak = a.row(k);
        auto bk = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i)
            if (ak[i] != 0.0)
                axpy(ak[i], bk, c.row(i));
    }
    return c;
}

// largest |A(i,j) - B(i,j)|
inline double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b)
{
    detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_difference: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

//
// Dense Cholesky A = L L^T for small SPD systems; factor once, solve many.
//
class DenseCholesky {
public:
    explicit DenseCholesky(const DenseMatrix& a) : l_(a.rows(), a.cols())
    {
        detail::require(a.rows() == a.cols(), "DenseCholesky: matrix not square");
        const std::size_t n = a.rows();
        for (std::size_t j = 0; j < n; ++j) {
            double d = a(j, j);
            for (std::size_t k = 0; k < j; ++k)
                d -= l_(j, k) * l_(j, k);
            if (!(d > 0.0))
                throw NumericalError("DenseCholesky: matrix is not positive definite (pivot " +
                                     std::to_string(j) + ")");
            l_(j, j) = std::sqrt(d);
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k)
                    s -= l_(i, k) * l_(j, k);
                l_(i, j) = s / l_(j, j);
            }
        }
    }

    std::size_t size() const { return l_.rows(); }

    void solve_in_place(std::span<double> x) const
    {
        const std::size_t n = size();
        detail::require(x.size() == n, "DenseCholesky::solve: dimension mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];
            for (std::size_t k = 0; k < i; ++k)
                s -= l_(i, k) * x[k];
            x[i] = s / l_(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x[i];
            for (std::size_t k = i + 1; k < n; ++k)
                s -= l_(k, i) * x[k];
            x[i] = s / l_(i, i);
        }
    }

    Vector solve(std::span<const double> b) const
    {
        Vector x(b.begin(), b.end());
        solve_in_place(x);
        return x;
    }

    const DenseMatrix& factor() const { return l_; }

private:
    DenseMatrix l_;
};

inline DenseMatrix solve_dense_spd(const DenseMatrix& a, const DenseMatrix& b)
{
    detail::require(a.rows() == b.rows(), "solve_dense_spd: dimension mismatch");
    const DenseCholesky chol(a);
    DenseMatrix x(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        x.set_column(j, chol.solve(b.column(j)));
    return x;
}

//////////////////////////////////////////////////////////////////////
//
// Symmetric eigensolver (cyclic Jacobi)
//
//////////////////////////////////////////////////////////////////////

struct SymEigResult {
    Vector eigenvalues;        // descending
    DenseMatrix eigenvectors;  // column k belongs to eigenvalues[k]
};

struct JacobiOptions {
    double relative_tolerance = 1e-14;  // stop when off(A) <= tol * ||A||_F
    int max_sweeps = 100;
};

//
// Eigen-decomposition of a symmetric matrix. The input is symmetrized as
// (A + A^T)/2 before iterating.
//
inline SymEigResult sym_eig(const DenseMatrix& input, const JacobiOptions& opts = {})
{
    detail::require(input.rows() == input.cols(), "sym_eig: matrix not square");
    const std::size_t n = input.rows();
    detail::require(n >= 1, "sym_eig: empty matrix");

    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (input(i, j) + input(j, i));

    // rows of vt are the eigenvectors (kept transposed for contiguous updates)
    DenseMatrix vt = DenseMatrix::identity(n);

    const double scale = a.frobenius();
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    if (scale > 0.0) {
        const double target = opts.relative_tolerance * scale;
        int sweep = 0;
        while (off_norm() > target) {
            if (++sweep > opts.max_sweeps)
                throw NumericalError("sym_eig: Jacobi iteration did not converge in " +
                                     std::to_string(opts.max_sweeps) + " sweeps");
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = a(p, q);
                    if (apq == 0.0)
                        continue;
                    const double app = a(p, p);
                    const double aqq = a(q, q);
                    // negligible relative to both diagonal entries
                    if (std::abs(apq) < 1e-18 * std::sqrt(std::abs(app * aqq))) {
                        a(p, q) = a(q, p) = 0.0;
                        continue;
                    }
                    const double theta = (aqq - app) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;

                    auto rp = a.row(p);
                    auto rq = a.row(q);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double akp = rp[k];
                        const double akq = rq[k];
                        rp[k] = c * akp - s * akq;
                        rq[k] = s * akp + c * akq;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        a(k, p) = rp[k];
                        a(k, q) = rq[k];
                    }
                    a(p, p) = app - t * apq;
                    a(q, q) = aqq + t * apq;
                    a(p, q) = a(q, p) = 0.0;

                    auto vp = vt.row(p);
                    auto vq = vt.row(q);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double x = vp[k];
                        const double y = vq[k];
                        vp[k] = c * x - s * y;
                        vq[k] = s * x + c * y;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymEigResult out{Vector(n), DenseMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        out.eigenvectors.set_column(k, vt.row(order[k]));
    }
    return out;
}

//////////////////////////////////////////////////////////////////////
//
// Left singular pairs of a wide matrix
//
//////////////////////////////////////////////////////////////////////

struct LeftSvdResult {
    Vector singular_values;   // descending
    DenseMatrix left_vectors;  // orthonormal; column k belongs to singular_values[k]
};

//
// B (m x n, m <= n, row-major) = U Sigma W^T. Householder QR with column
// pivoting of B^T gives B = P R^T Q^T; one-sided (Hestenes) Jacobi on the
// columns of R^T then yields R^T V = U' Sigma, so U = P U'. The Gram matrix
// B B^T is never formed, which keeps small singular values accurate to about
// eps * sigma_1, and the pivoting makes R^T strongly graded so the Jacobi
// iteration needs only a few sweeps.
//
inline LeftSvdResult svd_left(const DenseMatrix& b, const JacobiOptions& opts = {})
{
    const std::size_t m = b.rows();
    const std::size_t n = b.cols();
    detail::require(m >= 1 && m <= n, "svd_left: expected a wide matrix (rows <= cols)");

    // pivoted QR of B^T, working on the rows of B (= columns of B^T)
    DenseMatrix a = b;
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    Vector rest(m);
    for (std::size_t i = 0; i < m; ++i)
        rest[i] = dot(a.row(i), a.row(i));
    Vector v(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < m; ++i)
            if (rest[i] > rest[p])
                p = i;
        if (p != k) {
            std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(p).begin());
            std::swap(rest[k], rest[p]);
            std::swap(perm[k], perm[p]);
        }
        auto rk = a.row(k);
        const std::size_t len = n - k;
        double norm_sq = 0.0;
        for (std::size_t l = k; l < n; ++l)
            norm_sq += rk[l] * rk[l];
        if (norm_sq == 0.0)
            break;  // the remaining rows are zero as well
        const double norm = std::sqrt(norm_sq);
        const double alpha = rk[k] >= 0.0 ? -norm : norm;
        std::copy(rk.begin() + static_cast<std::ptrdiff_t>(k), rk.end(), v.begin());
        v[0] -= alpha;
        double vv = 0.0;
        for (std::size_t l = 0; l < len; ++l)
            vv += v[l] * v[l];
        for (std::size_t i = k + 1; i < m; ++i) {
            double* ri = a.row(i).data() + k;
            double s = 0.0;
            for (std::size_t l = 0; l < len; ++l)
                s += v[l] * ri[l];
            const double f = 2.0 * s / vv;
            double tail = 0.0;
            for (std::size_t l = 0; l < len; ++l) {
                ri[l] -= f * v[l];
                if (l > 0)
                    tail += ri[l] * ri[l];
            }
            rest[i] = tail;
        }
        rk[k] = alpha;
        std::fill(rk.begin() + static_cast<std::ptrdiff_t>(k) + 1, rk.end(), 0.0);
    }

    // row k of a holds column k of R in its first k+1 entries; row l of x is
    // column l of R^T, i.e. row l of R
    DenseMatrix x(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l <= k; ++l)
            x(l, k) = a(k, l);

    Vector col_norm(m);
    for (std::size_t i = 0; i < m; ++i)
        col_norm[i] = dot(x.row(i), x.row(i));

    const double tol = std::max(opts.relative_tolerance * 0.1, 1e-16) * static_cast<double>(m);
    bool rotated = m > 1;
    int sweep = 0;
    while (rotated) {
        if (++sweep > opts.max_sweeps)
            throw NumericalError("svd_left: one-sided Jacobi did not converge in " +
                                 std::to_string(opts.max_sweeps) + " sweeps");
        rotated = false;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double alpha = col_norm[p];
                const double beta = col_norm[q];
                if (alpha == 0.0 || beta == 0.0)
                    continue;
                auto xp = x.row(p);
                auto xq = x.row(q);
                const double gamma = dot(xp, xq);
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t l = 0; l < m; ++l) {
                    const double u = xp[l];
                    const double w = xq[l];
                    xp[l] = c * u - s * w;
                    xq[l] = s * u + c * w;
                }
                col_norm[p] = dot(xp, xp);
                col_norm[q] = dot(xq, xq);
            }
        }
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return col_norm[i] > col_norm[j]; });

    LeftSvdResult out{Vector(m), DenseMatrix(m, m)};
    std::size_t next_unit = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = order[k];
        const double sigma = std::sqrt(col_norm[j]);
        out.singular_values[k] = sigma;
        if (sigma > 0.0) {
            const auto xj = x.row(j);
            for (std::size_t i = 0; i < m; ++i)
                out.left_vectors(perm[i], k) = xj[i] / sigma;
            continue;
        }
        // null direction: complete the basis by orthogonalizing unit vectors
        Vector u(m);
        double nu = 0.0;
        while (next_unit < m && nu < 0.5) {
            std::fill(u.begin(), u.end(), 0.0);
            u[next_unit++] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t c = 0; c < k; ++c) {
                    const Vector col = out.left_vectors.column(c);
                    axpy(-dot(col, u), col, u);
                }
            nu = std::sqrt(dot(u, u));
        }
        for (std::size_t i = 0; i < m; ++i)
            out.left_vectors(i, k) = u[i] / nu;
    }
    return out;
}

}  // namespace podwave

#endif  // PODWAVE_NUMERICS_HPP
