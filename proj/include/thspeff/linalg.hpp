// SPDX-License-Identifier: Apache-2.0
//
// Small dense linear algebra: column-major matrix, symmetric eigensolver
// (Householder tridiagonalization followed by implicit-shift QL) and a
// Cholesky factorization with one residual-correction pass.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace thspeff {

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    const std::vector<double>& data() const noexcept { return data_; }

    DenseMatrix transposed() const
    {
        DenseMatrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t i = 0; i < rows_; ++i)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b)
{
    require(a.cols() == b.rows(), "multiply: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0)
                continue;
            for (std::size_t i = 0; i < a.rows(); ++i)
                c(i, j) += a(i, k) * bkj;
        }
    return c;
}

inline double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b)
{
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_difference: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

struct EigenDecomposition {
    std::vector<double> values; // ascending
    DenseMatrix vectors;        // column j pairs with values[j]
};

namespace detail {

// Householder reduction to tridiagonal form. v is row-major n x n and holds the
// accumulated orthogonal transform on exit; d/e are diagonal/subdiagonal.
inline void tridiagonalize(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e)
{
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
    for (std::size_t j = 0; j < n; ++j)
        d[j] = V(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k)
            scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
                V(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0)
                g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j)
                e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                V(j, i) = f;
                g = e[j] + V(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += V(k, j) * d[k];
                    e[k] += V(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j)
                e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k)
                    V(k, j) -= (f * e[k] + g * d[k]);
                d[j] = V(i - 1, j);
                V(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        V(n - 1, i) = V(i, i);
        V(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k)
                d[k] = V(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k)
                    g += V(k, i + 1) * V(k, j);
                for (std::size_t k = 0; k <= i; ++k)
                    V(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k)
            V(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = V(n - 1, j);
        V(n - 1, j) = 0.0;
    }
    V(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e). Throws after 30 * n iterations.
inline void tridiagonal_ql(std::size_t n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e)
{
    auto V = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };
    for (std::size_t i = 1; i < n; ++i)
        e[i - 1] = e[i];
    e[n - 1] = 0.0;

    const std::size_t max_iterations = 30 * n;
    std::size_t iterations = 0;
    double f = 0.0;
    double tst1 = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1)
                break;
            ++m;
        }
        if (m > l) {
            do {
                if (++iterations > max_iterations)
                    throw NumericalError("symmetric eigensolver: no convergence after "
                                         + std::to_string(max_iterations) + " QL iterations");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0)
                    r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i)
                    d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    for (std::size_t k = 0; k < n; ++k) {
                        h = V(k, ii + 1);
                        V(k, ii + 1) = s * V(k, ii) + c * h;
                        V(k, ii) = c * V(k, ii) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace detail

/// Eigen-decomposition of a symmetric matrix (only the lower triangle is read).
inline EigenDecomposition symmetric_eigen(const DenseMatrix& a)
{
    require(a.rows() == a.cols(), "symmetric_eigen: matrix must be square");
    const std::size_t n = a.rows();
    EigenDecomposition out;
    if (n == 0)
        return out;

    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            v[i * n + j] = v[j * n + i] = a(i, j);
    std::vector<double> d(n), e(n);
    detail::tridiagonalize(n, v, d, e);
    detail::tridiagonal_ql(n, v, d, e);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (std::size_t i = 0; i < n; ++i)
            out.vectors(i, j) = v[i * n + order[j]];
    }
    return out;
}

/// Cholesky factorization A = L Lᵀ of a symmetric positive-definite matrix.
class Cholesky {
public:
    explicit Cholesky(const DenseMatrix& a) : a_(a), l_(a.rows(), a.cols())
    {
        require(a.rows() == a.cols(), "Cholesky: matrix must be square");
        const std::size_t n = a.rows();
        double max_diag = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            max_diag = std::max(max_diag, std::abs(a(i, i)));
        const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

        for (std::size_t j = 0; j < n; ++j) {
            double s = a(j, j);
            for (std::size_t k = 0; k < j; ++k)
                s -= l_(j, k) * l_(j, k);
            if (!(s > floor))
                throw NumericalError("Cholesky: matrix is not numerically positive definite (pivot "
                                     + std::to_string(j) + " = " + std::to_string(s) + ")");
            const double ljj = std::sqrt(s);
            l_(j, j) = ljj;
            min_pivot_ = std::min(min_pivot_, s);
            max_pivot_ = std::max(max_pivot_, s);
            for (std::size_t i = j + 1; i < n; ++i) {
                double t = a(i, j);
                for (std::size_t k = 0; k < j; ++k)
                    t -= l_(i, k) * l_(j, k);
                l_(i, j) = t / ljj;
            }
        }
    }

    std::size_t size() const noexcept { return l_.rows(); }
    const DenseMatrix& factor() const noexcept { return l_; }

    /// Natural log of det(A).
    double log_determinant() const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            s += std::log(l_(i, i));
        return 2.0 * s;
    }

    /// Ratio of the smallest to the largest pivot; a cheap conditioning hint.
    double pivot_ratio() const noexcept { return max_pivot_ > 0 ? min_pivot_ / max_pivot_ : 0.0; }

    /// Solves A X = B with one residual-correction pass (residual in extended precision).
    DenseMatrix solve(const DenseMatrix& b) const
    {
        require(b.rows() == size(), "Cholesky::solve: right-hand side has wrong row count");
        DenseMatrix x = substitute(b);
        DenseMatrix r(b.rows(), b.cols());
        for (std::size_t c = 0; c < b.cols(); ++c)
            for (std::size_t i = 0; i < size(); ++i) {
                long double acc = b(i, c);
                for (std::size_t k = 0; k < size(); ++k)
                    acc -= static_cast<long double>(a_(i, k)) * x(k, c);
                r(i, c) = static_cast<double>(acc);
            }
        const DenseMatrix dx = substitute(r);
        for (std::size_t c = 0; c < b.cols(); ++c)
            for (std::size_t i = 0; i < size(); ++i)
                x(i, c) += dx(i, c);
        return x;
    }

private:
    DenseMatrix substitute(const DenseMatrix& b) const
    {
        const std::size_t n = size();
        DenseMatrix x = b;
        for (std::size_t c = 0; c < b.cols(); ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = x(i, c);
                for (std::size_t k = 0; k < i; ++k)
                    s -= l_(i, k) * x(k, c);
                x(i, c) = s / l_(i, i);
            }
            for (std::size_t i = n; i-- > 0;) {
                double s = x(i, c);
                for (std::size_t k = i + 1; k < n; ++k)
                    s -= l_(k, i) * x(k, c);
                x(i, c) = s / l_(i, i);
            }
        }
        return x;
    }

    DenseMatrix a_;
    DenseMatrix l_;
    double min_pivot_ = std::numeric_limits<double>::infinity();
    double max_pivot_ = 0.0;
};

} // namespace thspeff
