#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kgeom/dual.hpp"
#include "kgeom/kernels.hpp"

// Dense linear algebra for the frame/tensor sizes this library works at
// (d <= 2m <= 16). Matrices are row-major and templated on the scalar so
// SPD factorizations also run on dual numbers.

namespace kgeom {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

using Vec = std::vector<double>;

template <class T>
struct SqMat {
    int n = 0;
    std::vector<T> a;

    SqMat() = default;
    explicit SqMat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, T{}) {}

    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static SqMat identity(int dim) {
        SqMat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = T{1.0};
        return m;
    }

    std::vector<T> mul(const std::vector<T>& x) const {
        std::vector<T> y(n, T{});
        for (int i = 0; i < n; ++i) {
            T s{};
            for (int j = 0; j < n; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }
};

using Mat = SqMat<double>;

inline Vec matvec(const Mat& m, const Vec& x) {
    Vec y(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) y[i] = kern::dot(&m.a[static_cast<std::size_t>(i) * m.n], x.data(), m.n);
    return y;
}

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
double max_abs(const Mat& a);

// Cholesky A = L L^T; throws Error on a non-positive pivot.
template <class T>
SqMat<T> cholesky(const SqMat<T>& A) {
    using std::sqrt;
    const int n = A.n;
    SqMat<T> L(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            T s = A(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(value(s) > 0.0))
                    throw Error("cholesky: non-positive pivot at index " + std::to_string(i));
                L(i, i) = sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

template <class T>
std::vector<T> chol_solve(const SqMat<T>& L, const std::vector<T>& b) {
    const int n = L.n;
    std::vector<T> y(b);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) y[i] -= L(i, k) * y[k];
        y[i] = y[i] / L(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) y[i] -= L(k, i) * y[k];
        y[i] = y[i] / L(i, i);
    }
    return y;
}

template <class T>
SqMat<T> spd_inverse(const SqMat<T>& A) {
    const int n = A.n;
    SqMat<T> L = cholesky(A);
    SqMat<T> inv(n);
    std::vector<T> e(n, T{});
    for (int c = 0; c < n; ++c) {
        e.assign(n, T{});
        e[c] = T{1.0};
        auto col = chol_solve(L, e);
        for (int r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
}

// Symmetric positive-definite metric on a frame; validated on construction
// (symmetry residual <= 1e-12, positive definite via Cholesky).
class MetricMatrix {
  public:
    explicit MetricMatrix(Mat g);

    int dim() const { return g_.n; }
    double operator()(int i, int j) const { return g_(i, j); }
    const Mat& mat() const { return g_; }

    // x^T g y
    double inner(const Vec& x, const Vec& y) const { return kern::dot(matvec(g_, y).data(), x.data(), g_.n); }
    double norm(const Vec& x) const;

  private:
    Mat g_;
};

// Pivot tolerance shared by every frame builder.
inline constexpr double kPivotTol = 1e-10;

// Modified Gram-Schmidt with one re-orthogonalization pass, orthonormal
// w.r.t. g. Deterministic in input order; throws naming the first vector
// that falls below the pivot tolerance.
std::vector<Vec> gram_schmidt(const std::vector<Vec>& vectors, const MetricMatrix& g);

// Extends a g-orthonormal set to a full frame by sweeping the standard
// basis through Gram-Schmidt; returns only the new vectors.
std::vector<Vec> orthonormal_complement(const std::vector<Vec>& basis, const MetricMatrix& g);

Vec solve_spd(const MetricMatrix& A, const Vec& b);

// Cyclic Jacobi for symmetric matrices. Eigenvalues ascending; vectors(j, k)
// is component j of eigenvector k.
struct EigenSym {
    Vec values;
    Mat vectors;
};
EigenSym eigen_sym(const Mat& A);

// Dense rank-4 tensor over a d-dimensional space, row-major.
struct Tensor4 {
    int d = 0;
    std::vector<double> a;

    Tensor4() = default;
    explicit Tensor4(int dim) : d(dim), a(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<std::size_t>(i) * d + j) * d + k) * d + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<std::size_t>(i) * d + j) * d + k) * d + l];
    }

    // full contraction with four vectors
    double contract(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
};

double max_abs_diff(const Tensor4& x, const Tensor4& y);

}  // namespace kgeom
