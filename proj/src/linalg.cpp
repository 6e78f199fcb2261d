#include "kgeom/linalg.hpp"

#include <cmath>

#include "kgeom/dual.hpp"

namespace kgeom {

Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            kern::axpy(aik, &b.a[static_cast<std::size_t>(k) * b.n], &c.a[static_cast<std::size_t>(i) * c.n],
                       static_cast<std::size_t>(c.n));
        }
    return c;
}

Mat transpose(const Mat& a) {
    Mat t(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) t(j, i) = a(i, j);
    return t;
}

double max_abs(const Mat& a) { return kern::max_abs(a.a.data(), a.a.size()); }

MetricMatrix::MetricMatrix(Mat g) : g_(std::move(g)) {
    double asym = 0.0;
    for (int i = 0; i < g_.n; ++i)
        for (int j = i + 1; j < g_.n; ++j) asym = std::max(asym, std::fabs(g_(i, j) - g_(j, i)));
    if (asym > 1e-12) throw Error("metric: symmetry residual " + std::to_string(asym) + " exceeds 1e-12");
    cholesky(g_);  // positive definiteness
}

double MetricMatrix::norm(const Vec& x) const { return std::sqrt(inner(x, x)); }

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vectors, const MetricMatrix& g) {
    std::vector<Vec> out;
    out.reserve(vectors.size());
    for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
        Vec v = vectors[idx];
        // two projection passes
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : out) kern::axpy(-g.inner(v, q), q.data(), v.data(), v.size());
        double nrm = g.norm(v);
        if (nrm < kPivotTol)
            throw Error("gram_schmidt: vector " + std::to_string(idx) + " is dependent (pivot " +
                        std::to_string(nrm) + ")");
        for (double& c : v) c /= nrm;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Vec> orthonormal_complement(const std::vector<Vec>& basis, const MetricMatrix& g) {
    const int d = g.dim();
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            if (std::fabs(g.inner(basis[i], basis[j]) - want) > 1e-8)
                throw Error("orthonormal_complement: input frame is not orthonormal");
        }
    std::vector<Vec> frame = basis;
    std::vector<Vec> extra;
    for (int c = 0; c < d && static_cast<int>(frame.size()) < d; ++c) {
        Vec v(d, 0.0);
        v[c] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : frame) kern::axpy(-g.inner(v, q), q.data(), v.data(), v.size());
        double nrm = g.norm(v);
        if (nrm < kPivotTol) continue;  // candidate already in the span
        for (double& x : v) x /= nrm;
        frame.push_back(v);
        extra.push_back(std::move(v));
    }
    if (static_cast<int>(frame.size()) != d)
        throw Error("orthonormal_complement: could not complete the frame");
    return extra;
}

Vec solve_spd(const MetricMatrix& A, const Vec& b) { return chol_solve(cholesky(A.mat()), b); }

EigenSym eigen_sym(const Mat& A) {
    const int n = A.n;
    Mat a = A;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    // sort ascending, reorder columns
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a(order[j], order[j]) < a(order[i], order[i])) std::swap(order[i], order[j]);
    EigenSym res;
    res.values.resize(n);
    res.vectors = Mat(n);
    for (int k = 0; k < n; ++k) {
        res.values[k] = a(order[k], order[k]);
        for (int r = 0; r < n; ++r) res.vectors(r, k) = v(r, order[k]);
    }
    return res;
}

double Tensor4::contract(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
    // contract the trailing index with w first, then fold the rest
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        if (x[i] == 0.0) continue;
        for (int j = 0; j < d; ++j) {
            if (y[j] == 0.0) continue;
            double sij = 0.0;
            for (int k = 0; k < d; ++k) {
                const double* row = &a[((static_cast<std::size_t>(i) * d + j) * d + k) * d];
                sij += z[k] * kern::dot(row, w.data(), static_cast<std::size_t>(d));
            }
            s += x[i] * y[j] * sij;
        }
    }
    return s;
}

double max_abs_diff(const Tensor4& x, const Tensor4& y) {
    return kern::max_abs_diff(x.a.data(), y.a.data(), x.a.size());
}

}  // namespace kgeom
