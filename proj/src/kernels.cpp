#include "kgeom/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace kgeom::kern {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::fabs(x[i] - y[i]);
        if (d > m) m = d;
    }
    return m;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::fabs(x[i]);
        if (d > m) m = d;
    }
    return m;
}

const Ops kScalar = {dot_scalar, sum_sq_scalar, axpy_scalar, max_abs_diff_scalar, max_abs_scalar};

const Ops* select() {
    const char* forced = std::getenv("KGEOM_KERNEL");
    if (forced && std::strcmp(forced, "scalar") == 0) return &kScalar;
    const Ops* simd = detail::avx2_ops();
    if (forced && std::strcmp(forced, "avx2") == 0) return simd ? simd : &kScalar;
    return simd ? simd : &kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops& active() {
    static const Ops* chosen = select();
    return *chosen;
}

const char* active_name() { return &active() == &kScalar ? "scalar" : "avx2"; }

}  // namespace kgeom::kern
