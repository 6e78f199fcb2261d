#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the linear-algebra and tensor layers.
// Each kernel exists as a plain scalar reference implementation and, on
// x86-64, an AVX2 variant. The variant set is chosen once at startup;
// KGEOM_KERNEL=scalar (or =avx2) in the environment overrides the choice.
// The SIMD variants avoid FMA contraction so results stay comparable with
// the scalar path (reductions may still differ by reassociation roundoff;
// the equivalence tests pin the bound).

namespace kgeom::kern {

struct Ops {
    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i x[i]^2
    double (*sum_sq)(const double* x, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // max_i |x[i] - y[i]|
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
    // max_i |x[i]|
    double (*max_abs)(const double* x, std::size_t n);
};

const Ops& scalar_ops();
const Ops& active();
const char* active_name();

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline double sum_sq(const double* x, std::size_t n) { return active().sum_sq(x, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline double max_abs_diff(const double* x, const double* y, std::size_t n) {
    return active().max_abs_diff(x, y, n);
}
inline double max_abs(const double* x, std::size_t n) { return active().max_abs(x, n); }

namespace detail {
// Null when the build or the machine lacks AVX2.
const Ops* avx2_ops();
}  // namespace detail

}  // namespace kgeom::kern
