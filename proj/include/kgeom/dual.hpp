#pragma once

#include <cmath>
#include <stdexcept>

// Forward-mode dual numbers. Nesting Dual<Dual<double>> yields exact second
// (and mixed) derivatives; every geometric quantity in the library that
// needs derivatives of closed-form data is templated on the scalar so the
// same code path runs on double, Dual<double> and Dual<Dual<double>>.

namespace kgeom {

template <class T>
struct Dual {
    T v{};  // value
    T d{};  // derivative along the seeded direction

    Dual() = default;
    Dual(double value) : v(value), d() {}  // NOLINT: implicit from constants
    Dual(T value, T deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) {
        v += o.v;
        d += o.d;
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        d -= o.d;
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        d = d * o.v + v * o.d;
        v = v * o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        d = (d * o.v - v * o.d) / (o.v * o.v);
        v = v / o.v;
        return *this;
    }
};

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }

template <class T> Dual<T> operator+(Dual<T> a, double b) { return a += Dual<T>(b); }
template <class T> Dual<T> operator-(Dual<T> a, double b) { return a -= Dual<T>(b); }
template <class T> Dual<T> operator*(Dual<T> a, double b) { return a *= Dual<T>(b); }
template <class T> Dual<T> operator/(Dual<T> a, double b) { return a /= Dual<T>(b); }
template <class T> Dual<T> operator+(double a, Dual<T> b) { return Dual<T>(a) += b; }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) -= b; }
template <class T> Dual<T> operator*(double a, Dual<T> b) { return b *= Dual<T>(a); }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) /= b; }

template <class T> Dual<T> operator-(const Dual<T>& a) { return {T() - a.v, T() - a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }

// value(x): strip all dual layers.
inline double value(double x) { return x; }
template <class T> double value(const Dual<T>& x) { return value(x.v); }

using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;

template <class T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), cos(a.v) * a.d}; }
template <class T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), T() - sin(a.v) * a.d}; }
template <class T> Dual<T> tan(const Dual<T>& a) {
    T t = tan(a.v);
    return {t, (1.0 + t * t) * a.d};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
    T e = exp(a.v);
    return {e, e * a.d};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
    T r = sqrt(a.v);
    return {r, a.d / (2.0 * r)};
}
template <class T> Dual<T> sinh(const Dual<T>& a) { return {sinh(a.v), cosh(a.v) * a.d}; }
template <class T> Dual<T> cosh(const Dual<T>& a) { return {cosh(a.v), sinh(a.v) * a.d}; }

// x^k for integer k, valid for any sign of x.
inline double powi(double x, long k) {
    if (k < 0) return 1.0 / powi(x, -k);
    double r = 1.0, b = x;
    for (; k; k >>= 1) {
        if (k & 1) r *= b;
        b *= b;
    }
    return r;
}
template <class T> Dual<T> powi(const Dual<T>& x, long k) {
    if (k == 0) return Dual<T>(1.0);
    if (k < 0) return 1.0 / powi(x, -k);
    Dual<T> r(1.0), b = x;
    for (; k; k >>= 1) {
        if (k & 1) r *= b;
        b *= b;
    }
    return r;
}

using D1 = Dual<double>;
using D2 = Dual<Dual<double>>;

// Seeds for single-variable differentiation.
inline D1 seed1(double x) { return {x, 1.0}; }
// Nested seed: f(seed2(x)).d.d is d^2f/dx^2.
inline D2 seed2(double x) { return {D1{x, 1.0}, D1{1.0, 0.0}}; }

}  // namespace kgeom
