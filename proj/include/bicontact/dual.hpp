#pragma once

/**
 * @file dual.hpp
 * @brief Nested forward-mode dual numbers over three coordinates.
 *
 * A Dual<T> carries a value of type T and three partial derivatives of type
 * T. Nesting Dual<Dual<double>> gives exact second derivatives, and so on.
 * Every evaluator in the library is written once against a generic scalar
 * type and instantiated at the levels listed in Level below.
 *
 * @code
 * auto p = seed(Point<double>{0.0, 0.3, 0.0});   // Point<Dual<double>>
 * auto f = exp(0.5 * p[1] * p[1]) * cos(p[2]);
 * // f.v == value, f.d == exact gradient
 * @endcode
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "bicontact/errors.hpp"

namespace bicontact {

template <class T>
using Vec3 = std::array<T, 3>;

template <class T>
using Point = std::array<T, 3>;

template <class T>
struct Dual {
    T v{};
    Vec3<T> d{};

    Dual() = default;
    Dual(double c) : v(c) {}  // NOLINT: constants promote implicitly
    Dual(const T& value, const Vec3<T>& grad) : v(value), d(grad) {}
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Nesting depth: double is 0, Dual<double> is 1, ...
template <class T>
struct nesting : std::integral_constant<int, 0> {};
template <class T>
struct nesting<Dual<T>> : std::integral_constant<int, 1 + nesting<T>::value> {};
template <class T>
inline constexpr int nesting_v = nesting<T>::value;

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

/// Deepest level a primitive field can be evaluated at. Each derivative taken
/// by a derived field consumes one level.
inline constexpr int max_nesting = 3;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
    return value_of(x.v);
}

/// Lift a point one level: every coordinate gets a fresh unit seed.
template <class T>
Point<Dual<T>> seed(const Point<T>& p) {
    Point<Dual<T>> out;
    for (std::size_t i = 0; i < 3; ++i) {
        out[i].v = p[i];
        out[i].d = Vec3<T>{T(0.0), T(0.0), T(0.0)};
        out[i].d[i] = T(1.0);
    }
    return out;
}

template <class T>
Point<double> values_of(const Point<T>& p) {
    return {value_of(p[0]), value_of(p[1]), value_of(p[2])};
}

// ---------------------------------------------------------------------------
// arithmetic

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.v + b.v, {a.d[0] + b.d[0], a.d[1] + b.d[1], a.d[2] + b.d[2]}};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.v - b.v, {a.d[0] - b.d[0], a.d[1] - b.d[1], a.d[2] - b.d[2]}};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
    return {-a.v, {-a.d[0], -a.d[1], -a.d[2]}};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.v * b.v,
            {a.d[0] * b.v + a.v * b.d[0], a.d[1] * b.v + a.v * b.d[1], a.d[2] * b.v + a.v * b.d[2]}};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    const T inv = T(1.0) / b.v;
    const T q = a.v * inv;
    return {q,
            {(a.d[0] - q * b.d[0]) * inv, (a.d[1] - q * b.d[1]) * inv, (a.d[2] - q * b.d[2]) * inv}};
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double c) {
    return {a.v + c, a.d};
}
template <class T>
Dual<T> operator+(double c, const Dual<T>& a) {
    return {a.v + c, a.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double c) {
    return {a.v - c, a.d};
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& a) {
    return {c - a.v, {-a.d[0], -a.d[1], -a.d[2]}};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double c) {
    return {a.v * c, {a.d[0] * c, a.d[1] * c, a.d[2] * c}};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& a) {
    return a * c;
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double c) {
    return a * (1.0 / c);
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& a) {
    return Dual<T>(c) / a;
}

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) {
    return a = a + b;
}
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) {
    return a = a - b;
}
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) {
    return a = a * b;
}

// ---------------------------------------------------------------------------
// elementary functions
//
// The double overloads forward to <cmath> so that generic code can call the
// unqualified names inside this namespace at every nesting level.

namespace detail {
template <class T, class F, class DF>
Dual<T> chain(const Dual<T>& x, F&& f, DF&& df) {
    const T fx = f(x.v);
    const T dfx = df(x.v);
    return {fx, {dfx * x.d[0], dfx * x.d[1], dfx * x.d[2]}};
}
}  // namespace detail

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double atan(double x) { return std::atan(x); }

inline double log(double x) {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "log of non-positive argument " << x;
        throw DomainError(os.str());
    }
    return std::log(x);
}

/// Relative distance from a pole of tan below which evaluation is refused.
inline constexpr double tan_pole_tolerance = 1e-12;

inline double tan(double x) {
    const double c = std::cos(x);
    if (std::abs(c) < tan_pole_tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "tan evaluated at a pole (argument " << x << ")";
        throw DomainError(os.str());
    }
    return std::sin(x) / c;
}

inline double asin(double x) {
    if (x < -1.0 || x > 1.0) {
        std::ostringstream os;
        os << "asin argument " << x << " outside [-1, 1]";
        throw DomainError(os.str());
    }
    return std::asin(x);
}

inline double ipow(double x, int n) {
    if (n < 0) return 1.0 / ipow(x, -n);
    double r = 1.0;
    double b = x;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
    return detail::chain(x, [](const T& a) { return sin(a); }, [](const T& a) { return cos(a); });
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
    return detail::chain(x, [](const T& a) { return cos(a); }, [](const T& a) { return -sin(a); });
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
    const T t = tan(x.v);
    const T dt = T(1.0) + t * t;
    return {t, {dt * x.d[0], dt * x.d[1], dt * x.d[2]}};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
    const T e = exp(x.v);
    return {e, {e * x.d[0], e * x.d[1], e * x.d[2]}};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
    return detail::chain(x, [](const T& a) { return log(a); }, [](const T& a) { return T(1.0) / a; });
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    const T r = sqrt(x.v);
    const T dr = T(0.5) / r;
    return {r, {dr * x.d[0], dr * x.d[1], dr * x.d[2]}};
}
template <class T>
Dual<T> asin(const Dual<T>& x) {
    return detail::chain(
        x, [](const T& a) { return asin(a); },
        [](const T& a) { return T(1.0) / sqrt(T(1.0) - a * a); });
}
template <class T>
Dual<T> atan(const Dual<T>& x) {
    return detail::chain(
        x, [](const T& a) { return atan(a); }, [](const T& a) { return T(1.0) / (T(1.0) + a * a); });
}
template <class T>
Dual<T> ipow(const Dual<T>& x, int n) {
    if (n == 0) return Dual<T>(1.0);
    const T base = ipow(x.v, n - 1);
    const T fx = base * x.v;
    const T dfx = base * double(n);
    return {fx, {dfx * x.d[0], dfx * x.d[1], dfx * x.d[2]}};
}

// ---------------------------------------------------------------------------
// small vector helpers shared by the calculus layers

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3<double>& a) { return std::sqrt(dot(a, a)); }

template <class T>
Vec3<T> scaled(const Vec3<T>& a, const T& c) {
    return {a[0] * c, a[1] * c, a[2] * c};
}

inline bool all_finite(const Vec3<double>& a) {
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

}  // namespace bicontact
