#pragma once

/**
 * @file field.hpp
 * @brief Type-erased evaluators over nested dual numbers.
 *
 * A field is any callable `f(const Point<T>&)` written generically in T.
 * Erasure instantiates it for double and for each dual nesting level up to
 * max_nesting, so a field can always report exact derivatives of its own
 * value. A derived field (a partial derivative, a bracket, a curl) evaluates
 * its parent one level deeper; asking for more levels than exist throws
 * DepthError.
 */

#include <array>
#include <functional>
#include <memory>
#include <type_traits>
#include <utility>

#include "bicontact/dual.hpp"
#include "bicontact/errors.hpp"

namespace bicontact {

struct ScalarShape {
    template <class T>
    using type = T;
};

struct TripleShape {
    template <class T>
    using type = Vec3<T>;
};

template <class Shape>
class ErasedField {
public:
    template <class T>
    using result_t = typename Shape::template type<T>;

    ErasedField() = default;

    template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, ErasedField>>>
    explicit ErasedField(F f) : impl_(std::make_shared<const Model<std::decay_t<F>>>(std::move(f))) {}

    bool valid() const { return static_cast<bool>(impl_); }

    template <class T>
    result_t<T> operator()(const Point<T>& p) const {
        if (!impl_) throw Error("evaluating an empty field");
        if constexpr (nesting_v<T> <= max_nesting) {
            return impl_->eval(p);
        } else {
            throw DepthError("derivative nesting exceeds the supported depth");
        }
    }

private:
    struct Concept {
        virtual ~Concept() = default;
        virtual result_t<double> eval(const Point<double>&) const = 0;
        virtual result_t<D1> eval(const Point<D1>&) const = 0;
        virtual result_t<D2> eval(const Point<D2>&) const = 0;
        virtual result_t<D3> eval(const Point<D3>&) const = 0;
    };

    template <class F>
    struct Model final : Concept {
        explicit Model(F fn) : f(std::move(fn)) {}
        result_t<double> eval(const Point<double>& p) const override { return f(p); }
        result_t<D1> eval(const Point<D1>& p) const override { return f(p); }
        result_t<D2> eval(const Point<D2>& p) const override { return f(p); }
        result_t<D3> eval(const Point<D3>& p) const override { return f(p); }
        F f;
    };

    std::shared_ptr<const Concept> impl_;
};

/// A smooth function on a chart with exact derivatives.
class ScalarField {
public:
    ScalarField() = default;

    template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, ScalarField> &&
                                                !std::is_arithmetic_v<std::decay_t<F>>>>
    explicit ScalarField(F f) : field_(std::move(f)) {}

    static ScalarField constant(double c) {
        return ScalarField([c](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            return T(c);
        });
    }

    static ScalarField coordinate(int i) {
        return ScalarField([i](const auto& p) { return p[i]; });
    }

    template <class T>
    T operator()(const Point<T>& p) const {
        return field_(p);
    }

    double value(const Point<double>& p) const { return field_(p); }

    /// Exact gradient at a point.
    Vec3<double> gradient(const Point<double>& p) const {
        const D1 r = field_(seed(p));
        return r.d;
    }

    bool valid() const { return field_.valid(); }

private:
    ErasedField<ScalarShape> field_;
};

/// d f / d x_i as a new field; costs one nesting level.
inline ScalarField partial(const ScalarField& f, int i) {
    return ScalarField([f, i](const auto& p) { return f(seed(p)).d[i]; });
}

// ---------------------------------------------------------------------------
// field algebra

namespace detail {
template <class Op>
ScalarField binary(const ScalarField& a, const ScalarField& b, Op op) {
    return ScalarField([a, b, op](const auto& p) { return op(a(p), b(p)); });
}
}  // namespace detail

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return detail::binary(a, b, [](const auto& x, const auto& y) { return x + y; });
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return detail::binary(a, b, [](const auto& x, const auto& y) { return x - y; });
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return detail::binary(a, b, [](const auto& x, const auto& y) { return x * y; });
}
inline ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    return detail::binary(a, b, [](const auto& x, const auto& y) { return x / y; });
}
inline ScalarField operator-(const ScalarField& a) {
    return ScalarField([a](const auto& p) { return -a(p); });
}
inline ScalarField operator*(double c, const ScalarField& a) {
    return ScalarField([a, c](const auto& p) { return a(p) * c; });
}
inline ScalarField operator*(const ScalarField& a, double c) { return c * a; }
inline ScalarField operator+(const ScalarField& a, double c) {
    return ScalarField([a, c](const auto& p) { return a(p) + c; });
}
inline ScalarField operator+(double c, const ScalarField& a) { return a + c; }
inline ScalarField operator-(const ScalarField& a, double c) { return a + (-c); }
inline ScalarField operator-(double c, const ScalarField& a) { return (-a) + c; }

inline ScalarField sin(const ScalarField& a) {
    return ScalarField([a](const auto& p) { return sin(a(p)); });
}
inline ScalarField cos(const ScalarField& a) {
    return ScalarField([a](const auto& p) { return cos(a(p)); });
}
inline ScalarField tan(const ScalarField& a) {
    return ScalarField([a](const auto& p) { return tan(a(p)); });
}
inline ScalarField exp(const ScalarField& a) {
    return ScalarField([a](const auto& p) { return exp(a(p)); });
}

/// Evaluate `f` with one coordinate frozen to a constant value.
inline ScalarField restrict_coordinate(const ScalarField& f, int i, double value) {
    return ScalarField([f, i, value](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        auto q = p;
        q[i] = T(value);
        return f(q);
    });
}

}  // namespace bicontact
