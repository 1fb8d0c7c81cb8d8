#pragma once

/**
 * @file flow.hpp
 * @brief Classical RK4 integration of vector fields and their linearization.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "bicontact/errors.hpp"
#include "bicontact/forms.hpp"

namespace bicontact {

/// One classical fourth-order step for x' = f(x), x an array of doubles.
template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, const std::array<double, N>& x, double h) {
    auto axpy = [](const std::array<double, N>& a, double c, const std::array<double, N>& b) {
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + c * b[i];
        return out;
    };
    const auto k1 = f(x);
    const auto k2 = f(axpy(x, 0.5 * h, k1));
    const auto k3 = f(axpy(x, 0.5 * h, k2));
    const auto k4 = f(axpy(x, h, k3));
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

struct FlowOptions {
    /// Step size; 0 selects T / default_steps.
    double step = 0.0;
    int default_steps = 4096;
    /// Keep every n-th sample in the returned path (the endpoint is always kept).
    int record_every = 1;
    /// Repeat the integration at half the step and report the difference.
    bool richardson = true;
};

struct FlowSample {
    double time = 0.0;
    Point<double> point{};                 // wrapped into the chart
    std::array<long, 3> winding{0, 0, 0};  // whole periods crossed so far
};

struct FlowPath {
    std::vector<FlowSample> samples;
    Point<double> end{};       // wrapped endpoint
    Point<double> unwrapped{};  // endpoint without identifications
    std::array<long, 3> winding{0, 0, 0};
    double step = 0.0;
    /// |x_h - x_{h/2}| / 15 at the endpoint, or -1 when not computed.
    double richardson_error = -1.0;
};

namespace detail {
inline Point<double> field_value(const VectorField& y, const Point<double>& x, double time) {
    const auto r = y.at(x);
    if (!all_finite(r)) {
        std::ostringstream os;
        os << "non-finite field value at " << y.chart()->describe(x) << ", t=" << time;
        throw DomainError(os.str());
    }
    return r;
}

inline Point<double> integrate_endpoint(const VectorField& y, Point<double> x, double T, double h,
                                        std::vector<FlowSample>* record, int every) {
    const Chart& chart = *y.chart();
    const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(T) / h - 1e-9)));
    const double dt = T / static_cast<double>(n);
    auto rhs = [&](const Point<double>& q) { return field_value(y, q, 0.0); };
    auto push = [&](double time, const Point<double>& q) {
        if (!record) return;
        FlowSample s;
        s.time = time;
        s.point = chart.wrap(q, &s.winding);
        record->push_back(s);
    };
    push(0.0, x);
    for (long k = 1; k <= n; ++k) {
        x = rk4_step<3>(rhs, x, dt);
        const double time = dt * static_cast<double>(k);
        int side = 0;
        const int axis = chart.exit_axis(x, &side);
        if (axis >= 0) {
            std::ostringstream os;
            os << "trajectory left the chart through " << chart.face_name(axis, side) << " at t=" << time;
            throw ChartExitError(os.str(), chart.face_name(axis, side), time);
        }
        if (k == n || (every > 0 && k % every == 0)) push(time, x);
    }
    return x;
}
}  // namespace detail

/// Integrate Y from p0 for time T (T may be negative). Periodic coordinates
/// are tracked without wrapping and reported as wrapped point + winding.
inline FlowPath integrate_flow(const VectorField& y, const Point<double>& p0, double T, FlowOptions opt = {}) {
    if (opt.step < 0.0) throw InvariantError("integration step must be positive");
    const double h = opt.step > 0.0 ? opt.step : std::abs(T) / opt.default_steps;
    FlowPath path;
    path.step = h;
    if (T == 0.0 || h == 0.0) {
        FlowSample s;
        s.point = y.chart()->wrap(p0, &s.winding);
        path.samples.push_back(s);
        path.end = s.point;
        path.unwrapped = p0;
        path.winding = s.winding;
        return path;
    }
    path.unwrapped = detail::integrate_endpoint(y, p0, T, h, &path.samples, opt.record_every);
    path.winding = path.samples.back().winding;
    path.end = path.samples.back().point;
    if (opt.richardson) {
        const auto fine = detail::integrate_endpoint(y, p0, T, 0.5 * h, nullptr, 0);
        double err = 0.0;
        for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(fine[i] - path.unwrapped[i]));
        path.richardson_error = err / 15.0;
    }
    return path;
}

struct Monodromy {
    Eigen::Matrix3d matrix;
    std::array<std::complex<double>, 3> eigenvalues;  // sorted by modulus, descending
    double determinant = 0.0;
    double closure_error = 0.0;
    Point<double> end{};
};

/// Period map of the linearized flow along the orbit of Y through p0.
/// Throws InvariantError when the orbit does not close within tol (in the
/// chart metric, modulo the periodic identifications).
inline Monodromy variational_monodromy(const VectorField& y, const Point<double>& p0, double period,
                                       double step = 0.0, double tol = 1e-6) {
    const Chart& chart = *y.chart();
    const double h = step > 0.0 ? step : std::abs(period) / 4096.0;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(period) / h - 1e-9)));
    const double dt = period / static_cast<double>(n);
    const TripleField coeffs = y.coeffs();

    // state = (x, M column-major)
    std::array<double, 12> state{};
    for (std::size_t i = 0; i < 3; ++i) state[i] = p0[i];
    for (std::size_t c = 0; c < 3; ++c) state[3 + 3 * c + c] = 1.0;

    auto rhs = [&](const std::array<double, 12>& s) {
        const Point<double> x{s[0], s[1], s[2]};
        const auto r = coeffs(seed(x));
        std::array<double, 12> out{};
        for (std::size_t i = 0; i < 3; ++i) out[i] = r[i].v;
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < 3; ++i) {
                double acc = 0.0;
                for (std::size_t k = 0; k < 3; ++k) acc += r[i].d[k] * s[3 + 3 * c + k];
                out[3 + 3 * c + i] = acc;
            }
        for (double v : out)
            if (!std::isfinite(v)) throw DomainError("non-finite value in variational equation");
        return out;
    };
    for (long k = 0; k < n; ++k) state = rk4_step<12>(rhs, state, dt);

    Monodromy out;
    out.end = chart.wrap({state[0], state[1], state[2]});
    const auto start = chart.wrap(p0);
    double err = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double d = out.end[i] - start[i];
        if (chart.periodic(i)) {
            const double per = chart.period(i);
            d -= per * std::round(d / per);
        }
        err = std::max(err, std::abs(d));
    }
    out.closure_error = err;
    if (err > tol) {
        std::ostringstream os;
        os << "orbit fails to close: endpoint " << chart.describe(out.end) << " differs from start by " << err;
        throw InvariantError(os.str());
    }
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < 3; ++i) out.matrix(static_cast<int>(i), static_cast<int>(c)) = state[3 + 3 * c + i];
    out.determinant = out.matrix.determinant();
    Eigen::EigenSolver<Eigen::Matrix3d> solver(out.matrix, false);
    std::array<std::complex<double>, 3> ev{solver.eigenvalues()[0], solver.eigenvalues()[1],
                                           solver.eigenvalues()[2]};
    std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
    out.eigenvalues = ev;
    return out;
}

}  // namespace bicontact
