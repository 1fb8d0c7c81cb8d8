#pragma once

/**
 * @file grid.hpp
 * @brief Sample grids and verification reports for pointwise inequalities.
 */

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bicontact/chart.hpp"
#include "bicontact/errors.hpp"

namespace bicontact {

/// Tensor grid of sample points inside a box.
struct GridSpec {
    std::array<int, 3> counts{32, 32, 32};
    /// Magnitudes below this count as zero in equality tests.
    double zero_tol = 1e-9;
    /// A strict inequality q > 0 passes when min q exceeds this floor.
    double margin_floor = 0.0;

    static GridSpec cube(int n) {
        GridSpec g;
        g.counts = {n, n, n};
        return g;
    }

    void validate() const {
        for (int c : counts)
            if (c < 2) throw InvariantError("grid counts must be at least 2 per axis");
    }

    std::size_t size() const {
        return static_cast<std::size_t>(counts[0]) * static_cast<std::size_t>(counts[1]) *
               static_cast<std::size_t>(counts[2]);
    }
};

/// Axis-aligned sampling box. Periodic axes drop their upper endpoint.
struct SampleBox {
    std::array<Interval, 3> ranges;
    std::array<bool, 3> periodic{false, false, false};

    static SampleBox of(const Chart& chart) {
        SampleBox b;
        for (std::size_t i = 0; i < 3; ++i) {
            b.ranges[i] = chart.range(i);
            b.periodic[i] = chart.periodic(i);
        }
        return b;
    }

    SampleBox with(std::size_t axis, Interval r) const {
        SampleBox b = *this;
        b.ranges[axis] = r;
        b.periodic[axis] = false;
        return b;
    }

    double coordinate(std::size_t axis, int k, int count) const {
        const auto& r = ranges[axis];
        if (periodic[axis]) return r.lo + r.length() * k / count;
        if (count == 1) return r.lo;
        return r.lo + r.length() * k / (count - 1);
    }

    /// Visit every grid point in a fixed (lexicographic) order.
    template <class F>
    void for_each(const GridSpec& grid, F&& f) const {
        grid.validate();
        for (int i = 0; i < grid.counts[0]; ++i) {
            const double x = coordinate(0, i, grid.counts[0]);
            for (int j = 0; j < grid.counts[1]; ++j) {
                const double y = coordinate(1, j, grid.counts[1]);
                for (int k = 0; k < grid.counts[2]; ++k) f(Point<double>{x, y, coordinate(2, k, grid.counts[2])});
            }
        }
    }
};

/// Outcome of checking one pointwise inequality over a grid.
struct VerificationReport {
    enum class Bound {
        lower,  ///< pass iff min(value) > tolerance
        upper   ///< pass iff max(value) <= tolerance
    };

    std::string check;
    Bound bound = Bound::lower;
    /// The extreme of the checked quantity (minimum for lower bounds, maximum
    /// for upper bounds).
    double value = 0.0;
    Point<double> argmin{};
    double tolerance = 0.0;
    bool pass = false;
    std::size_t samples = 0;
    double wall_seconds = 0.0;
    /// A few failing sample points, in grid order.
    std::vector<Point<double>> violations;
    std::size_t violation_count = 0;
    std::string note;

    std::string verdict() const { return pass ? "pass" : "fail"; }

    std::string summary() const {
        std::ostringstream os;
        os.precision(6);
        os << check << ": " << (bound == Bound::lower ? "min " : "max ") << value << " at (" << argmin[0] << ", "
           << argmin[1] << ", " << argmin[2] << ") " << (bound == Bound::lower ? "> " : "<= ") << tolerance
           << " -> " << verdict();
        return os.str();
    }
};

inline constexpr std::size_t max_recorded_violations = 8;

namespace detail {
inline void throw_non_finite(const std::string& check, const Point<double>& p) {
    std::ostringstream os;
    os.precision(10);
    os << check << ": non-finite value at (" << p[0] << ", " << p[1] << ", " << p[2] << ")";
    throw DomainError(os.str());
}
}  // namespace detail

/// Minimum of q over the grid; passes iff the minimum exceeds `floor`.
/// A non-finite sample is a hard DomainError.
template <class F>
VerificationReport sweep_lower(std::string check, const SampleBox& box, const GridSpec& grid, F&& q, double floor) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    r.check = std::move(check);
    r.bound = VerificationReport::Bound::lower;
    r.tolerance = floor;
    r.value = std::numeric_limits<double>::infinity();
    box.for_each(grid, [&](const Point<double>& p) {
        const double val = q(p);
        if (!std::isfinite(val)) detail::throw_non_finite(r.check, p);
        ++r.samples;
        if (val < r.value) {
            r.value = val;
            r.argmin = p;
        }
        if (!(val > floor)) {
            ++r.violation_count;
            if (r.violations.size() < max_recorded_violations) r.violations.push_back(p);
        }
    });
    r.pass = r.value > floor;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Maximum of q over the grid; passes iff the maximum is at most `tol`.
template <class F>
VerificationReport sweep_upper(std::string check, const SampleBox& box, const GridSpec& grid, F&& q, double tol) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    r.check = std::move(check);
    r.bound = VerificationReport::Bound::upper;
    r.tolerance = tol;
    r.value = -std::numeric_limits<double>::infinity();
    box.for_each(grid, [&](const Point<double>& p) {
        const double val = q(p);
        if (!std::isfinite(val)) detail::throw_non_finite(r.check, p);
        ++r.samples;
        if (val > r.value) {
            r.value = val;
            r.argmin = p;
        }
        if (val > tol) {
            ++r.violation_count;
            if (r.violations.size() < max_recorded_violations) r.violations.push_back(p);
        }
    });
    r.pass = r.value <= tol;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Same as sweep_upper over an explicit list of points.
template <class F>
VerificationReport sweep_upper(std::string check, const std::vector<Point<double>>& points, F&& q, double tol) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport r;
    r.check = std::move(check);
    r.bound = VerificationReport::Bound::upper;
    r.tolerance = tol;
    r.value = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        const double val = q(p);
        if (!std::isfinite(val)) detail::throw_non_finite(r.check, p);
        ++r.samples;
        if (val > r.value) {
            r.value = val;
            r.argmin = p;
        }
        if (val > tol) {
            ++r.violation_count;
            if (r.violations.size() < max_recorded_violations) r.violations.push_back(p);
        }
    }
    r.pass = r.value <= tol;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Deterministic uniform points in a box.
inline std::vector<Point<double>> random_points(const SampleBox& box, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point<double>> out(n);
    for (auto& p : out)
        for (std::size_t i = 0; i < 3; ++i) p[i] = box.ranges[i].lo + box.ranges[i].length() * unit(rng);
    return out;
}

}  // namespace bicontact
