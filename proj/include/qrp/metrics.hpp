#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace qrp {

using Point2 = std::pair<double, double>;

struct Bounds2 {
    Point2 min;
    Point2 max;
};

struct DegenerateBounds : std::domain_error {
    using std::domain_error::domain_error;
};

/// Component-wise bounds of the union of point sets.
[[nodiscard]] Bounds2 bounds_of(const std::vector<std::vector<Point2>>& sets);

/// (x - min) / (max - min) per objective. Throws DegenerateBounds when an
/// objective has min == max.
[[nodiscard]] std::vector<Point2> normalize(const std::vector<Point2>& pts, const Bounds2& b);

/// Mean distance from each reference point to its nearest member of p.
[[nodiscard]] double igd(const std::vector<Point2>& p, const std::vector<Point2>& reference);

/// Area dominated by s and bounded by ref, for minimisation. Points outside
/// the reference box contribute nothing.
[[nodiscard]] double hypervolume(const std::vector<Point2>& s, Point2 ref = {1.0, 1.0});

/// 100 (method - best) / best
[[nodiscard]] double rpd(double method, double best);

/// Non-dominated subset (minimisation), sorted by the first objective; exact
/// duplicates are kept once.
[[nodiscard]] std::vector<Point2> pareto_filter(std::vector<Point2> pts);

}  // namespace qrp
