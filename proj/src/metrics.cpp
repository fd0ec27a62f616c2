#include "qrp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrp {

Bounds2 bounds_of(const std::vector<std::vector<Point2>>& sets) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Bounds2 b{{inf, inf}, {-inf, -inf}};
    for (const auto& s : sets)
        for (const auto& [x, y] : s) {
            b.min.first = std::min(b.min.first, x);
            b.min.second = std::min(b.min.second, y);
            b.max.first = std::max(b.max.first, x);
            b.max.second = std::max(b.max.second, y);
        }
    return b;
}

std::vector<Point2> normalize(const std::vector<Point2>& pts, const Bounds2& b) {
    double dx = b.max.first - b.min.first;
    double dy = b.max.second - b.min.second;
    if (!(dx > 0) || !(dy > 0)) throw DegenerateBounds("normalization bounds need min < max on both objectives");
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& [x, y] : pts) out.emplace_back((x - b.min.first) / dx, (y - b.min.second) / dy);
    return out;
}

double igd(const std::vector<Point2>& p, const std::vector<Point2>& reference) {
    if (p.empty() || reference.empty()) throw std::invalid_argument("igd needs two nonempty sets");
    double total = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : p) best = std::min(best, std::hypot(r.first - q.first, r.second - q.second));
        total += best;
    }
    return total / static_cast<double>(reference.size());
}

double hypervolume(const std::vector<Point2>& s, Point2 ref) {
    std::vector<Point2> pts;
    for (const auto& q : s)
        if (q.first < ref.first && q.second < ref.second) pts.push_back(q);
    std::sort(pts.begin(), pts.end());
    // Sweep by the first objective; each strip is bounded above by the best
    // second objective seen so far.
    double area = 0.0;
    double best_y = ref.second;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best_y = std::min(best_y, pts[i].second);
        double next_x = i + 1 < pts.size() ? pts[i + 1].first : ref.first;
        area += (next_x - pts[i].first) * (ref.second - best_y);
    }
    return area;
}

double rpd(double method, double best) {
    if (best == 0.0) throw std::domain_error("rpd baseline must be nonzero");
    return 100.0 * (method - best) / best;
}

std::vector<Point2> pareto_filter(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Point2> out;
    double best_y = std::numeric_limits<double>::infinity();
    for (const auto& q : pts) {
        if (q.second < best_y) {
            out.push_back(q);
            best_y = q.second;
        }
    }
    return out;
}

}  // namespace qrp
