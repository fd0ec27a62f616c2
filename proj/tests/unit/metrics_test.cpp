#include "qrp/metrics.hpp"
#include "qrp/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace qrp;

namespace {

double raster_hv(const std::vector<Point2>& s, int n = 1000) {
    long inside = 0;
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            double y = (j + 0.5) / n;
            for (const auto& p : s)
                if (p.first <= x && p.second <= y) {
                    ++inside;
                    break;
                }
        }
    }
    return static_cast<double>(inside) / (static_cast<double>(n) * n);
}

}  // namespace

TEST(Normalize, Examples) {
    Bounds2 b{{100, 500}, {200, 600}};
    auto n = normalize({{100, 500}, {200, 600}, {150, 550}}, b);
    EXPECT_EQ(n[0], (Point2{0, 0}));
    EXPECT_EQ(n[1], (Point2{1, 1}));
    EXPECT_NEAR(n[2].first, 0.5, 1e-12);
    EXPECT_NEAR(n[2].second, 0.5, 1e-12);
    EXPECT_THROW((void)normalize({{1, 1}}, {{1, 0}, {1, 2}}), DegenerateBounds);
}

TEST(Igd, Examples) {
    std::vector<Point2> ref{{0, 0}, {1, 1}};
    EXPECT_EQ(igd(ref, ref), 0.0);
    EXPECT_NEAR(igd({{0, 0}}, ref), std::sqrt(2.0) / 2.0, 1e-12);
    EXPECT_LE(igd({{0, 0}, {0.9, 0.9}}, ref), igd({{0, 0}}, ref));
}

TEST(Hypervolume, Examples) {
    EXPECT_NEAR(hypervolume({{0.5, 0.5}}), 0.25, 1e-12);
    EXPECT_NEAR(hypervolume({{0, 0}}), 1.0, 1e-12);
    EXPECT_NEAR(hypervolume({{0.2, 0.8}, {0.8, 0.2}}), 0.28, 1e-12);
    EXPECT_EQ(hypervolume({}), 0.0);
}

TEST(Hypervolume, MatchesRasterAndIsMonotone) {
    RngStream rng(4);
    for (int t = 0; t < 10; ++t) {
        std::vector<Point2> s;
        int n = 1 + static_cast<int>(rng.below(8));
        for (int i = 0; i < n; ++i) s.emplace_back(rng.uniform(), rng.uniform());
        double hv = hypervolume(s);
        EXPECT_NEAR(hv, raster_hv(s, 400), 5e-3);
        auto bigger = s;
        bigger.emplace_back(rng.uniform(), rng.uniform());
        EXPECT_GE(hypervolume(bigger), hv - 1e-15);
        std::reverse(s.begin(), s.end());
        EXPECT_DOUBLE_EQ(hypervolume(s), hv);
    }
}

TEST(Rpd, Examples) {
    EXPECT_EQ(rpd(100, 100), 0.0);
    EXPECT_NEAR(rpd(110, 100), 10.0, 1e-12);
    EXPECT_LT(rpd(90, 100), 0.0);
    EXPECT_THROW((void)rpd(1, 0), std::domain_error);
}

TEST(ParetoFilter, KeepsNonDominated) {
    auto f = pareto_filter({{1, 5}, {2, 3}, {2, 4}, {3, 3}, {4, 1}, {1, 5}});
    EXPECT_EQ(f, (std::vector<Point2>{{1, 5}, {2, 3}, {4, 1}}));
}
