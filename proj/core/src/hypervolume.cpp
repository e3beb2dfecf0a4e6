#include "mobopt/hypervolume.hpp"

#include <algorithm>
#include <cassert>

#include "mobopt/errors.hpp"
#include "mobopt/pareto.hpp"
#include "mobopt/rng.hpp"

namespace mobopt {

namespace {

using Point = std::vector<double>;

bool inside_box(const Point& p, const Point& ref) {
    for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j] > ref[j])
            return false;
    return true;
}

double inclusive_volume(const Point& p, const Point& ref) {
    double v = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        v *= ref[j] - p[j];
    return v;
}

/// 2-D sort-and-sweep over a mutually non-dominated set within the box.
double sweep_2d(std::vector<Point> pts, const Point& ref) {
    std::sort(pts.begin(), pts.end());
    double hv = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double next_x = (i + 1 < pts.size()) ? pts[i + 1][0] : ref[0];
        hv += (next_x - pts[i][0]) * (ref[1] - pts[i][1]);
    }
    return hv;
}

std::vector<Point> non_dominated(std::vector<Point> pts) {
    const auto keep = non_dominated_indices(pts);
    std::vector<Point> out;
    out.reserve(keep.size());
    for (auto i : keep)
        out.push_back(std::move(pts[i]));
    return out;
}

double wfg(std::vector<Point> pts, const Point& ref);

/// Exclusive contribution of pts[i] relative to the points after it.
double exclusive_volume(const std::vector<Point>& pts, std::size_t i, const Point& ref) {
    const double incl = inclusive_volume(pts[i], ref);
    std::vector<Point> limit;
    limit.reserve(pts.size() - i - 1);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
        Point q(pts[i].size());
        for (std::size_t k = 0; k < q.size(); ++k)
            q[k] = std::max(pts[i][k], pts[j][k]);
        limit.push_back(std::move(q));
    }
    if (limit.empty())
        return incl;
    return incl - wfg(non_dominated(std::move(limit)), ref);
}

double wfg(std::vector<Point> pts, const Point& ref) {
    if (pts.empty())
        return 0.0;
    if (pts[0].size() == 2)
        return sweep_2d(std::move(pts), ref);
    if (pts.size() == 1)
        return inclusive_volume(pts[0], ref);
    // Sorting by the last objective keeps the limit sets small.
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.back() > b.back();
    });
    double hv = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        hv += exclusive_volume(pts, i, ref);
    return hv;
}

} // namespace

double hypervolume_exact(const std::vector<std::vector<double>>& front,
                         const std::vector<double>& ref) {
    const std::size_t n = ref.size();
    if (n > 4)
        throw UnsupportedDimensionError(
            "exact hypervolume supports up to 4 objectives; use hypervolume_mc");
    std::vector<Point> pts;
    for (const auto& p : front) {
        if (p.size() != n)
            throw DimensionError("hypervolume: point/reference dimension mismatch");
        if (inside_box(p, ref))
            pts.push_back(p);
    }
    if (pts.empty())
        return 0.0;
    pts = non_dominated(std::move(pts));
    if (n == 1)
        return ref[0] - pts[0][0];
    return wfg(std::move(pts), ref);
}

double hypervolume_mc(const std::vector<std::vector<double>>& front,
                      const std::vector<double>& ref,
                      const std::vector<double>& lower_bound,
                      std::size_t n_samples,
                      std::uint64_t seed) {
    if (n_samples == 0)
        throw ArgumentError("hypervolume_mc: n_samples must be positive");
    const std::size_t n = ref.size();
    if (lower_bound.size() != n)
        throw DimensionError("hypervolume_mc: bound/reference dimension mismatch");
    double box = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        box *= ref[j] - lower_bound[j];
    for (const auto& p : front) {
        if (p.size() != n)
            throw DimensionError("hypervolume_mc: point/reference dimension mismatch");
        for (std::size_t j = 0; j < n; ++j)
            if (p[j] < lower_bound[j])
                throw ArgumentError("hypervolume_mc: lower_bound must be <= front points");
    }

    Rng rng(seed);
    Point s(n);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            s[j] = rng.uniform(lower_bound[j], ref[j]);
        for (const auto& p : front) {
            bool dom = true;
            for (std::size_t j = 0; j < n && dom; ++j)
                dom = p[j] <= s[j];
            if (dom) {
                ++hits;
                break;
            }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(n_samples);
}

} // namespace mobopt
