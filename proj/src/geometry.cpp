#include "aggseek/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aggseek/errors.hpp"

namespace aggseek {
namespace {

void require_dim(const ConvexSet& set, const VectorCRef& v, const char* what) {
    if (v.size() != set.dim()) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(set.dim()) + ", got " +
                             std::to_string(v.size()));
    }
}

void require_member(const ConvexSet& set, const VectorCRef& x) {
    require_dim(set, x, "point");
    if (!set.contains(x)) throw InfeasibleStateError("point lies outside the constraint set");
}

}  // namespace

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
    if (lo.size() != hi.size() || lo.size() == 0) throw std::invalid_argument("box: lo/hi size mismatch");
    if (!lo.allFinite() || !hi.allFinite()) throw std::invalid_argument("box: bounds must be finite");
    if ((lo.array() > hi.array()).any()) throw std::invalid_argument("box: empty (lo > hi)");
    return ConvexSet(Box{std::move(lo), std::move(hi)});
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
    if (center.size() == 0) throw std::invalid_argument("ball: empty center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball: radius must be positive");
    if (!center.allFinite()) throw std::invalid_argument("ball: center must be finite");
    return ConvexSet(Ball{std::move(center), radius});
}

Eigen::Index ConvexSet::dim() const {
    return std::visit([](const auto& s) -> Eigen::Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) return s.lo.size();
        else return s.center.size();
    }, shape_);
}

Vector ConvexSet::center() const {
    if (const Box* b = as_box()) return 0.5 * (b->lo + b->hi);
    return as_ball()->center;
}

bool ConvexSet::contains(const VectorCRef& x, double tol) const {
    if (x.size() != dim()) return false;
    if (const Box* b = as_box()) {
        return ((x.array() >= b->lo.array() - tol) && (x.array() <= b->hi.array() + tol)).all();
    }
    const Ball* ball = as_ball();
    return (x - ball->center).norm() <= ball->radius + tol;
}

Vector project(const ConvexSet& set, const VectorCRef& y) {
    require_dim(set, y, "project");
    if (const Box* b = set.as_box()) return y.cwiseMax(b->lo).cwiseMin(b->hi);
    const Ball* ball = set.as_ball();
    const Vector offset = y - ball->center;
    const double dist = offset.norm();
    if (dist <= ball->radius) return y;
    // Shrink by ulps until the rounded result is inside, so projected states are exactly feasible.
    double scale = ball->radius / dist;
    Vector p = ball->center + offset * scale;
    while ((p - ball->center).norm() > ball->radius) {
        scale = std::nextafter(scale, 0.0);
        p = ball->center + offset * scale;
    }
    return p;
}

Vector tangent_project(const ConvexSet& set, const VectorCRef& x, const VectorCRef& v) {
    require_member(set, x);
    require_dim(set, v, "direction");
    Vector out = v;
    if (const Box* b = set.as_box()) {
        for (Eigen::Index j = 0; j < out.size(); ++j) {
            const bool at_lo = x[j] - b->lo[j] <= kActivityTol;
            const bool at_hi = b->hi[j] - x[j] <= kActivityTol;
            if ((at_lo && v[j] < 0.0) || (at_hi && v[j] > 0.0)) out[j] = 0.0;
        }
        return out;
    }
    const Ball* ball = set.as_ball();
    const Vector offset = x - ball->center;
    const double dist = offset.norm();
    if (dist < ball->radius - kActivityTol) return out;
    const Vector normal = offset / dist;
    const double outward = normal.dot(v);
    if (outward > 0.0) out -= outward * normal;
    return out;
}

Vector normal_project(const ConvexSet& set, const VectorCRef& x, const VectorCRef& v) {
    return v - tangent_project(set, x, v);
}

double min_directional(const ConvexSet& set, const VectorCRef& x, const VectorCRef& g) {
    require_dim(set, x, "point");
    require_dim(set, g, "direction");
    if (const Box* b = set.as_box()) {
        double total = 0.0;
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            total += std::min((b->lo[j] - x[j]) * g[j], (b->hi[j] - x[j]) * g[j]);
        }
        return total;
    }
    const Ball* ball = set.as_ball();
    return (ball->center - x).dot(g) - ball->radius * g.norm();
}

}  // namespace aggseek
