#pragma once

#include <variant>

#include <Eigen/Core>

namespace aggseek {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorCRef = Eigen::Ref<const Vector>;

/// Distance from a face below which a coordinate (or radius) counts as active.
inline constexpr double kActivityTol = 1e-10;
/// Slack allowed when checking that a point lies in a set.
inline constexpr double kMembershipTol = 1e-12;

struct Box {
    Vector lo;
    Vector hi;
};

struct Ball {
    Vector center;
    double radius = 1.0;
};

/// Compact convex constraint set. Only boxes and Euclidean balls are supported;
/// both admit closed-form projections and cones.
class ConvexSet {
public:
    /// Throws std::invalid_argument on size mismatch or lo > hi.
    static ConvexSet box(Vector lo, Vector hi);
    /// Throws std::invalid_argument unless radius > 0.
    static ConvexSet ball(Vector center, double radius);

    [[nodiscard]] Eigen::Index dim() const;
    [[nodiscard]] bool is_box() const { return std::holds_alternative<Box>(shape_); }
    [[nodiscard]] const Box* as_box() const { return std::get_if<Box>(&shape_); }
    [[nodiscard]] const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }

    /// Box midpoint or ball center.
    [[nodiscard]] Vector center() const;
    [[nodiscard]] bool contains(const VectorCRef& x, double tol = kMembershipTol) const;

private:
    explicit ConvexSet(std::variant<Box, Ball> shape) : shape_(std::move(shape)) {}

    std::variant<Box, Ball> shape_;
};

/// Euclidean projection of y onto the set.
[[nodiscard]] Vector project(const ConvexSet& set, const VectorCRef& y);

/// Projection of v onto the tangent cone of the set at x, i.e. the directional
/// limit (project(x + eps v) - x) / eps as eps -> 0+.
/// Throws InfeasibleStateError if x is outside the set.
[[nodiscard]] Vector tangent_project(const ConvexSet& set, const VectorCRef& x, const VectorCRef& v);

/// Projection of v onto the normal cone at x; the Moreau complement of tangent_project.
[[nodiscard]] Vector normal_project(const ConvexSet& set, const VectorCRef& x, const VectorCRef& v);

/// min over z in set of (z - x)^T g.
[[nodiscard]] double min_directional(const ConvexSet& set, const VectorCRef& x, const VectorCRef& g);

}  // namespace aggseek
