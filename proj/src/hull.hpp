#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ibconvex/environment.hpp"

namespace ibc::detail {

/// Boundary-inclusive membership test for the convex hull of a point set.
///
/// The hull is built in the affine span of the points, so collinear and
/// coplanar inputs are handled in their own subspace. Candidates count as
/// inside when they lie within `span_tol` of that subspace and within
/// `facet_tol` of every bounding halfspace.
class HullRegion {
public:
    explicit HullRegion(std::span<const Point> points, double facet_tol = 1e-9, double span_tol = 1e-6);

    bool contains(const Point& x) const;
    /// Affine dimension of the input points (0..3).
    int rank() const { return rank_; }

private:
    struct Halfspace {
        double n[3];
        double offset;  // inside: n.y <= offset
    };

    // Local coordinates of x in the affine frame, plus distance to the span.
    void to_local(const Point& x, double local[3], double& off_span) const;

    int rank_ = 0;
    double facet_tol_;
    double span_tol_;
    Point origin_{};
    double basis_[3][3]{};  // rows: orthonormal directions of the span (first rank_ used)
    double lo_ = 0.0, hi_ = 0.0;       // rank 1 interval
    std::vector<Halfspace> halfspaces_;  // rank 2 and 3
};

/// Number of `domain` points inside the hull of `members`.
std::size_t count_in_hull(std::span<const Point> members, std::span<const Point> domain);

}  // namespace ibc::detail
