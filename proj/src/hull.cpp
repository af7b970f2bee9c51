#include "hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <utility>

#include <Eigen/Dense>

namespace ibc::detail {

namespace {

using Vec3 = Eigen::Vector3d;

// Andrew's monotone chain; returns CCW vertices without collinear points.
std::vector<Eigen::Vector2d> hull_2d(std::vector<Eigen::Vector2d> pts, double eps)
{
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Eigen::Vector2d> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= eps) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= t && cross(h[k - 2], h[k - 1], p) <= eps) --k;
        h[k++] = p;
    }
    h.resize(k > 1 ? k - 1 : k);
    return h;
}

struct Face {
    std::array<int, 3> v;
    Vec3 n;
    double d;
    bool alive;
};

// Incremental 3D hull over points known to span three dimensions.
std::vector<Face> hull_3d(const std::vector<Vec3>& p, double eps)
{
    const int n = static_cast<int>(p.size());
    int i0 = 0;
    for (int i = 1; i < n; ++i)
        if (p[i].x() < p[i0].x()) i0 = i;
    int i1 = i0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double d = (p[i] - p[i0]).squaredNorm();
        if (d > best) best = d, i1 = i;
    }
    int i2 = i0;
    best = -1.0;
    const Vec3 dir = (p[i1] - p[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        const double d = (p[i] - p[i0]).cross(dir).squaredNorm();
        if (d > best) best = d, i2 = i;
    }
    int i3 = i0;
    best = -1.0;
    const Vec3 nrm = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(nrm.dot(p[i] - p[i0]));
        if (d > best) best = d, i3 = i;
    }

    const Vec3 interior = (p[i0] + p[i1] + p[i2] + p[i3]) / 4.0;
    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c) {
        Vec3 normal = (p[b] - p[a]).cross(p[c] - p[a]);
        const double len = normal.norm();
        if (len <= 0.0) return;
        normal /= len;
        double d = normal.dot(p[a]);
        if (normal.dot(interior) > d) {
            normal = -normal;
            d = -d;
            std::swap(b, c);
        }
        faces.push_back({{a, b, c}, normal, d, true});
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    std::vector<int> visible;
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        visible.clear();
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
            if (faces[f].alive && faces[f].n.dot(p[i]) - faces[f].d > eps) visible.push_back(f);
        if (visible.empty()) continue;

        edges.clear();
        for (int f : visible) {
            const auto& v = faces[f].v;
            for (int e = 0; e < 3; ++e) edges.emplace(v[e], v[(e + 1) % 3]);
        }
        for (int f : visible) faces[f].alive = false;
        for (const auto& [a, b] : edges)
            if (!edges.count({b, a})) add_face(a, b, i);
    }
    std::erase_if(faces, [](const Face& f) { return !f.alive; });
    return faces;
}

}  // namespace

HullRegion::HullRegion(std::span<const Point> points, double facet_tol, double span_tol)
    : facet_tol_(facet_tol), span_tol_(span_tol)
{
    if (points.empty()) throw ParameterError("convex hull of an empty set");
    Vec3 centroid = Vec3::Zero();
    for (const auto& q : points) centroid += Vec3(q[0], q[1], q[2]);
    centroid /= static_cast<double>(points.size());
    origin_ = {centroid.x(), centroid.y(), centroid.z()};

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& q : points) {
        const Vec3 c = Vec3(q[0], q[1], q[2]) - centroid;
        cov += c * c.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    // Largest-variance directions first; keep those the points actually extend along.
    std::vector<Vec3> dirs;
    for (int k = 2; k >= 0; --k) {
        const Vec3 dir = eig.eigenvectors().col(k);
        double extent = 0.0;
        for (const auto& q : points) extent = std::max(extent, std::abs(dir.dot(Vec3(q[0], q[1], q[2]) - centroid)));
        if (extent > span_tol_) dirs.push_back(dir);
    }
    rank_ = static_cast<int>(dirs.size());
    for (int r = 0; r < rank_; ++r)
        for (int c = 0; c < 3; ++c) basis_[r][c] = dirs[r](c);

    std::vector<Vec3> local;
    local.reserve(points.size());
    double scale = 1.0;
    for (const auto& q : points) {
        double l[3];
        double off;
        to_local(q, l, off);
        local.emplace_back(l[0], l[1], l[2]);
        scale = std::max(scale, local.back().cwiseAbs().maxCoeff());
    }

    if (rank_ == 1) {
        lo_ = hi_ = local.front().x();
        for (const auto& l : local) lo_ = std::min(lo_, l.x()), hi_ = std::max(hi_, l.x());
    } else if (rank_ == 2) {
        std::vector<Eigen::Vector2d> flat;
        flat.reserve(local.size());
        for (const auto& l : local) flat.emplace_back(l.x(), l.y());
        const auto h = hull_2d(std::move(flat), 1e-12 * scale * scale);
        for (std::size_t i = 0; i < h.size(); ++i) {
            const auto& a = h[i];
            const auto& b = h[(i + 1) % h.size()];
            Eigen::Vector2d normal(b.y() - a.y(), a.x() - b.x());
            const double len = normal.norm();
            if (len <= 0.0) continue;
            normal /= len;
            halfspaces_.push_back({{normal.x(), normal.y(), 0.0}, normal.dot(a)});
        }
    } else if (rank_ == 3) {
        for (const auto& f : hull_3d(local, 1e-10 * scale))
            halfspaces_.push_back({{f.n.x(), f.n.y(), f.n.z()}, f.d});
    }
}

void HullRegion::to_local(const Point& x, double local[3], double& off_span) const
{
    const double c[3] = {x[0] - origin_[0], x[1] - origin_[1], x[2] - origin_[2]};
    double resid[3] = {c[0], c[1], c[2]};
    for (int r = 0; r < 3; ++r) {
        local[r] = 0.0;
        if (r >= rank_) continue;
        local[r] = basis_[r][0] * c[0] + basis_[r][1] * c[1] + basis_[r][2] * c[2];
        for (int k = 0; k < 3; ++k) resid[k] -= local[r] * basis_[r][k];
    }
    off_span = std::sqrt(resid[0] * resid[0] + resid[1] * resid[1] + resid[2] * resid[2]);
}

bool HullRegion::contains(const Point& x) const
{
    double l[3];
    double off;
    to_local(x, l, off);
    if (off > span_tol_) return false;
    if (rank_ == 0) return true;
    if (rank_ == 1) return l[0] >= lo_ - facet_tol_ && l[0] <= hi_ + facet_tol_;
    for (const auto& h : halfspaces_)
        if (h.n[0] * l[0] + h.n[1] * l[1] + h.n[2] * l[2] > h.offset + facet_tol_) return false;
    return true;
}

std::size_t count_in_hull(std::span<const Point> members, std::span<const Point> domain)
{
    const HullRegion region(members);
    return static_cast<std::size_t>(std::count_if(domain.begin(), domain.end(), [&](const Point& x) { return region.contains(x); }));
}

}  // namespace ibc::detail
