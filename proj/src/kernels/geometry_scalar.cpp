#include <cmath>

#include "dxnn/kernels.hpp"

namespace dxnn::kernels::detail {

bool ray_circle(double cx, double cy, double cr, const Ray& ray, double& t)
{
    const double fx = cx - ray.ox;
    const double fy = cy - ray.oy;
    const double b = fx * ray.dx + fy * ray.dy;
    const double c = (fx * fx + fy * fy) - cr * cr;
    if (c <= 0.0) {
        t = 0.0;
        return true;
    }
    const double disc = b * b - c;
    if (disc < 0.0 || b <= 0.0)
        return false;
    t = b - std::sqrt(disc);
    return t <= ray.max_t;
}

RayHit nearest_hit_scalar(const Circles& circles, const Ray& ray)
{
    RayHit best;
    for (std::size_t i = 0; i < circles.n; ++i) {
        if (i == ray.skip)
            continue;
        double t = 0.0;
        if (ray_circle(circles.x[i], circles.y[i], circles.r[i], ray, t) && (best.index == kNoHit || t < best.t)) {
            best.index = i;
            best.t = t;
        }
    }
    return best;
}

void overlaps_scalar(const Circles& circles, double px, double py, double pr, std::size_t skip,
                     std::vector<std::size_t>& out)
{
    for (std::size_t i = 0; i < circles.n; ++i) {
        if (i == skip)
            continue;
        const double dx = circles.x[i] - px;
        const double dy = circles.y[i] - py;
        const double rr = circles.r[i] + pr;
        if (dx * dx + dy * dy < rr * rr)
            out.push_back(i);
    }
}

} // namespace dxnn::kernels::detail
