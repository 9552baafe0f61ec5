#pragma once

// Circle geometry used by the flatland sensors and collision checks. Each
// kernel exists as a portable scalar reference and, where the CPU allows, an
// AVX2 variant. Both perform the same IEEE operations in the same order, so
// their results are bit-identical; the variant is chosen once at runtime.
//
// Set DXNN_KERNELS=scalar in the environment to force the reference path.

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace dxnn::kernels {

struct Circles {
    const double* x = nullptr;
    const double* y = nullptr;
    const double* r = nullptr;
    std::size_t n = 0;
};

inline constexpr std::size_t kNoHit = std::numeric_limits<std::size_t>::max();

struct RayHit {
    std::size_t index = kNoHit;
    double t = 0.0; // distance from the ray origin; 0 when the origin is inside the circle
};

struct Ray {
    double ox = 0.0;
    double oy = 0.0;
    double dx = 1.0; // unit direction
    double dy = 0.0;
    double max_t = std::numeric_limits<double>::infinity();
    std::size_t skip = kNoHit; // circle ignored (the caster itself)
};

// Nearest circle hit along the ray with t <= max_t. Ties go to the lower index.
using NearestHitFn = RayHit (*)(const Circles& circles, const Ray& ray);
// Appends the indices of circles overlapping the disc (px, py, pr), excluding
// `skip`, in increasing order. Touching circles do not overlap.
using OverlapsFn = void (*)(const Circles& circles, double px, double py, double pr, std::size_t skip,
                            std::vector<std::size_t>& out);

struct KernelTable {
    std::string_view name;
    NearestHitFn nearest_hit;
    OverlapsFn overlaps;
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();
// The table used by the simulator.
const KernelTable& active_kernels();

namespace detail {
RayHit nearest_hit_scalar(const Circles& circles, const Ray& ray);
void overlaps_scalar(const Circles& circles, double px, double py, double pr, std::size_t skip,
                     std::vector<std::size_t>& out);
// Per-circle ray test shared by the scalar kernel and the SIMD tails.
bool ray_circle(double cx, double cy, double cr, const Ray& ray, double& t);
} // namespace detail

} // namespace dxnn::kernels
