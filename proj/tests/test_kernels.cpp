#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dxnn/kernels.hpp"
#include "dxnn/random.hpp"

using namespace dxnn;
using namespace dxnn::kernels;

namespace {

struct Scene {
    std::vector<double> x, y, r;
    Circles circles() const { return Circles{x.data(), y.data(), r.data(), x.size()}; }
};

Scene random_scene(Rng& rng, std::size_t n)
{
    Scene s;
    for (std::size_t i = 0; i < n; ++i) {
        s.x.push_back(uniform_real(rng, -100.0, 100.0));
        s.y.push_back(uniform_real(rng, -100.0, 100.0));
        s.r.push_back(uniform_real(rng, 1.0, 12.0));
    }
    return s;
}

Ray random_ray(Rng& rng, std::size_t n)
{
    Ray ray;
    ray.ox = uniform_real(rng, -100.0, 100.0);
    ray.oy = uniform_real(rng, -100.0, 100.0);
    const double a = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
    ray.dx = std::cos(a);
    ray.dy = std::sin(a);
    ray.max_t = uniform_real(rng, 10.0, 400.0);
    ray.skip = (n > 0 && bernoulli(rng, 0.5)) ? uniform_index(rng, n) : kNoHit;
    return ray;
}

// First circle reached by walking the ray in steps of `step`.
std::size_t sampled_first_hit(const Scene& s, const Ray& ray, double step)
{
    for (double t = 0.0; t <= ray.max_t; t += step) {
        const double px = ray.ox + t * ray.dx, py = ray.oy + t * ray.dy;
        std::size_t best = kNoHit;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i == ray.skip)
                continue;
            const double dx = px - s.x[i], dy = py - s.y[i];
            if (dx * dx + dy * dy <= s.r[i] * s.r[i]) {
                best = i;
                break;
            }
        }
        if (best != kNoHit)
            return best;
    }
    return kNoHit;
}

} // namespace

TEST_CASE("scalar ray cast agrees with point sampling")
{
    Rng rng(31);
    std::size_t hits = 0, agreed = 0, total = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Scene s = random_scene(rng, 12);
        Ray ray = random_ray(rng, 12);
        ray.max_t = 150.0;
        const RayHit hit = scalar_kernels().nearest_hit(s.circles(), ray);
        const std::size_t sampled = sampled_first_hit(s, ray, 0.001);
        ++total;
        if (hit.index != kNoHit)
            ++hits;
        if (hit.index == sampled) {
            ++agreed;
        } else {
            // Only a graze thinner than the sampling step may disagree.
            REQUIRE(hit.index != kNoHit);
            const double dx = ray.ox + hit.t * ray.dx - s.x[hit.index];
            const double dy = ray.oy + hit.t * ray.dy - s.y[hit.index];
            CHECK(std::hypot(dx, dy) == doctest::Approx(s.r[hit.index]).epsilon(1e-9));
        }
    }
    CHECK(hits > 5);
    CHECK(agreed >= total - 2);
}

TEST_CASE("ray origin inside a circle reports distance zero")
{
    const Scene s{{0.0}, {0.0}, {5.0}};
    Ray ray;
    ray.ox = 1.0;
    const RayHit hit = scalar_kernels().nearest_hit(s.circles(), ray);
    CHECK(hit.index == 0);
    CHECK(hit.t == 0.0);
}

TEST_CASE("ties go to the lower index and touching discs do not overlap")
{
    const Scene s{{10.0, 10.0, 30.0}, {0.0, 0.0, 0.0}, {2.0, 2.0, 10.0}};
    Ray ray;
    CHECK(scalar_kernels().nearest_hit(s.circles(), ray).index == 0);
    std::vector<std::size_t> out;
    scalar_kernels().overlaps(s.circles(), 13.0, 0.0, 2.0, kNoHit, out);
    CHECK(out == std::vector<std::size_t>{0, 1});
    out.clear();
    scalar_kernels().overlaps(s.circles(), 10.0, 5.0, 3.0, kNoHit, out);
    CHECK(out.empty());
}

TEST_CASE("SIMD kernels are bit-identical to the scalar reference")
{
    const KernelTable* simd = avx2_kernels();
    if (simd == nullptr) {
        MESSAGE("no SIMD kernels on this machine; comparing the scalar table with itself");
        simd = &scalar_kernels();
    }
    Rng rng(77);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = uniform_int(rng, 0, 37);
        const Scene s = random_scene(rng, n);
        const Ray ray = random_ray(rng, n);
        const RayHit a = scalar_kernels().nearest_hit(s.circles(), ray);
        const RayHit b = simd->nearest_hit(s.circles(), ray);
        REQUIRE(a.index == b.index);
        if (a.index != kNoHit)
            REQUIRE(a.t == b.t);

        std::vector<std::size_t> oa, ob;
        const double px = uniform_real(rng, -100.0, 100.0), py = uniform_real(rng, -100.0, 100.0);
        const double pr = uniform_real(rng, 1.0, 30.0);
        scalar_kernels().overlaps(s.circles(), px, py, pr, ray.skip, oa);
        simd->overlaps(s.circles(), px, py, pr, ray.skip, ob);
        REQUIRE(oa == ob);
    }
}

TEST_CASE("active table is one of the known tables")
{
    const std::string_view name = active_kernels().name;
    CHECK((name == "scalar" || name == "avx2"));
}
