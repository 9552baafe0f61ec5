#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "dxnn/kernels.hpp"

namespace dxnn::kernels::detail {

RayHit nearest_hit_avx2(const Circles& circles, const Ray& ray)
{
    const __m256d ox = _mm256_set1_pd(ray.ox);
    const __m256d oy = _mm256_set1_pd(ray.oy);
    const __m256d dx = _mm256_set1_pd(ray.dx);
    const __m256d dy = _mm256_set1_pd(ray.dy);
    const __m256d max_t = _mm256_set1_pd(ray.max_t);
    const __m256d zero = _mm256_setzero_pd();
    const __m256i skip = _mm256_set1_epi64x(static_cast<long long>(ray.skip));
    const __m256i step = _mm256_set1_epi64x(4);

    __m256d best_t = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256i best_i = _mm256_set1_epi64x(-1);
    __m256d any = _mm256_setzero_pd();
    __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);

    std::size_t i = 0;
    for (; i + 4 <= circles.n; i += 4) {
        const __m256d cx = _mm256_loadu_pd(circles.x + i);
        const __m256d cy = _mm256_loadu_pd(circles.y + i);
        const __m256d cr = _mm256_loadu_pd(circles.r + i);
        const __m256d fx = _mm256_sub_pd(cx, ox);
        const __m256d fy = _mm256_sub_pd(cy, oy);
        const __m256d b = _mm256_add_pd(_mm256_mul_pd(fx, dx), _mm256_mul_pd(fy, dy));
        const __m256d c =
            _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(fx, fx), _mm256_mul_pd(fy, fy)), _mm256_mul_pd(cr, cr));
        const __m256d inside = _mm256_cmp_pd(c, zero, _CMP_LE_OQ);
        const __m256d disc = _mm256_sub_pd(_mm256_mul_pd(b, b), c);
        const __m256d t_out = _mm256_sub_pd(b, _mm256_sqrt_pd(disc));
        const __m256d ahead = _mm256_and_pd(_mm256_cmp_pd(disc, zero, _CMP_GE_OQ), _mm256_cmp_pd(b, zero, _CMP_GT_OQ));
        const __m256d in_range = _mm256_and_pd(ahead, _mm256_cmp_pd(t_out, max_t, _CMP_LE_OQ));
        const __m256d t = _mm256_blendv_pd(t_out, zero, inside);
        __m256d hit = _mm256_or_pd(inside, in_range);
        const __m256d not_skip = _mm256_castsi256_pd(
            _mm256_xor_si256(_mm256_cmpeq_epi64(idx, skip), _mm256_set1_epi64x(-1)));
        hit = _mm256_and_pd(hit, not_skip);
        const __m256d first = _mm256_andnot_pd(any, hit);
        const __m256d better = _mm256_or_pd(first, _mm256_and_pd(hit, _mm256_cmp_pd(t, best_t, _CMP_LT_OQ)));
        best_t = _mm256_blendv_pd(best_t, t, better);
        best_i = _mm256_castpd_si256(
            _mm256_blendv_pd(_mm256_castsi256_pd(best_i), _mm256_castsi256_pd(idx), better));
        any = _mm256_or_pd(any, hit);
        idx = _mm256_add_epi64(idx, step);
    }

    alignas(32) double lane_t[4];
    alignas(32) std::int64_t lane_i[4];
    _mm256_store_pd(lane_t, best_t);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lane_i), best_i);

    RayHit best;
    for (int k = 0; k < 4; ++k) {
        if (lane_i[k] < 0)
            continue;
        const auto li = static_cast<std::size_t>(lane_i[k]);
        if (best.index == kNoHit || lane_t[k] < best.t || (lane_t[k] == best.t && li < best.index)) {
            best.index = li;
            best.t = lane_t[k];
        }
    }
    for (; i < circles.n; ++i) {
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

void overlaps_avx2(const Circles& circles, double px, double py, double pr, std::size_t skip,
                   std::vector<std::size_t>& out)
{
    const __m256d vx = _mm256_set1_pd(px);
    const __m256d vy = _mm256_set1_pd(py);
    const __m256d vr = _mm256_set1_pd(pr);
    std::size_t i = 0;
    for (; i + 4 <= circles.n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(circles.x + i), vx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(circles.y + i), vy);
        const __m256d rr = _mm256_add_pd(_mm256_loadu_pd(circles.r + i), vr);
        const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, _mm256_mul_pd(rr, rr), _CMP_LT_OQ));
        while (mask != 0) {
            const int k = __builtin_ctz(static_cast<unsigned>(mask));
            mask &= mask - 1;
            if (i + static_cast<std::size_t>(k) != skip)
                out.push_back(i + static_cast<std::size_t>(k));
        }
    }
    for (; i < circles.n; ++i) {
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
