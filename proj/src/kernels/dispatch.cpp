#include <cstdlib>
#include <string_view>

#include "dxnn/kernels.hpp"

namespace dxnn::kernels {

namespace detail {
#if defined(DXNN_HAVE_AVX2_KERNELS)
RayHit nearest_hit_avx2(const Circles& circles, const Ray& ray);
void overlaps_avx2(const Circles& circles, double px, double py, double pr, std::size_t skip,
                   std::vector<std::size_t>& out);
#endif
} // namespace detail

const KernelTable& scalar_kernels()
{
    static const KernelTable table{"scalar", detail::nearest_hit_scalar, detail::overlaps_scalar};
    return table;
}

const KernelTable* avx2_kernels()
{
#if defined(DXNN_HAVE_AVX2_KERNELS)
    static const KernelTable table{"avx2", detail::nearest_hit_avx2, detail::overlaps_avx2};
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels()
{
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("DXNN_KERNELS");
        if (env != nullptr && std::string_view(env) == "scalar")
            return scalar_kernels();
        if (const KernelTable* simd = avx2_kernels())
            return *simd;
        return scalar_kernels();
    }();
    return chosen;
}

} // namespace dxnn::kernels
