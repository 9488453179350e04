#include "yodet/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "variants.hpp"

namespace yodet::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(YODET_HAVE_AVX2_BUILD) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* best_ops() {
#ifdef YODET_HAVE_AVX2_BUILD
    if (cpu_has_avx2_fma())
        return &avx2_ops();
#endif
#ifdef YODET_HAVE_NEON_BUILD
    return &neon_ops();
#endif
    return &scalar_ops();
}

const Ops* find_ops(std::string_view name) {
    if (name == "scalar")
        return &scalar_ops();
    if (name == "auto" || name.empty())
        return best_ops();
#ifdef YODET_HAVE_AVX2_BUILD
    if (name == "avx2" && cpu_has_avx2_fma())
        return &avx2_ops();
#endif
#ifdef YODET_HAVE_NEON_BUILD
    if (name == "neon")
        return &neon_ops();
#endif
    return nullptr;
}

std::atomic<const Ops*>& selection() {
    static std::atomic<const Ops*> current{[] {
        if (const char* env = std::getenv("YODET_KERNELS")) {
            if (const Ops* ops = find_ops(env))
                return ops;
        }
        return best_ops();
    }()};
    return current;
}

} // namespace

const Ops& active_ops() {
    return *selection().load(std::memory_order_relaxed);
}

bool select_ops(std::string_view name) {
    const Ops* ops = find_ops(name);
    if (!ops)
        return false;
    selection().store(ops, std::memory_order_relaxed);
    return true;
}

std::vector<const Ops*> available_ops() {
    std::vector<const Ops*> out{&scalar_ops()};
#ifdef YODET_HAVE_AVX2_BUILD
    if (cpu_has_avx2_fma())
        out.push_back(&avx2_ops());
#endif
#ifdef YODET_HAVE_NEON_BUILD
    out.push_back(&neon_ops());
#endif
    return out;
}

} // namespace yodet::kernels
