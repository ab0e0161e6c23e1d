#include <cstdlib>
#include <stdexcept>

#include "qmle/kernels.hpp"

namespace qmle::kernels {

bool avx2_supported() {
#if defined(QMLE_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Impl* resolve(const std::string& name) {
    if (name == "scalar") return &scalar_impl();
    if (name == "avx2") {
#if defined(QMLE_HAVE_AVX2)
        if (avx2_supported()) return &avx2_impl();
#endif
        throw std::runtime_error("kernel 'avx2' not available on this machine");
    }
    if (name == "auto") {
#if defined(QMLE_HAVE_AVX2)
        if (avx2_supported()) return &avx2_impl();
#endif
        return &scalar_impl();
    }
    throw std::invalid_argument("unknown kernel '" + name + "' (auto|scalar|avx2)");
}

const Impl*& current() {
    static const Impl* impl = [] {
        const char* env = std::getenv("QMLE_KERNEL");
        return resolve(env && *env ? env : "auto");
    }();
    return impl;
}

}  // namespace

const Impl& active() { return *current(); }

void set_active(const std::string& name) { current() = resolve(name); }

std::string active_name() { return current()->name; }

}  // namespace qmle::kernels
