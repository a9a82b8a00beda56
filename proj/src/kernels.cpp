#include "qstr/kernels.hpp"

#include <cassert>

#include "qstr/error.hpp"
#include "kernels_detail.hpp"

namespace qstr::kernels {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double l2sq_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

namespace {

using KernelFn = double (*)(const double*, const double*, std::size_t);

struct Dispatch {
    Isa isa;
    KernelFn dot;
    KernelFn l2sq;
};

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Dispatch make_dispatch(Isa isa) {
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::Avx2:
            return {Isa::Avx2, &detail::dot_avx2, &detail::l2sq_avx2};
#endif
#if defined(__aarch64__)
        case Isa::Neon:
            return {Isa::Neon, &detail::dot_neon, &detail::l2sq_neon};
#endif
        default:
            return {Isa::Scalar, &dot_scalar, &l2sq_scalar};
    }
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch(detected_isa());
    return d;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

Isa detected_isa() {
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Isa active_isa() {
    return dispatch().isa;
}

void force_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw Error("kernels", std::string("ISA not supported on this host: ") +
                                   std::string(isa_name(isa)));
    }
    dispatch() = make_dispatch(isa);
}

void reset_isa() {
    dispatch() = make_dispatch(detected_isa());
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return dispatch().dot(a.data(), b.data(), a.size());
}

double l2sq(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return dispatch().l2sq(a.data(), b.data(), a.size());
}

}  // namespace qstr::kernels
