#pragma once

#include <cstddef>

// Internal declarations shared by the per-ISA translation units.

namespace qstr::kernels::detail {

#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t n);
double l2sq_avx2(const double* a, const double* b, std::size_t n);
#endif

#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t n);
double l2sq_neon(const double* a, const double* b, std::size_t n);
#endif

}  // namespace qstr::kernels::detail
