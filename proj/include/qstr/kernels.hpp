#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops shared by the vector-quantization and
// kernel-scoring stages. Each kernel has a scalar reference implementation and
// SIMD variants (AVX2 on x86-64, NEON on aarch64) selected once at runtime;
// the variants are equivalence-tested against the reference.

namespace qstr::kernels {

enum class Isa {
    Scalar,
    Avx2,
    Neon,
};

std::string_view isa_name(Isa isa);

/// Best ISA supported by the running CPU.
Isa detected_isa();

/// ISA currently used by dot()/l2sq().
Isa active_isa();

/// Override the dispatch, e.g. to pin Scalar in equivalence tests.
/// Throws qstr::Error if the host cannot execute the requested ISA.
void force_isa(Isa isa);

/// Restore the detected default.
void reset_isa();

/// Inner product a.b. Lengths must match.
double dot(std::span<const double> a, std::span<const double> b);

/// Squared Euclidean distance |a-b|^2. Lengths must match.
double l2sq(std::span<const double> a, std::span<const double> b);

// Reference implementations, always available regardless of dispatch.
double dot_scalar(const double* a, const double* b, std::size_t n);
double l2sq_scalar(const double* a, const double* b, std::size_t n);

}  // namespace qstr::kernels
