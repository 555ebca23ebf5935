#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace promptopic::vecops {

/// Kernel backend. Auto picks the widest instruction set the CPU supports.
enum class Backend { scalar, avx2 };

/// Active backend after dispatch (scalar on non-x86 or pre-AVX2 CPUs).
Backend active_backend();
std::string backend_name(Backend b);

/// Forces a backend for the current process (testing hook). Requesting an
/// unsupported backend falls back to scalar.
void force_backend(Backend b);

/// Dot product with double accumulation; dispatched to the active backend.
double dot(std::span<const float> a, std::span<const float> b);

/// Euclidean norm, double accumulation.
double norm(std::span<const float> a);

/// Cosine similarity. Throws ZeroVector when either norm is zero.
double cosine(std::span<const float> a, std::span<const float> b);

// Reference kernels; the SIMD variants are equivalence-tested against these.
namespace detail {
double dot_scalar(const float* a, const float* b, std::size_t n);
double norm_sq_scalar(const float* a, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const float* a, const float* b, std::size_t n);
double norm_sq_avx2(const float* a, std::size_t n);
#endif
}  // namespace detail

}  // namespace promptopic::vecops
