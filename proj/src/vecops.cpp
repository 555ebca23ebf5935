#include "promptopic/vecops.hpp"

#include <cmath>
#include <stdexcept>

#include "promptopic/errors.hpp"

namespace promptopic::vecops {

namespace detail {

double dot_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

double norm_sq_scalar(const float* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(a[i]);
    return acc;
}

}  // namespace detail

namespace {

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend g_backend = detect_backend();

}  // namespace

Backend active_backend() { return g_backend; }

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::avx2: return "avx2";
        case Backend::scalar: return "scalar";
    }
    return "scalar";
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && detect_backend() != Backend::avx2) b = Backend::scalar;
    g_backend = b;
}

double dot(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vecops::dot: length mismatch");
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) return detail::dot_avx2(a.data(), b.data(), a.size());
#endif
    return detail::dot_scalar(a.data(), b.data(), a.size());
}

double norm(std::span<const float> a) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) return std::sqrt(detail::norm_sq_avx2(a.data(), a.size()));
#endif
    return std::sqrt(detail::norm_sq_scalar(a.data(), a.size()));
}

double cosine(std::span<const float> a, std::span<const float> b) {
    double na = norm(a);
    double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw ZeroVector("cosine of a zero-norm vector");
    return dot(a, b) / (na * nb);
}

}  // namespace promptopic::vecops
