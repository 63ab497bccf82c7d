#include "tables.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace aggseek::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline double select_max(double a, double b) { return a > b ? a : b; }
inline double select_min(double a, double b) { return a < b ? a : b; }

void box_euler_step(const BoxArrays& box, std::span<const double> bias, std::span<const double> x, double h,
                    std::span<double> out) {
    const std::size_t count = x.size();
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t e = 0;
    for (; e + kLanes <= count; e += kLanes) {
        const __m256d xv = _mm256_loadu_pd(&x[e]);
        const __m256d diff = _mm256_sub_pd(xv, _mm256_loadu_pd(&box.xstar[e]));
        const __m256d g = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(&box.ell[e]), diff), _mm256_loadu_pd(&bias[e]));
        const __m256d y = _mm256_sub_pd(xv, _mm256_mul_pd(vh, g));
        const __m256d lifted = _mm256_max_pd(y, _mm256_loadu_pd(&box.lo[e]));
        _mm256_storeu_pd(&out[e], _mm256_min_pd(lifted, _mm256_loadu_pd(&box.hi[e])));
    }
    for (; e < count; ++e) {
        const double g = box.ell[e] * (x[e] - box.xstar[e]) + bias[e];
        const double y = x[e] - h * g;
        out[e] = select_min(select_max(y, box.lo[e]), box.hi[e]);
    }
}

double box_tangent_drive_norm(const BoxArrays& box, std::span<const double> bias, std::span<const double> x,
                              double active_tol) {
    const std::size_t count = x.size();
    const __m256d zero = _mm256_setzero_pd();
    const __m256d tol = _mm256_set1_pd(active_tol);
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d worst_v = zero;
    std::size_t e = 0;
    for (; e + kLanes <= count; e += kLanes) {
        const __m256d xv = _mm256_loadu_pd(&x[e]);
        const __m256d diff = _mm256_sub_pd(xv, _mm256_loadu_pd(&box.xstar[e]));
        const __m256d g = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(&box.ell[e]), diff), _mm256_loadu_pd(&bias[e]));
        const __m256d d = _mm256_xor_pd(g, sign);
        const __m256d at_lo = _mm256_cmp_pd(_mm256_sub_pd(xv, _mm256_loadu_pd(&box.lo[e])), tol, _CMP_LE_OQ);
        const __m256d at_hi = _mm256_cmp_pd(_mm256_sub_pd(_mm256_loadu_pd(&box.hi[e]), xv), tol, _CMP_LE_OQ);
        const __m256d blocked =
            _mm256_or_pd(_mm256_and_pd(at_lo, _mm256_cmp_pd(d, zero, _CMP_LT_OQ)),
                         _mm256_and_pd(at_hi, _mm256_cmp_pd(d, zero, _CMP_GT_OQ)));
        const __m256d magnitude = _mm256_andnot_pd(sign, d);
        worst_v = _mm256_max_pd(_mm256_andnot_pd(blocked, magnitude), worst_v);
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, worst_v);
    double worst = 0.0;
    for (double v : lanes) worst = select_max(v, worst);
    for (; e < count; ++e) {
        const double d = -(box.ell[e] * (x[e] - box.xstar[e]) + bias[e]);
        const bool blocked_lo = x[e] - box.lo[e] <= active_tol && d < 0.0;
        const bool blocked_hi = box.hi[e] - x[e] <= active_tol && d > 0.0;
        const double a = (blocked_lo || blocked_hi) ? 0.0 : std::fabs(d);
        worst = select_max(a, worst);
    }
    return worst;
}

void box_best_response(const BoxArrays& box, std::span<const double> bias, std::span<double> out) {
    const std::size_t count = out.size();
    std::size_t e = 0;
    for (; e + kLanes <= count; e += kLanes) {
        const __m256d shift = _mm256_div_pd(_mm256_loadu_pd(&bias[e]), _mm256_loadu_pd(&box.ell[e]));
        const __m256d y = _mm256_sub_pd(_mm256_loadu_pd(&box.xstar[e]), shift);
        const __m256d lifted = _mm256_max_pd(y, _mm256_loadu_pd(&box.lo[e]));
        _mm256_storeu_pd(&out[e], _mm256_min_pd(lifted, _mm256_loadu_pd(&box.hi[e])));
    }
    for (; e < count; ++e) {
        const double y = box.xstar[e] - bias[e] / box.ell[e];
        out[e] = select_min(select_max(y, box.lo[e]), box.hi[e]);
    }
}

void strided_sum(std::span<const double> x, std::span<double> sums) {
    const std::size_t stride = sums.size();
    const std::size_t count = x.size();
    std::fill(sums.begin(), sums.end(), 0.0);
    if (stride == 0 || kLanes % stride != 0) {
        for (std::size_t e = 0; e < count; e += stride) {
            for (std::size_t j = 0; j < stride; ++j) sums[j] += x[e + j];
        }
        return;
    }
    // Lane l accumulates coordinate l % stride; two accumulators for ILP.
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t e = 0;
    for (; e + 2 * kLanes <= count; e += 2 * kLanes) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(&x[e]));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(&x[e + kLanes]));
    }
    for (; e + kLanes <= count; e += kLanes) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(&x[e]));
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    for (std::size_t l = 0; l < kLanes; ++l) sums[l % stride] += lanes[l];
    for (; e < count; ++e) sums[e % stride] += x[e];
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{Isa::avx2, &box_euler_step, &box_tangent_drive_norm, &box_best_response,
                                   &strided_sum};
    return table;
}

}  // namespace aggseek::kernels
