#include "tables.hpp"

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace aggseek::kernels {
namespace {

constexpr std::size_t kLanes = 2;

inline double select_max(double a, double b) { return a > b ? a : b; }
inline double select_min(double a, double b) { return a < b ? a : b; }

// vmaxq/vminq treat signed zeros differently from the scalar reference; use
// compare-and-select so results stay bitwise identical.
inline float64x2_t vselect_max(float64x2_t a, float64x2_t b) { return vbslq_f64(vcgtq_f64(a, b), a, b); }
inline float64x2_t vselect_min(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), a, b); }

void box_euler_step(const BoxArrays& box, std::span<const double> bias, std::span<const double> x, double h,
                    std::span<double> out) {
    const std::size_t count = x.size();
    const float64x2_t vh = vdupq_n_f64(h);
    std::size_t e = 0;
    for (; e + kLanes <= count; e += kLanes) {
        const float64x2_t xv = vld1q_f64(&x[e]);
        const float64x2_t diff = vsubq_f64(xv, vld1q_f64(&box.xstar[e]));
        const float64x2_t g = vaddq_f64(vmulq_f64(vld1q_f64(&box.ell[e]), diff), vld1q_f64(&bias[e]));
        const float64x2_t y = vsubq_f64(xv, vmulq_f64(vh, g));
        vst1q_f64(&out[e], vselect_min(vselect_max(y, vld1q_f64(&box.lo[e])), vld1q_f64(&box.hi[e])));
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
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t tol = vdupq_n_f64(active_tol);
    float64x2_t worst_v = zero;
    std::size_t e = 0;
    for (; e + kLanes <= count; e += kLanes) {
        const float64x2_t xv = vld1q_f64(&x[e]);
        const float64x2_t diff = vsubq_f64(xv, vld1q_f64(&box.xstar[e]));
        const float64x2_t g = vaddq_f64(vmulq_f64(vld1q_f64(&box.ell[e]), diff), vld1q_f64(&bias[e]));
        const float64x2_t d = vnegq_f64(g);
        const uint64x2_t at_lo = vcleq_f64(vsubq_f64(xv, vld1q_f64(&box.lo[e])), tol);
        const uint64x2_t at_hi = vcleq_f64(vsubq_f64(vld1q_f64(&box.hi[e]), xv), tol);
        const uint64x2_t blocked =
            vorrq_u64(vandq_u64(at_lo, vcltq_f64(d, zero)), vandq_u64(at_hi, vcgtq_f64(d, zero)));
        const float64x2_t a = vbslq_f64(blocked, zero, vabsq_f64(d));
        worst_v = vselect_max(a, worst_v);
    }
    double worst = select_max(vgetq_lane_f64(worst_v, 0), 0.0);
    worst = select_max(vgetq_lane_f64(worst_v, 1), worst);
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
        const float64x2_t shift = vdivq_f64(vld1q_f64(&bias[e]), vld1q_f64(&box.ell[e]));
        const float64x2_t y = vsubq_f64(vld1q_f64(&box.xstar[e]), shift);
        vst1q_f64(&out[e], vselect_min(vselect_max(y, vld1q_f64(&box.lo[e])), vld1q_f64(&box.hi[e])));
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
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t e = 0;
    for (; e + kLanes <= count; e += kLanes) acc = vaddq_f64(acc, vld1q_f64(&x[e]));
    sums[0 % stride] += vgetq_lane_f64(acc, 0);
    sums[1 % stride] += vgetq_lane_f64(acc, 1);
    for (; e < count; ++e) sums[e % stride] += x[e];
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{Isa::neon, &box_euler_step, &box_tangent_drive_norm, &box_best_response,
                                   &strided_sum};
    return table;
}

}  // namespace aggseek::kernels
