#include "tables.hpp"

#include <algorithm>
#include <cmath>

namespace aggseek::kernels {
namespace {

// Comparison-select forms match the max/min instructions of the vector
// variants, including which operand wins on signed zeros.
inline double select_max(double a, double b) { return a > b ? a : b; }
inline double select_min(double a, double b) { return a < b ? a : b; }

void box_euler_step(const BoxArrays& box, std::span<const double> bias, std::span<const double> x, double h,
                    std::span<double> out) {
    const std::size_t count = x.size();
    for (std::size_t e = 0; e < count; ++e) {
        const double g = box.ell[e] * (x[e] - box.xstar[e]) + bias[e];
        const double y = x[e] - h * g;
        out[e] = select_min(select_max(y, box.lo[e]), box.hi[e]);
    }
}

double box_tangent_drive_norm(const BoxArrays& box, std::span<const double> bias, std::span<const double> x,
                              double active_tol) {
    double worst = 0.0;
    const std::size_t count = x.size();
    for (std::size_t e = 0; e < count; ++e) {
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
    for (std::size_t e = 0; e < count; ++e) {
        const double y = box.xstar[e] - bias[e] / box.ell[e];
        out[e] = select_min(select_max(y, box.lo[e]), box.hi[e]);
    }
}

void strided_sum(std::span<const double> x, std::span<double> sums) {
    const std::size_t stride = sums.size();
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t e = 0; e < x.size(); e += stride) {
        for (std::size_t j = 0; j < stride; ++j) {
            sums[j] += x[e + j];
        }
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar, &box_euler_step, &box_tangent_drive_norm, &box_best_response,
                                   &strided_sum};
    return table;
}

}  // namespace aggseek::kernels
