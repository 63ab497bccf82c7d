#pragma once

// Data-parallel inner loops over the flattened agent-major arrays of an
// all-box game. Each variant (scalar reference, AVX2, NEON) implements the same
// table; the elementwise kernels are bitwise identical across variants, the
// reductions agree to rounding.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace aggseek::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view to_string(Isa isa);

/// Per-element box game data, all of length N*n.
struct BoxArrays {
    std::span<const double> ell;
    std::span<const double> xstar;
    std::span<const double> lo;
    std::span<const double> hi;
};

struct KernelTable {
    Isa isa;

    /// out = clamp(x - h (ell (x - xstar) + bias), lo, hi)
    void (*box_euler_step)(const BoxArrays& box, std::span<const double> bias, std::span<const double> x,
                           double h, std::span<double> out);

    /// max |Pi(x, d)| with d = -(ell (x - xstar) + bias); components pushing
    /// out through an active face (within active_tol) count as zero.
    double (*box_tangent_drive_norm)(const BoxArrays& box, std::span<const double> bias,
                                     std::span<const double> x, double active_tol);

    /// out = clamp(xstar - bias / ell, lo, hi)
    void (*box_best_response)(const BoxArrays& box, std::span<const double> bias, std::span<double> out);

    /// sums[j] = sum_i x[i*stride + j], stride == sums.size()
    void (*strided_sum)(std::span<const double> x, std::span<double> sums);
};

/// Variants compiled in and supported by the running CPU.
[[nodiscard]] std::vector<Isa> available_isas();

/// Table for a specific variant, or nullptr when unavailable.
[[nodiscard]] const KernelTable* table_for(Isa isa);

/// Table chosen at first use: AGGSEEK_SIMD=scalar|avx2|neon forces a variant,
/// otherwise the widest available one.
[[nodiscard]] const KernelTable& active();

}  // namespace aggseek::kernels
