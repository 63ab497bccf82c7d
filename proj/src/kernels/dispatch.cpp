#include "tables.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace aggseek::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar: return &scalar_table();
        case Isa::avx2:
#if defined(AGGSEEK_BUILD_AVX2)
            if (__builtin_cpu_supports("avx2")) return &avx2_table();
#endif
            return nullptr;
        case Isa::neon:
#if defined(AGGSEEK_BUILD_NEON)
            return &neon_table();
#else
            return nullptr;
#endif
    }
    return nullptr;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (table_for(isa) != nullptr) out.push_back(isa);
    }
    return out;
}

namespace {

const KernelTable& select() {
    if (const char* forced = std::getenv("AGGSEEK_SIMD"); forced != nullptr && *forced != '\0') {
        const std::string name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == to_string(isa)) {
                if (const KernelTable* t = table_for(isa)) return *t;
                throw std::runtime_error("AGGSEEK_SIMD=" + name + " is not available on this machine");
            }
        }
        if (name != "auto") throw std::runtime_error("AGGSEEK_SIMD: unknown variant '" + name + "'");
    }
    const auto isas = available_isas();
    return *table_for(isas.back());
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& chosen = select();
    return chosen;
}

}  // namespace aggseek::kernels
