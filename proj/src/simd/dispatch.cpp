#include "qdhom/error.hpp"
#include "qdhom/simd/kernels.hpp"

#include <atomic>

namespace qdhom::simd {

#ifndef QDHOM_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(QDHOM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") &&
               __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa detect_isa() { return cpu_supports(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace {

const KernelTable* table_for(Isa isa) {
    return isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> ptr{table_for(detect_isa())};
    return ptr;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
    if (!cpu_supports(isa)) {
        throw ValidationError("instruction set '" + std::string(to_string(isa)) +
                              "' is not available on this build/CPU");
    }
    current().store(table_for(isa), std::memory_order_release);
}

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    if (name == "auto") return detect_isa();
    throw ValidationError("unknown instruction set '" + std::string(name) +
                          "' (expected scalar, avx2 or auto)");
}

}  // namespace qdhom::simd
