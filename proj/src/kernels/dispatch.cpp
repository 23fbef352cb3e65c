#include "layersep/error.hpp"
#include "layersep/kernels.hpp"

namespace layersep::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(LAYERSEP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() {
  static const Isa best = isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  return best;
}

const KernelTable& kernel_table(Isa isa) {
  static const KernelTable scalar_table{Isa::Scalar, &scalar::row_norms,
                                        &scalar::dot_tile};
#if defined(LAYERSEP_HAVE_AVX2)
  static const KernelTable avx2_table{Isa::Avx2, &avx2::row_norms,
                                      &avx2::dot_tile};
#endif
  if (!isa_available(isa)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("kernel variant not available: ") +
                    std::string(to_string(isa)));
  }
#if defined(LAYERSEP_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2_table;
#endif
  return scalar_table;
}

}  // namespace layersep::kernels
