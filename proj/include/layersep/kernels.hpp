#pragma once

// Inner loops of the nearest-neighbour engine. Each kernel has a portable
// scalar reference and, where the CPU supports it, an AVX2/FMA variant chosen
// at runtime. Variants agree to within floating-point reassociation error.

#include <cstddef>
#include <string_view>

namespace layersep::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best variant this CPU can run (and this binary was built with).
Isa detect_isa();

/// Whether `isa` can execute on this CPU.
bool isa_available(Isa isa);

/// out[i] = sum_k x[i*stride + k]^2 for i in [0, rows).
using RowNormsFn = void (*)(const double* x, std::size_t rows, std::size_t dim,
                            std::size_t stride, double* out);

/// Dot-product tile: out[q*out_stride + c] = <a_q, b_c> for q in [0, qa),
/// c in [0, cb). Rows of a and b are `dim` long and `stride` apart.
using DotTileFn = void (*)(const double* a, std::size_t qa, const double* b,
                           std::size_t cb, std::size_t dim, std::size_t stride,
                           double* out, std::size_t out_stride);

struct KernelTable {
  Isa isa;
  RowNormsFn row_norms;
  DotTileFn dot_tile;
};

/// Kernel table for `isa`; throws Error(InvalidArgument) if unavailable.
const KernelTable& kernel_table(Isa isa);

namespace scalar {
void row_norms(const double* x, std::size_t rows, std::size_t dim,
               std::size_t stride, double* out);
void dot_tile(const double* a, std::size_t qa, const double* b, std::size_t cb,
              std::size_t dim, std::size_t stride, double* out,
              std::size_t out_stride);
}  // namespace scalar

#if defined(LAYERSEP_HAVE_AVX2)
namespace avx2 {
void row_norms(const double* x, std::size_t rows, std::size_t dim,
               std::size_t stride, double* out);
void dot_tile(const double* a, std::size_t qa, const double* b, std::size_t cb,
              std::size_t dim, std::size_t stride, double* out,
              std::size_t out_stride);
}  // namespace avx2
#endif

}  // namespace layersep::kernels
