#include "layersep/kernels.hpp"

namespace layersep::kernels::scalar {

void row_norms(const double* x, std::size_t rows, std::size_t dim,
               std::size_t stride, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = x + i * stride;
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += r[k] * r[k];
    out[i] = s;
  }
}

void dot_tile(const double* a, std::size_t qa, const double* b, std::size_t cb,
              std::size_t dim, std::size_t stride, double* out,
              std::size_t out_stride) {
  for (std::size_t q = 0; q < qa; ++q) {
    const double* ar = a + q * stride;
    for (std::size_t c = 0; c < cb; ++c) {
      const double* br = b + c * stride;
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += ar[k] * br[k];
      out[q * out_stride + c] = s;
    }
  }
}

}  // namespace layersep::kernels::scalar
