#include "layersep/neighbors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <utility>

#include "layersep/error.hpp"

namespace layersep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kQueryBlock = 32;
constexpr std::size_t kCandidateBlock = 128;

void require_both_classes(const LabeledPointSet& set) {
  for (Label c = 0; c < 2; ++c) {
    if (set.class_count(c) == 0) {
      throw Error(ErrorCode::EmptyClass,
                  "class " + std::to_string(static_cast<int>(c)) +
                      " has no members; nearmiss is undefined");
    }
  }
}

// Best (value, index) so far, compared lexicographically.
struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::uint32_t index = kNoNeighbor;

  void offer(double v, std::uint32_t j) noexcept {
    if (v < value || (v == value && j < index)) {
      value = v;
      index = j;
    }
  }
};

void fill_result(NeighborResult& r, std::size_t i, const Best& hit,
                 const Best& miss) {
  r.nearmiss_index[i] = miss.index;
  r.nearmiss_distance[i] = std::sqrt(miss.value);
  if (hit.index == kNoNeighbor) {
    r.nearhit_index[i] = kNoNeighbor;
    r.nearhit_distance[i] = std::numeric_limits<double>::quiet_NaN();
    r.nn_index[i] = miss.index;
    r.nn_distance[i] = r.nearmiss_distance[i];
    return;
  }
  r.nearhit_index[i] = hit.index;
  r.nearhit_distance[i] = std::sqrt(hit.value);
  const bool hit_wins =
      hit.value < miss.value || (hit.value == miss.value && hit.index < miss.index);
  r.nn_index[i] = hit_wins ? hit.index : miss.index;
  r.nn_distance[i] = hit_wins ? r.nearhit_distance[i] : r.nearmiss_distance[i];
}

NeighborResult make_result(std::size_t n) {
  NeighborResult r;
  r.nn_index.resize(n);
  r.nn_distance.resize(n);
  r.nearhit_index.resize(n);
  r.nearhit_distance.resize(n);
  r.nearmiss_index.resize(n);
  r.nearmiss_distance.resize(n);
  return r;
}

// Approximate squared distances that lie within `window` of the smallest one
// seen so far. The true minimiser is always among the survivors.
class CandidateList {
 public:
  void reset(double window) {
    window_ = window;
    best_ = std::numeric_limits<double>::infinity();
    items_.clear();
    prune_at_ = 32;
  }

  void offer(double v, std::uint32_t j) {
    if (v > best_ + window_) return;
    if (v < best_) best_ = v;
    items_.emplace_back(v, j);
    if (items_.size() >= prune_at_) {
      prune();
      prune_at_ = std::max<std::size_t>(32, 2 * items_.size());
    }
  }

  template <typename Exact>
  Best resolve(Exact&& exact) {
    prune();
    Best b;
    for (const auto& [v, j] : items_) b.offer(exact(j), j);
    return b;
  }

 private:
  void prune() {
    const double limit = best_ + window_;
    std::erase_if(items_, [&](const auto& it) { return it.first > limit; });
  }

  double window_ = 0.0;
  double best_ = 0.0;
  std::size_t prune_at_ = 32;
  std::vector<std::pair<double, std::uint32_t>> items_;
};

unsigned resolve_threads(unsigned requested, std::size_t work_items) {
  unsigned t = requested;
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(
      std::min<std::size_t>(t, std::max<std::size_t>(1, work_items)));
}

}  // namespace

bool operator==(const NeighborResult& a, const NeighborResult& b) {
  const auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](double p, double q) {
      return p == q || (std::isnan(p) && std::isnan(q));
    });
  };
  return a.nn_index == b.nn_index && a.nearhit_index == b.nearhit_index &&
         a.nearmiss_index == b.nearmiss_index && same(a.nn_distance, b.nn_distance) &&
         same(a.nearhit_distance, b.nearhit_distance) &&
         same(a.nearmiss_distance, b.nearmiss_distance);
}

double reference_squared_distance(std::span<const double> a,
                                  std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

NeighborResult all_nearest_reference(const LabeledPointSet& set) {
  require_both_classes(set);
  const std::size_t n = set.size();
  NeighborResult r = make_result(n);
  for (std::size_t i = 0; i < n; ++i) {
    Best hit;
    Best miss;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = reference_squared_distance(set.point(i), set.point(j));
      (set.label(j) == set.label(i) ? hit : miss)
          .offer(v, static_cast<std::uint32_t>(j));
    }
    fill_result(r, i, hit, miss);
  }
  return r;
}

NeighborResult all_nearest(const LabeledPointSet& set,
                           const NeighborOptions& options) {
  require_both_classes(set);
  const std::size_t n = set.size();
  const std::size_t d = set.dim();
  if (n >= kNoNeighbor) {
    throw Error(ErrorCode::InvalidArgument, "too many points for 32-bit indices");
  }
  const auto& table = kernels::kernel_table(options.isa.value_or(kernels::detect_isa()));

  // Gram-trick selection works on mean-centred coordinates, which keeps the
  // norms (and hence the rounding window) small for offset data.
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = set.point(i);
    for (std::size_t k = 0; k < d; ++k) mean[k] += p[k];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  std::vector<double> centred(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = set.point(i);
    for (std::size_t k = 0; k < d; ++k) centred[i * d + k] = p[k] - mean[k];
  }
  std::vector<double> norms(n);
  table.row_norms(centred.data(), n, d, d, norms.data());
  const double max_norm = *std::max_element(norms.begin(), norms.end());

  // Bound on |approx - exact| covering the dot-product, norm, centring and
  // reference-sum rounding, doubled for both sides of the comparison.
  const double window_scale = 16.0 * static_cast<double>(d + 8) * kEps;

  NeighborResult result = make_result(n);
  const auto labels = set.labels();
  const std::size_t blocks = (n + kQueryBlock - 1) / kQueryBlock;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::vector<double> tile(kQueryBlock * kCandidateBlock);
    std::vector<CandidateList> hits(kQueryBlock);
    std::vector<CandidateList> misses(kQueryBlock);
    for (std::size_t blk = next.fetch_add(1); blk < blocks;
         blk = next.fetch_add(1)) {
      const std::size_t q0 = blk * kQueryBlock;
      const std::size_t qn = std::min(kQueryBlock, n - q0);
      for (std::size_t q = 0; q < qn; ++q) {
        const double w = window_scale * (norms[q0 + q] + max_norm);
        hits[q].reset(w);
        misses[q].reset(w);
      }
      for (std::size_t c0 = 0; c0 < n; c0 += kCandidateBlock) {
        const std::size_t cn = std::min(kCandidateBlock, n - c0);
        table.dot_tile(centred.data() + q0 * d, qn, centred.data() + c0 * d, cn,
                       d, d, tile.data(), kCandidateBlock);
        for (std::size_t q = 0; q < qn; ++q) {
          const std::size_t i = q0 + q;
          const double ni = norms[i];
          const Label li = labels[i];
          const double* row = tile.data() + q * kCandidateBlock;
          for (std::size_t c = 0; c < cn; ++c) {
            const std::size_t j = c0 + c;
            if (j == i) continue;
            const double v = ni + norms[j] - 2.0 * row[c];
            (labels[j] == li ? hits[q] : misses[q])
                .offer(v, static_cast<std::uint32_t>(j));
          }
        }
      }
      for (std::size_t q = 0; q < qn; ++q) {
        const std::size_t i = q0 + q;
        auto exact = [&](std::uint32_t j) {
          return reference_squared_distance(set.point(i), set.point(j));
        };
        const Best hit = hits[q].resolve(exact);
        const Best miss = misses[q].resolve(exact);
        fill_result(result, i, hit, miss);
      }
    }
  };

  const unsigned threads = resolve_threads(options.threads, blocks);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

}  // namespace layersep
