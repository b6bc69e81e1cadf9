#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace wordease {

/// Non-owning view of a sparse row. Indices are strictly increasing.
struct SparseView {
  std::span<const std::uint32_t> indices;
  std::span<const double> values;

  [[nodiscard]] std::size_t nnz() const noexcept { return indices.size(); }

  [[nodiscard]] double dot(std::span<const double> dense) const noexcept {
    double sum = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) sum += values[k] * dense[indices[k]];
    return sum;
  }

  [[nodiscard]] double squared_norm() const noexcept {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return sum;
  }

  // y += scale * this
  void axpy(double scale, std::span<double> y) const noexcept {
    for (std::size_t k = 0; k < indices.size(); ++k) y[indices[k]] += scale * values[k];
  }
};

/// Owning sparse vector.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  [[nodiscard]] SparseView view() const noexcept { return {indices, values}; }

  static SparseVector from_view(SparseView v) {
    return {{v.indices.begin(), v.indices.end()}, {v.values.begin(), v.values.end()}};
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

inline double dot(SparseView a, SparseView b) noexcept {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] < b.indices[j]) {
      ++i;
    } else if (b.indices[j] < a.indices[i]) {
      ++j;
    } else {
      sum += a.values[i++] * b.values[j++];
    }
  }
  return sum;
}

inline double cosine(SparseView a, SparseView b) noexcept {
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / std::sqrt(na * nb);
}

}  // namespace wordease
