#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace boqc::qsim::detail {

// i-th index whose bit q is zero
inline std::size_t insert_zero(std::size_t i, unsigned q) {
  const std::size_t low = i & ((std::size_t{1} << q) - 1);
  return ((i >> q) << (q + 1)) | low;
}

// `sorted` ascending
inline std::size_t insert_zeros(std::size_t i, const std::vector<unsigned>& sorted) {
  for (unsigned q : sorted) i = insert_zero(i, q);
  return i;
}

struct ReducedLayout {
  std::vector<unsigned> sorted;      // traced-in qubits, ascending
  std::vector<std::size_t> offsets;  // offsets[x] = full-index bits for sub index x
};

inline ReducedLayout reduced_layout(const unsigned* qubits, unsigned k) {
  ReducedLayout l;
  l.sorted.assign(qubits, qubits + k);
  std::sort(l.sorted.begin(), l.sorted.end());
  l.offsets.resize(std::size_t{1} << k);
  for (std::size_t x = 0; x < l.offsets.size(); ++x) {
    std::size_t off = 0;
    for (unsigned j = 0; j < k; ++j) off |= ((x >> j) & 1u) << qubits[j];
    l.offsets[x] = off;
  }
  return l;
}

}  // namespace boqc::qsim::detail
