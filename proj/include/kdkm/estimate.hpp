#pragma once

#include <cmath>
#include <cstdint>

namespace kdkm {

// Worst-case candidate-set storage for a degenerate (path-shaped) tree:
// (n-1) internal nodes, k candidates each, log2(k) levels alive at once.
// Callers pick the entry width; 1.0 reproduces raw entry counts and 1/8
// converts bit-sized entries to bytes. Expects n >= 2 and k >= 2.
inline double estimate_worst_case_bytes(std::uint64_t n, std::uint64_t k,
                                        double bytes_per_entry = 1.0) {
  return static_cast<double>(n - 1) * static_cast<double>(k) *
         std::log2(static_cast<double>(k)) * bytes_per_entry;
}

}  // namespace kdkm
