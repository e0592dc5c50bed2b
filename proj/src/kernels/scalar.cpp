#include <algorithm>
#include <bit>
#include <cmath>

#include "tables.hpp"

namespace ctfactor::kernels::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

void threshold_mask_scalar(const double* values, std::size_t n, double tau, std::uint64_t* bits) {
  const std::size_t words = words_for_bits(n);
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t word = 0;
    const std::size_t base = w * 64;
    const std::size_t end = std::min<std::size_t>(64, n - base);
    for (std::size_t b = 0; b < end; ++b) {
      if (std::fabs(values[base + b]) > tau) word |= std::uint64_t{1} << b;
    }
    bits[w] = word;
  }
}

bool is_subset_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w) {
    if (a[w] & ~b[w]) return false;
  }
  return true;
}

std::size_t and_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::size_t count = 0;
  for (std::size_t w = 0; w < words; ++w) count += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return count;
}

}  // namespace

const KernelTable scalar_table{
    &dot_scalar,
    &threshold_mask_scalar,
    &is_subset_scalar,
    &and_popcount_scalar,
};

}  // namespace ctfactor::kernels::detail
