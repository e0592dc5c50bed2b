#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the variant is chosen once at runtime from the
// CPU features (override with CT_FACTOR_KERNELS=scalar|avx2). Both variants
// are kept callable so tests can check them against each other.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ctfactor::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  /// Sum of a[k] * b[k].
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// Writes bit j of `bits` iff |values[j]| > tau (strict). Clears the
  /// padding bits of the last word. NaN never passes.
  void (*threshold_mask)(const double* values, std::size_t n, double tau, std::uint64_t* bits);
  /// True iff every bit set in `a` is also set in `b`.
  bool (*is_subset)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  /// Population count of a & b.
  std::size_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
};

bool available(Isa isa);
/// Throws DomainError if the variant was not compiled in or the CPU lacks it.
const KernelTable& table(Isa isa);
Isa active_isa();
const KernelTable& active();

inline constexpr std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline bool is_subset(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().is_subset(a.data(), b.data(), a.size());
}

inline std::size_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().and_popcount(a.data(), b.data(), a.size());
}

}  // namespace ctfactor::kernels
