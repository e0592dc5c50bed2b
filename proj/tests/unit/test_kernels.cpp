#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "ctfactor/error.hpp"
#include "ctfactor/kernels.hpp"
#include "ctfactor/rng.hpp"

using namespace ctfactor;
namespace k = ctfactor::kernels;

namespace {

std::vector<std::uint64_t> random_words(std::size_t n, Rng& rng, double fill) {
  std::vector<std::uint64_t> w(n, 0);
  for (auto& x : w)
    for (int b = 0; b < 64; ++b)
      if (rng.bernoulli(fill)) x |= std::uint64_t{1} << b;
  return w;
}

}  // namespace

TEST_CASE("scalar kernels against naive loops") {
  const auto& s = k::table(k::Isa::scalar);
  Rng rng(11);
  for (std::size_t n = 0; n < 70; ++n) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng.normal(), b[i] = rng.normal();
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) ref += a[i] * b[i];
    CHECK(s.dot(a.data(), b.data(), n) == doctest::Approx(ref).epsilon(1e-12));

    std::vector<std::uint64_t> bits(k::words_for_bits(n) + 1, ~std::uint64_t{0});
    s.threshold_mask(a.data(), n, 0.5, bits.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(((bits[i / 64] >> (i % 64)) & 1) == (std::fabs(a[i]) > 0.5));
    if (n % 64 != 0) CHECK((bits[n / 64] >> (n % 64)) == 0);
  }
  const std::vector<std::uint64_t> a{0b1010, 0}, b{0b1110, 1};
  CHECK(s.is_subset(a.data(), b.data(), 2));
  CHECK_FALSE(s.is_subset(b.data(), a.data(), 2));
  CHECK(s.and_popcount(a.data(), b.data(), 2) == 2);
}

TEST_CASE("threshold mask is strict and rejects NaN") {
  const double v[4] = {0.5, -0.5, 0.5000001, std::numeric_limits<double>::quiet_NaN()};
  for (auto isa : {k::Isa::scalar, k::Isa::avx2}) {
    if (!k::available(isa)) continue;
    std::uint64_t bits = 0;
    k::table(isa).threshold_mask(v, 4, 0.5, &bits);
    CHECK(bits == 0b0100);
  }
}

TEST_CASE("AVX2 kernels match scalar kernels") {
  if (!k::available(k::Isa::avx2)) {
    MESSAGE("AVX2 variant not available here; equivalence not exercised");
    CHECK_THROWS_AS(k::table(k::Isa::avx2), DomainError);
    return;
  }
  const auto& s = k::table(k::Isa::scalar);
  const auto& v = k::table(k::Isa::avx2);
  Rng rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = rng.index(300);
    std::vector<double> a(n), b(n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-1.0, 1.0);
      b[i] = rng.uniform(-1.0, 1.0);
      mag += std::fabs(a[i] * b[i]);
    }
    CHECK(std::fabs(s.dot(a.data(), b.data(), n) - v.dot(a.data(), b.data(), n)) <= 1e-14 * (1.0 + mag));

    const double tau = rng.uniform();
    if (n > 3) a[n / 2] = tau;  // exact tie
    const std::size_t w = k::words_for_bits(n);
    std::vector<std::uint64_t> ms(w + 1, 0xdeadbeef), mv(w + 1, 0xdeadbeef);
    s.threshold_mask(a.data(), n, tau, ms.data());
    v.threshold_mask(a.data(), n, tau, mv.data());
    CHECK(ms == mv);

    const std::size_t words = rng.index(40);
    auto x = random_words(words, rng, 0.3);
    auto y = random_words(words, rng, 0.6);
    CHECK(s.and_popcount(x.data(), y.data(), words) == v.and_popcount(x.data(), y.data(), words));
    CHECK(s.is_subset(x.data(), y.data(), words) == v.is_subset(x.data(), y.data(), words));
    for (std::size_t i = 0; i < words; ++i) y[i] |= x[i];
    CHECK(v.is_subset(x.data(), y.data(), words));
    if (words > 0) {
      const std::size_t hole = rng.index(words * 64);
      x[hole / 64] |= std::uint64_t{1} << (hole % 64);
      y[hole / 64] &= ~(std::uint64_t{1} << (hole % 64));
      CHECK(s.is_subset(x.data(), y.data(), words) == v.is_subset(x.data(), y.data(), words));
      CHECK_FALSE(v.is_subset(x.data(), y.data(), words));
    }
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const k::Isa isa = k::active_isa();
  CHECK(k::available(isa));
  CHECK(&k::active() == &k::table(isa));
  CHECK((k::isa_name(isa) == "scalar" || k::isa_name(isa) == "avx2"));
}
