#include <cstdlib>
#include <string>

#include "ctfactor/error.hpp"
#include "tables.hpp"

namespace ctfactor::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(CTFACTOR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa select_isa() {
  if (const char* forced = std::getenv("CT_FACTOR_KERNELS")) {
    const std::string name{forced};
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2" && cpu_has_avx2()) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::scalar) return detail::scalar_table;
#if defined(CTFACTOR_HAVE_AVX2)
  if (isa == Isa::avx2 && cpu_has_avx2()) return detail::avx2_table;
#endif
  throw DomainError("kernel variant not available: " + std::string(isa_name(isa)));
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace ctfactor::kernels
