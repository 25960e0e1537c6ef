// Copyright 2026 The eKG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ekg/simd/kernels.hpp"

namespace ekg::simd {

#if defined(EKG_WITH_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace avx2
#endif
#if defined(EKG_WITH_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace neon
#endif

namespace {

constexpr Kernels kScalar{&scalar::dot, &scalar::sum};
#if defined(EKG_WITH_AVX2)
constexpr Kernels kAvx2{&avx2::dot, &avx2::sum};
#endif
#if defined(EKG_WITH_NEON)
constexpr Kernels kNeon{&neon::dot, &neon::sum};
#endif

Isa detect() {
  if (const char* forced = std::getenv("EKG_SIMD"); forced && std::string(forced) == "scalar")
    return Isa::scalar;
  if (kernels_for(Isa::avx2)) return Isa::avx2;
  if (kernels_for(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const Kernels& active() {
  static const Kernels* k = kernels_for(detect());
  return *k;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    default: return "scalar";
  }
}

const Kernels* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(EKG_WITH_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2;
#endif
      return nullptr;
    case Isa::neon:
#if defined(EKG_WITH_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

}  // namespace ekg::simd
