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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace ekg::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// One implementation of each reduction kernel. All variants compute the same
/// quantity; vector variants differ from the scalar reference only by
/// floating-point summation order.
struct Kernels {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
};

/// Kernels for `isa`, or nullptr when not compiled in or not supported by the CPU.
const Kernels* kernels_for(Isa isa);

/// Best supported variant, chosen once on first use. EKG_SIMD=scalar forces
/// the reference kernels.
Isa active_isa();

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace scalar

}  // namespace ekg::simd
