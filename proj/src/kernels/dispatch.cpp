// Copyright 2026 The Persona Probe Authors. All Rights Reserved.
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
#include <string_view>

#include "kernels/variants.hpp"
#include "persona/kernels.hpp"

namespace persona::kernels {

namespace {

constexpr KernelTable kScalar = {Isa::kScalar, scalar::dot, scalar::axpy,
                                 scalar::scale};
#if defined(PERSONA_HAVE_AVX2)
constexpr KernelTable kAvx2 = {Isa::kAvx2, avx2::dot, avx2::axpy, avx2::scale};
#endif
#if defined(PERSONA_HAVE_NEON)
constexpr KernelTable kNeon = {Isa::kNeon, neon::dot, neon::axpy, neon::scale};
#endif

const KernelTable& select() {
  const char* forced = std::getenv("PERSONA_KERNELS");
  if (forced != nullptr) {
    const std::string_view name(forced);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (isa_name(isa) == name) {
        if (const KernelTable* t = table_for(isa)) return *t;
      }
    }
    return kScalar;
  }
  if (const KernelTable* t = table_for(Isa::kAvx2)) return *t;
  if (const KernelTable* t = table_for(Isa::kNeon)) return *t;
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalar;
    case Isa::kAvx2:
#if defined(PERSONA_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &kAvx2;
#endif
      return nullptr;
    case Isa::kNeon:
#if defined(PERSONA_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace persona::kernels
