// Copyright 2026 The cmpvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Draws normals with the dyadic comparison sampler and reports how many
// uniforms each one cost.

#include <cstdio>

#include "cmpvar/cmpvar.hpp"

int main() {
  cmpvar::UniformSource<> src(2024);
  const auto table = cmpvar::build_normal_brent(53);
  double sum = 0.0, sum_sq = 0.0;
  constexpr int kCount = 100000;
  for (int i = 0; i < kCount; ++i) {
    const double x = cmpvar::normal_grand(table, src).value;
    sum += x;
    sum_sq += x * x;
  }
  std::printf("mean %.5f  variance %.5f  uniforms/sample %.4f\n", sum / kCount,
              sum_sq / kCount - (sum / kCount) * (sum / kCount),
              static_cast<double>(src.draws()) / kCount);
}
