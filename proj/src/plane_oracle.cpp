// Copyright 2026 Blochfar Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "blochfar/plane_oracle.hpp"

#include <cmath>

#include "blochfar/integrate.hpp"

namespace blochfar {

cplx plane_oracle(const std::function<cplx(cplx, cplx)>& numerator,
                  const std::vector<PlaneFactor>& factors, const Vec2& alpha,
                  const PlaneOracleOptions& opt) {
  if (!(opt.R > 0.0 && opt.h > 0.0 && opt.q0 > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "plane oracle options must be positive");
  }
  auto eta = [&](double x, double y) -> Vec2 {
    Vec2 e{0.0, 0.0};
    for (const auto& f : factors) {
      const double q = f.q(x, y).real();
      const Vec2 g = f.grad(x, y);
      const double w = f.sign * opt.delta * std::exp(-(q / opt.q0) * (q / opt.q0)) /
                       std::sqrt(g[0] * g[0] + g[1] * g[1] + 0.01);
      e[0] += w * g[0];
      e[1] += w * g[1];
    }
    return e;
  };
  const double L = opt.extent * opt.R;
  const int n = static_cast<int>(std::floor(2.0 * L / opt.h)) + 1;
  const double d = 1e-6;
  const double rr = opt.R * opt.R;
  std::vector<cplx> rows(n), row(n);
  for (int i = 0; i < n; ++i) {
    const double x = -L + i * opt.h;
    for (int j = 0; j < n; ++j) {
      const double y = -L + j * opt.h;
      const Vec2 e = eta(x, y);
      const Vec2 ex = eta(x + d, y), emx = eta(x - d, y);
      const Vec2 ey = eta(x, y + d), emy = eta(x, y - d);
      const double j11 = (ex[0] - emx[0]) / (2 * d), j21 = (ex[1] - emx[1]) / (2 * d);
      const double j12 = (ey[0] - emy[0]) / (2 * d), j22 = (ey[1] - emy[1]) / (2 * d);
      const cplx det = (1.0 + kI * j11) * (1.0 + kI * j22) + j12 * j21;
      const cplx z1(x, e[0]), z2(y, e[1]);
      const cplx r2 = (z1 * z1 + z2 * z2) / rr;
      const cplx r8 = (r2 * r2) * (r2 * r2);
      cplx den = 1.0;
      for (const auto& f : factors) den *= f.q(z1, z2);
      row[j] = numerator(z1, z2) / den *
               std::exp(-kI * (alpha[0] * z1 + alpha[1] * z2) - r8) * det;
    }
    rows[i] = pairwise_sum(row);
  }
  return pairwise_sum(rows) * opt.h * opt.h;
}

}  // namespace blochfar
