// Copyright 2026 afford contributors
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

#include "afford/nndsvd.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "afford/error.hpp"

namespace afford {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> nndsvd_init(
    const Eigen::MatrixXd& P, int d) {
  const int m = static_cast<int>(P.rows());
  const int n = static_cast<int>(P.cols());
  if (d < 1 || d > std::min(m, n)) {
    throw ConfigError("init rank d=" + std::to_string(d) +
                      " outside [1, " + std::to_string(std::min(m, n)) +
                      "] for a " + std::to_string(m) + "x" +
                      std::to_string(n) + " matrix");
  }
  if ((P.array() > 0.0).count() == 0) {
    throw Error("cannot initialize factors: matrix has no positive entry");
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(P,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& U = svd.matrixU();
  const auto& V = svd.matrixV();
  const auto& S = svd.singularValues();

  Eigen::MatrixXd O0 = Eigen::MatrixXd::Zero(m, d);
  Eigen::MatrixXd V0 = Eigen::MatrixXd::Zero(n, d);

  // Leading pair is same-signed entrywise; take magnitudes to fix the sign.
  O0.col(0) = std::sqrt(S(0)) * U.col(0).cwiseAbs();
  V0.col(0) = std::sqrt(S(0)) * V.col(0).cwiseAbs();

  for (int j = 1; j < d; ++j) {
    const Eigen::VectorXd u = U.col(j);
    const Eigen::VectorXd v = V.col(j);
    const Eigen::VectorXd up = u.cwiseMax(0.0);
    const Eigen::VectorXd un = (-u).cwiseMax(0.0);
    const Eigen::VectorXd vp = v.cwiseMax(0.0);
    const Eigen::VectorXd vn = (-v).cwiseMax(0.0);
    const double mp = up.norm() * vp.norm();
    const double mn = un.norm() * vn.norm();
    if (mp == 0.0 && mn == 0.0) continue;  // column stays zero

    const Eigen::VectorXd& uu = (mp >= mn) ? up : un;
    const Eigen::VectorXd& vv = (mp >= mn) ? vp : vn;
    const double mass = (mp >= mn) ? mp : mn;
    const double scale = std::sqrt(S(j) * mass);
    O0.col(j) = scale * uu / uu.norm();
    V0.col(j) = scale * vv / vv.norm();
  }
  return {std::move(O0), std::move(V0)};
}

}  // namespace afford
