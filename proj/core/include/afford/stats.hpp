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

#pragma once

#include <Eigen/Core>

namespace afford {

struct TTestResult {
  double t = 0.0;
  double p = 0.0;
  int df = 0;
};

/// Classic paired two-sided t-test on a - b. Throws afford::Error on length
/// mismatch, fewer than two pairs, or zero-variance differences
/// ("degenerate t-test").
TTestResult paired_ttest(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Sample Pearson correlation. Throws afford::Error when either side has
/// zero variance or fewer than two points.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Two-sided p for an observed correlation via the t transform with n-2
/// degrees of freedom. |r| = 1 maps to p = 0.
double pearson_p_value(double r, int n);

}  // namespace afford
