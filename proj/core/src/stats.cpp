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

#include "afford/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

#include "afford/error.hpp"

namespace afford {
namespace {

double two_sided_p(double t, int df) {
  const boost::math::students_t dist(static_cast<double>(df));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

TTestResult paired_ttest(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw Error("paired t-test needs equal lengths, got " +
                std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  const int n = static_cast<int>(a.size());
  if (n < 2) throw Error("paired t-test needs at least 2 pairs");

  const Eigen::VectorXd d = a - b;
  const double mean = d.mean();
  const double ss = (d.array() - mean).square().sum();
  const double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) {
    throw Error("degenerate t-test: differences have zero variance");
  }

  TTestResult res;
  res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  res.df = n - 1;
  res.p = two_sided_p(res.t, res.df);
  return res;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw Error("correlation needs equal lengths, got " +
                std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  const int n = static_cast<int>(x.size());
  if (n < 2) throw Error("correlation needs at least 2 points");

  const Eigen::ArrayXd xd = x.array() - x.mean();
  const Eigen::ArrayXd yd = y.array() - y.mean();
  const double sx = std::sqrt(xd.square().sum());
  const double sy = std::sqrt(yd.square().sum());
  if (sx == 0.0 || sy == 0.0) {
    throw Error("correlation undefined: input has zero variance");
  }
  return (xd * yd).sum() / (sx * sy);
}

double pearson_p_value(double r, int n) {
  if (n < 3) throw Error("correlation p-value needs at least 3 points");
  const double r2 = std::min(r * r, 1.0);
  if (r2 >= 1.0) return 0.0;
  const int df = n - 2;
  const double t = r * std::sqrt(df / (1.0 - r2));
  return two_sided_p(t, df);
}

}  // namespace afford
