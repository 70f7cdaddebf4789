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
#include <utility>

namespace afford {

/// SVD-based non-negative initialization for factorizing P ≈ O Vᵀ.
///
/// Column 0 carries the leading singular triplet (entrywise non-negative
/// for a non-negative P, up to sign). Each later column keeps either the
/// positive or the negative sections of its singular vector pair, whichever
/// has the larger norm product, rescaled so the pair's outer product keeps
/// the singular value's mass. Sections that vanish leave exact zero
/// columns, which suits sparse targets.
///
/// Throws afford::ConfigError when d is outside [1, min(m, n)] and
/// afford::Error when P has no positive entry.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> nndsvd_init(
    const Eigen::MatrixXd& P, int d);

}  // namespace afford
