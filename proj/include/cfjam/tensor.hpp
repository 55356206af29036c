// SPDX-License-Identifier: Apache-2.0
//
// cfjam: jamming detection for cell-free MIMO networks with dynamic graphs
// Copyright 2026 The cfjam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <Eigen/Core>
#include <vector>

namespace cfjam::neural {

/// Dense row-major matrix; every activation and parameter in the detector is one of these.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Shape-tagged flat value array, the exchange form used by checkpoints and the C API.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> values;

  std::size_t numel() const { return values.size(); }

  static Tensor from(const Mat& m) {
    Tensor t;
    t.shape = {static_cast<int>(m.rows()), static_cast<int>(m.cols())};
    t.values.assign(m.data(), m.data() + m.size());
    return t;
  }
};

}  // namespace cfjam::neural
