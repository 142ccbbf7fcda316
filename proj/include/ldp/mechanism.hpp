// Copyright 2026 The ldp-classify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDP_MECHANISM_HPP_
#define LDP_MECHANISM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ldp/core.hpp"
#include "ldp/rng.hpp"

namespace ldp {

// Sparse view of the binary occupancy array: the flat indices of the grid
// nodes j with ||x - x_j||_inf < h (strict). Between 1 and 2^d indices,
// ascending.
struct IndicatorArray {
  GridSpec grid{1, 1.0};
  std::vector<std::size_t> nonzero;
};

IndicatorArray build_indicator_array(std::span<const double> x, const GridSpec& grid);

// Laplace calibration for one report cell. Each cell receives independent
// noise of scale b = 2^{d+1} / alpha, so a single individual's full payload
// (at most 2^d occupied cells, magnitude 1 each, l1 sensitivity 2^{d+1})
// is released at per-individual budget alpha.
struct NoiseSpec {
  NoiseSpec(int d, PrivacyBudget budget);
  double scale;                                       // b = 2^{d+1} / alpha
  double variance() const { return 2.0 * scale * scale; }  // 2 b^2
};

std::vector<double> sample_laplace(const NoiseSpec& noise, std::size_t count, RngStream& rng);

// Privatized release of a location-only observation (density half):
// values = indicator + Laplace(b) per cell.
PrivatizedReport privatize_density(std::span<const double> x, const GridSpec& grid,
                                   PrivacyBudget budget, RngStream& rng);

// Privatized release of a labeled observation (label half):
// values = y * indicator + Laplace(b) per cell. Noise is drawn for every
// cell regardless of y, so the draw sequence does not depend on the label.
PrivatizedReport privatize_label(const LabeledPoint& point, const GridSpec& grid,
                                 PrivacyBudget budget, RngStream& rng);

// Allocation-free variants filling a caller-owned buffer of size G^d.
void privatize_density_into(std::span<const double> x, const GridSpec& grid,
                            PrivacyBudget budget, RngStream& rng, std::vector<double>& out);
void privatize_label_into(const LabeledPoint& point, const GridSpec& grid,
                          PrivacyBudget budget, RngStream& rng, std::vector<double>& out);

// Test-only deterministic pipeline: identical payloads with the noise term
// identically zero. Not wired to any CLI path.
namespace noiseless {
PrivatizedReport privatize_density(std::span<const double> x, const GridSpec& grid);
PrivatizedReport privatize_label(const LabeledPoint& point, const GridSpec& grid);
}  // namespace noiseless

}  // namespace ldp

#endif  // LDP_MECHANISM_HPP_
