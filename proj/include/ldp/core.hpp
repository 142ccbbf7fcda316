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

#ifndef LDP_CORE_HPP_
#define LDP_CORE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ldp/errors.hpp"

namespace ldp {

// Per-individual privacy budget. Strictly positive.
struct PrivacyBudget {
  explicit PrivacyBudget(double a);
  double alpha;
};

// Regular lattice over [0,1]^d with spacing h: node j has coordinates
// (j_1 h, ..., j_d h) with every j_k in {0, ..., ceil(1/h)}. The node count
// per axis is G = ceil(1/h) + 1; flat indices enumerate nodes in row-major
// (lexicographic) order, j_1 most significant.
class GridSpec {
 public:
  GridSpec(int dimension, double bandwidth);

  int dimension() const { return d_; }
  double bandwidth() const { return h_; }
  int side() const { return side_; }                 // G, nodes per axis
  std::size_t cell_count() const { return cells_; }  // G^d

  std::size_t flatten(std::span<const int> multi) const;
  std::vector<int> unflatten(std::size_t flat) const;
  void unflatten_into(std::size_t flat, std::span<int> multi) const;

  // Coordinates of node j. Valid flat/multi index required.
  std::vector<double> node(std::span<const int> multi) const;
  double node_coordinate(int j) const { return static_cast<double>(j) * h_; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.d_ == b.d_ && a.h_ == b.h_;
  }

 private:
  int d_;
  double h_;
  int side_;
  std::size_t cells_;
};

// Throws DomainError unless x has length d and lies in [0,1]^d.
void check_unit_cube(std::span<const double> x, int d);

// Nearest lattice node per coordinate: j_k minimizes |x_k - j_k h|, with an
// exact half-way tie resolved toward the lower index. The result always lies
// inside the grid's index range for x in [0,1]^d.
std::vector<int> index_nearest(std::span<const double> x, const GridSpec& grid);
std::size_t index_nearest_flat(std::span<const double> x, const GridSpec& grid);

// Open axis-aligned cube of half-width h centered on the lattice node nearest
// to x0. Bounds may extend beyond [0,1]^d; integration clips to the support.
struct Window {
  std::vector<double> lo;
  std::vector<double> hi;
};
Window indicator_window(std::span<const double> x0, const GridSpec& grid);

// Volume of the Euclidean ball of radius r in dimension d:
// pi^{d/2} / Gamma(1 + d/2) * r^d.
double ball_volume(int d, double r);

// Declared regularity class of a distribution: smoothness (beta, L), margin
// (gamma, C_0), and support regularity (c_0, r_0, mu). c_0 and r_0 are
// carried for reporting; only beta, gamma, C_0, L, and mu enter computations.
struct ClassParams {
  double beta = 1.0;   // smoothness exponent, in (0, 1]
  double gamma = 0.0;  // margin exponent, >= 0
  double C0 = 1.0;     // margin constant, > 0
  double L = 1.0;      // smoothness constant, > 0
  double c0 = 0.5;     // support regularity constant, > 0
  double r0 = 1.0;     // support regularity radius, > 0
  double mu = 1.0;     // density lower bound on the support, > 0

  void validate() const;
  // The minimax lower bound construction needs beta * gamma <= d.
  bool lower_bound_valid(int d) const { return beta * gamma <= static_cast<double>(d); }
};

struct LabeledPoint {
  std::vector<double> x;
  int y = 0;  // in {0, 1}
};

// Which half of the sample a privatized report came from. Density reports
// encode only the location; label reports encode label-weighted location.
enum class Half { density, label };

struct PrivatizedReport {
  Half half = Half::density;
  GridSpec grid{1, 1.0};
  std::vector<double> values;  // one value per grid node, all finite
};

// Throws unless the report's value vector matches its grid and is finite.
void validate_report(const PrivatizedReport& report);

}  // namespace ldp

#endif  // LDP_CORE_HPP_
