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

#include "ldp/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ldp {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

bool inside_unit_cube(std::span<const double> x) {
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

// Shared sampler for uniform-marginal families: coordinates first (axis
// order), then one uniform for the label. The draw count per point is fixed,
// which keeps client substreams aligned across implementations.
DistributionSpec::SamplerFn uniform_cube_sampler(int d, DistributionSpec::EtaFn eta) {
  return [d, eta = std::move(eta)](std::size_t count, RngStream& rng,
                                   std::vector<LabeledPoint>& out) {
    for (std::size_t i = 0; i < count; ++i) {
      LabeledPoint p;
      p.x.resize(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) p.x[static_cast<std::size_t>(k)] = rng.uniform01();
      p.y = rng.uniform01() < eta(p.x) ? 1 : 0;
      out.push_back(std::move(p));
    }
  };
}

std::vector<SupportRegion> unit_cube_support(int d) {
  SupportRegion cube;
  cube.shape = SupportRegion::Shape::box;
  cube.lo.assign(static_cast<std::size_t>(d), 0.0);
  cube.hi.assign(static_cast<std::size_t>(d), 1.0);
  return {cube};
}

}  // namespace

DistributionSpec::DistributionSpec(int d, EtaFn eta, DensityFn density, SamplerFn sampler,
                                   std::vector<SupportRegion> support,
                                   std::optional<ClassParams> declared, nlohmann::json document)
    : d_(d),
      eta_(std::move(eta)),
      density_(std::move(density)),
      sampler_(std::move(sampler)),
      support_(std::move(support)),
      declared_(std::move(declared)),
      document_(std::move(document)) {
  if (d_ < 1) throw ParamError("DistributionSpec: dimension must be >= 1");
  if (!eta_ || !density_ || !sampler_) throw ParamError("DistributionSpec: missing evaluator");
  if (support_.empty()) throw ParamError("DistributionSpec: support must be nonempty");
  for (const SupportRegion& r : support_) {
    if (r.dimension() != d_) throw ParamError("DistributionSpec: support region rank mismatch");
  }
  if (declared_) declared_->validate();
}

std::vector<LabeledPoint> DistributionSpec::sample(std::size_t count, RngStream& rng) const {
  std::vector<LabeledPoint> out;
  out.reserve(count);
  sample_into(count, rng, out);
  return out;
}

DistributionSpec make_smooth_family(const SmoothFamilyParams& params) {
  if (params.d < 1) throw ParamError("make_smooth_family: dimension must be >= 1");
  if (!(params.beta > 0.0) || params.beta > 1.0) {
    throw ParamError("make_smooth_family: beta must lie in (0, 1]");
  }
  if (!(params.L > 0.0)) throw ParamError("make_smooth_family: L must be > 0");
  if (!std::isfinite(params.phase)) throw ParamError("make_smooth_family: phase must be finite");
  if (!(params.margin_gamma >= 0.0)) {
    throw ParamError("make_smooth_family: margin_gamma must be >= 0");
  }

  double a = params.amplitude;
  if (a < 0.0) {
    a = std::min(0.5, std::pow(params.L, 1.0 / params.beta) / kTwoPi);
  }
  // eta moves at most (2 pi a)^beta * ||dx||^beta, so larger amplitudes fall
  // outside the declared smoothness class.
  if (std::pow(kTwoPi * a, params.beta) > params.L * (1.0 + 1e-12)) {
    throw ParamError("make_smooth_family: amplitude infeasible for declared (beta, L)");
  }

  double C0 = params.margin_C0;
  if (C0 < 0.0) {
    C0 = (a == 0.0) ? 1.0 : std::pow(std::min(a, 0.5), -params.margin_gamma);
  }
  if (!(C0 > 0.0)) throw ParamError("make_smooth_family: margin_C0 must be > 0");

  const double v = params.density_floor;
  const double s1 = params.density_ramp_start;
  const double s2 = params.density_ramp_end;
  if (!(v > 0.0) || v > 1.0) {
    throw ParamError("make_smooth_family: density_floor must lie in (0, 1]");
  }
  const bool dipped = v < 1.0;
  if (dipped && !(s1 > 0.0 && s1 < s2 && s2 < 1.0)) {
    throw ParamError("make_smooth_family: density ramp must satisfy 0 < start < end < 1");
  }
  // Elevated level before the ramp, fixed by total mass 1.
  const double hi =
      dipped ? (1.0 - v * (1.0 - s2) - 0.5 * v * (s2 - s1)) / (s1 + 0.5 * (s2 - s1)) : 1.0;

  const int d = params.d;
  const double phase = params.phase;
  DistributionSpec::EtaFn eta = [a, phase](std::span<const double> x) {
    const double s = 0.5 + a * std::sin(kTwoPi * (x[0] - phase));
    return std::clamp(s, 0.0, 1.0);
  };
  DistributionSpec::DensityFn density = [dipped, hi, v, s1, s2](std::span<const double> x) {
    if (!inside_unit_cube(x)) return 0.0;
    if (!dipped) return 1.0;
    const double t = x[0];
    if (t <= s1) return hi;
    if (t >= s2) return v;
    return hi + (v - hi) * (t - s1) / (s2 - s1);
  };

  DistributionSpec::SamplerFn sampler;
  std::vector<SupportRegion> support;
  if (!dipped) {
    sampler = uniform_cube_sampler(d, eta);
    support = unit_cube_support(d);
  } else {
    const double m1 = hi * s1;
    const double m2 = 0.5 * (hi + v) * (s2 - s1);
    const double slope = (hi - v) / (s2 - s1);
    // Inverse-CDF draw for the first axis; one uniform per coordinate keeps
    // the per-point draw count identical to the uniform case.
    sampler = [=](std::size_t count, RngStream& rng, std::vector<LabeledPoint>& out) {
      for (std::size_t i = 0; i < count; ++i) {
        LabeledPoint p;
        p.x.resize(static_cast<std::size_t>(d));
        const double u = rng.uniform01();
        double x1;
        if (u < m1) {
          x1 = u / hi;
        } else if (u < m1 + m2) {
          const double rel = u - m1;
          x1 = s1 + (hi - std::sqrt(std::max(0.0, hi * hi - 2.0 * slope * rel))) / slope;
        } else {
          x1 = std::min(s2 + (u - m1 - m2) / v, 1.0);
        }
        p.x[0] = x1;
        for (int k = 1; k < d; ++k) p.x[static_cast<std::size_t>(k)] = rng.uniform01();
        p.y = rng.uniform01() < eta(p.x) ? 1 : 0;
        out.push_back(std::move(p));
      }
    };
    // Split at the ramp kinks so each region's density is smooth.
    const double cuts[4] = {0.0, s1, s2, 1.0};
    for (int piece = 0; piece < 3; ++piece) {
      SupportRegion box;
      box.shape = SupportRegion::Shape::box;
      box.lo.assign(static_cast<std::size_t>(d), 0.0);
      box.hi.assign(static_cast<std::size_t>(d), 1.0);
      box.lo[0] = cuts[piece];
      box.hi[0] = cuts[piece + 1];
      support.push_back(std::move(box));
    }
  }

  ClassParams declared;
  declared.beta = params.beta;
  declared.gamma = params.margin_gamma;
  declared.C0 = C0;
  declared.L = params.L;
  declared.c0 = std::ldexp(1.0, -d);
  declared.r0 = 1.0;
  declared.mu = dipped ? v : 1.0;

  nlohmann::json doc = {
      {"family", "smooth"}, {"d", d},         {"beta", params.beta},
      {"L", params.L},      {"amplitude", a}, {"phase", phase},
      {"margin_gamma", params.margin_gamma},  {"margin_C0", C0},
      {"density_floor", v}, {"density_ramp_start", s1},
      {"density_ramp_end", s2},
  };

  return DistributionSpec(d, eta, density, std::move(sampler), std::move(support), declared,
                          std::move(doc));
}

DistributionSpec make_step_family(const StepFamilyParams& params) {
  if (params.d < 1) throw ParamError("make_step_family: dimension must be >= 1");
  if (!(params.beta > 0.0) || params.beta > 1.0) {
    throw ParamError("make_step_family: beta must lie in (0, 1]");
  }
  if (!(params.L > 0.0)) throw ParamError("make_step_family: L must be > 0");
  if (!(params.level > 0.0) || params.level > 0.5) {
    throw ParamError("make_step_family: level must lie in (0, 1/2]");
  }
  // The ramp peaks at slope exactly L; the plateau gap 2 * level then bounds
  // the Holder ratio for every beta in (0, 1].
  if (params.L < 2.0 * params.level) {
    throw ParamError("make_step_family: need L >= 2 * level");
  }
  if (!(params.margin_gamma >= 0.0)) {
    throw ParamError("make_step_family: margin_gamma must be >= 0");
  }
  if (!(params.margin_C0 > 0.0)) throw ParamError("make_step_family: margin_C0 must be > 0");
  const double tau = 1.5 * params.level / params.L;
  const double inner = params.valley_inner;
  const double ramp = params.valley_ramp;
  const double floor = params.valley_floor;
  if (!(inner > 0.0) || !(ramp > 0.0)) {
    throw ParamError("make_step_family: valley widths must be > 0");
  }
  if (!(floor > 0.0) || floor >= 1.0) {
    throw ParamError("make_step_family: valley_floor must lie in (0, 1)");
  }
  if (tau > inner) {
    throw ParamError("make_step_family: eta transition wider than the valley floor");
  }
  const double b = params.boundary;
  const double a0 = b - inner - ramp;
  const double a1 = b - inner;
  const double a2 = b + inner;
  const double a3 = b + inner + ramp;
  if (!(a0 > 0.0) || !(a3 < 1.0)) {
    throw ParamError("make_step_family: valley must sit strictly inside (0, 1)");
  }
  // Bulk level fixed by total mass 1.
  const double bulk = (1.0 - floor * (2.0 * inner + ramp)) / (1.0 - 2.0 * inner - ramp);

  const int d = params.d;
  const double level = params.level;
  DistributionSpec::EtaFn eta = [level, b, tau](std::span<const double> x) {
    const double u = std::clamp((x[0] - (b - tau)) / (2.0 * tau), 0.0, 1.0);
    const double s = u * u * (3.0 - 2.0 * u);
    return 0.5 + level * (2.0 * s - 1.0);
  };
  DistributionSpec::DensityFn density = [bulk, floor, a0, a1, a2, a3,
                                         ramp](std::span<const double> x) {
    if (!inside_unit_cube(x)) return 0.0;
    const double t = x[0];
    if (t <= a0 || t >= a3) return bulk;
    if (t < a1) return bulk + (floor - bulk) * (t - a0) / ramp;
    if (t <= a2) return floor;
    return floor + (bulk - floor) * (t - a2) / ramp;
  };

  const double mA = bulk * a0;
  const double mB = 0.5 * (bulk + floor) * ramp;
  const double mC = 2.0 * inner * floor;
  const double slope = (bulk - floor) / ramp;
  DistributionSpec::SamplerFn sampler = [=](std::size_t count, RngStream& rng,
                                            std::vector<LabeledPoint>& out) {
    for (std::size_t i = 0; i < count; ++i) {
      LabeledPoint p;
      p.x.resize(static_cast<std::size_t>(d));
      const double u = rng.uniform01();
      double x1;
      if (u < mA) {
        x1 = u / bulk;
      } else if (u < mA + mB) {
        const double rel = u - mA;
        x1 = a0 + (bulk - std::sqrt(std::max(0.0, bulk * bulk - 2.0 * slope * rel))) / slope;
      } else if (u < mA + mB + mC) {
        x1 = a1 + (u - mA - mB) / floor;
      } else if (u < mA + 2.0 * mB + mC) {
        const double rel = u - mA - mB - mC;
        x1 = a2 + (std::sqrt(floor * floor + 2.0 * slope * rel) - floor) / slope;
      } else {
        x1 = std::min(a3 + (u - mA - 2.0 * mB - mC) / bulk, 1.0);
      }
      p.x[0] = x1;
      for (int k = 1; k < d; ++k) p.x[static_cast<std::size_t>(k)] = rng.uniform01();
      p.y = rng.uniform01() < eta(p.x) ? 1 : 0;
      out.push_back(std::move(p));
    }
  };

  std::vector<SupportRegion> support;
  const double cuts[6] = {0.0, a0, a1, a2, a3, 1.0};
  for (int piece = 0; piece < 5; ++piece) {
    SupportRegion box;
    box.shape = SupportRegion::Shape::box;
    box.lo.assign(static_cast<std::size_t>(d), 0.0);
    box.hi.assign(static_cast<std::size_t>(d), 1.0);
    box.lo[0] = cuts[piece];
    box.hi[0] = cuts[piece + 1];
    support.push_back(std::move(box));
  }

  ClassParams declared;
  declared.beta = params.beta;
  declared.gamma = params.margin_gamma;
  declared.C0 = params.margin_C0;
  declared.L = params.L;
  declared.c0 = std::ldexp(1.0, -d);
  declared.r0 = 1.0;
  declared.mu = floor;

  nlohmann::json doc = {
      {"family", "step"},
      {"d", d},
      {"beta", params.beta},
      {"L", params.L},
      {"level", level},
      {"boundary", b},
      {"valley_inner", inner},
      {"valley_ramp", ramp},
      {"valley_floor", floor},
      {"margin_gamma", params.margin_gamma},
      {"margin_C0", params.margin_C0},
  };

  return DistributionSpec(d, eta, density, std::move(sampler), std::move(support), declared,
                          std::move(doc));
}

DistributionSpec make_uniform_family(int d, DistributionSpec::EtaFn eta) {
  if (d < 1) throw ParamError("make_uniform_family: dimension must be >= 1");
  if (!eta) throw ParamError("make_uniform_family: eta evaluator required");
  DistributionSpec::DensityFn density = [](std::span<const double> x) {
    return inside_unit_cube(x) ? 1.0 : 0.0;
  };
  return DistributionSpec(d, eta, density, uniform_cube_sampler(d, eta), unit_cube_support(d));
}

double bump_u(double r) {
  if (!(r >= 0.0)) throw ParamError("bump_u: radius must be >= 0");
  if (r <= 0.125) return 1.0;
  if (r >= 0.25) return 0.0;
  const double t = (r - 0.125) / 0.125;
  return 1.0 - (3.0 * t * t - 2.0 * t * t * t);
}

void LowerBoundParams::validate(int d) const {
  if (d < 1) throw ParamError("LowerBoundParams: dimension must be >= 1");
  if (q < 1) throw ParamError("LowerBoundParams: q must be >= 1");
  if (m < 1) throw ParamError("LowerBoundParams: m must be >= 1");
  double cells = 1.0;
  for (int k = 0; k < d; ++k) cells *= static_cast<double>(q);
  if (static_cast<double>(m) > cells) throw ParamError("LowerBoundParams: m exceeds q^d");
  if (!(w > 0.0)) throw ParamError("LowerBoundParams: w must be > 0");
  if (static_cast<double>(m) * w > 1.0 + 1e-12) {
    throw ParamError("LowerBoundParams: w must be <= 1/m");
  }
  if (static_cast<int>(sigma.size()) != m) {
    throw ParamError("LowerBoundParams: sigma must have one entry per active cell");
  }
  for (int s : sigma) {
    if (s != -1 && s != 1) throw ParamError("LowerBoundParams: sigma entries must be +-1");
  }
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("LowerBoundParams: beta must lie in (0, 1]");
  if (!(gamma >= 0.0)) throw ParamError("LowerBoundParams: gamma must be >= 0");
  if (!(C0 > 0.0)) throw ParamError("LowerBoundParams: C0 must be > 0");
  if (!(L > 0.0)) throw ParamError("LowerBoundParams: L must be > 0");
  // The ramp of the local bump has slope 12 C_phi L q^{1-beta} at scale q;
  // C_phi <= 2 * 12^{-beta} keeps eta inside the declared smoothness class.
  if (!(C_phi > 0.0) || C_phi > 2.0 * std::pow(12.0, -beta) + 1e-12) {
    throw ParamError("LowerBoundParams: C_phi too large for declared smoothness");
  }
  // Margin budget: the balls carry total mass m w at margin exactly
  // L C_phi q^{-beta} / 2, so m w must fit under C0 t^gamma at that t.
  const double margin_t = L * C_phi / (2.0 * std::pow(static_cast<double>(q), beta));
  if (static_cast<double>(m) * w > C0 * std::pow(margin_t, gamma) * (1.0 + 1e-12)) {
    throw ParamError("LowerBoundParams: m*w exceeds the declared margin budget");
  }
}

DistributionSpec make_lower_bound_family(const LowerBoundParams& params, int d) {
  params.validate(d);

  const int q = params.q;
  const int m = params.m;
  const double r = 1.0 / (8.0 * static_cast<double>(q));
  const double deviation =
      params.L * params.C_phi * std::pow(static_cast<double>(q), -params.beta);

  // Active cells are the first m multi-indices of {0..q-1}^d in row-major
  // order; each holds a ball of radius 1/(8q) at the cell center.
  std::vector<std::vector<double>> centers(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    std::vector<double>& c = centers[static_cast<std::size_t>(i)];
    c.resize(static_cast<std::size_t>(d));
    int rest = i;
    for (int k = d - 1; k >= 0; --k) {
      const int jk = rest % q;
      rest /= q;
      c[static_cast<std::size_t>(k)] =
          (2.0 * static_cast<double>(jk) + 1.0) / (4.0 * static_cast<double>(q));
    }
  }

  double ball_scale = 1.0;  // (8q)^d
  for (int k = 0; k < d; ++k) ball_scale *= 8.0 * static_cast<double>(q);
  const double ball_density = ball_scale * params.w / ball_volume(d, 1.0);
  const double mw = static_cast<double>(m) * params.w;
  const double rest_density = 4.0 * std::max(0.0, 1.0 - mw);  // A_0 has volume 1/4

  const std::vector<int> sigma = params.sigma;
  const double beta = params.beta;
  const double L = params.L;
  const double C_phi = params.C_phi;

  // Rank of the cell containing x within the active prefix, or -1.
  auto active_rank = [q, m, d](std::span<const double> x) -> int {
    int rank = 0;
    for (int k = 0; k < d; ++k) {
      const double v = x[static_cast<std::size_t>(k)];
      if (!(v >= 0.0 && v <= 0.5)) return -1;
      int jk = static_cast<int>(std::floor(v * 2.0 * static_cast<double>(q)));
      jk = std::min(jk, q - 1);
      rank = rank * q + jk;
    }
    return rank < m ? rank : -1;
  };

  DistributionSpec::EtaFn eta = [=](std::span<const double> x) {
    const int rank = active_rank(x);
    if (rank < 0) return 0.5;
    const std::vector<double>& c = centers[static_cast<std::size_t>(rank)];
    double dist2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = x[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(k)];
      dist2 += dx * dx;
    }
    const double rho = std::sqrt(dist2) * static_cast<double>(q);
    const double phi_loc = std::pow(static_cast<double>(q), -beta) * L * C_phi * bump_u(rho);
    return 0.5 * (1.0 + static_cast<double>(sigma[static_cast<std::size_t>(rank)]) * phi_loc);
  };

  DistributionSpec::DensityFn density = [=](std::span<const double> x) {
    if (!inside_unit_cube(x)) return 0.0;
    if (x[0] >= 0.75) return rest_density;
    const int rank = active_rank(x);
    if (rank < 0) return 0.0;
    const std::vector<double>& c = centers[static_cast<std::size_t>(rank)];
    double dist2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = x[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(k)];
      dist2 += dx * dx;
    }
    return dist2 <= r * r ? ball_density : 0.0;
  };

  DistributionSpec::SamplerFn sampler = [=](std::size_t count, RngStream& rng,
                                            std::vector<LabeledPoint>& out) {
    for (std::size_t i = 0; i < count; ++i) {
      LabeledPoint p;
      p.x.resize(static_cast<std::size_t>(d));
      if (rng.uniform01() < mw) {
        const int ball = std::min(m - 1, static_cast<int>(rng.uniform01() * m));
        const std::vector<double>& c = centers[static_cast<std::size_t>(ball)];
        // Rejection from the bounding cube; acceptance rate V_d / 2^d.
        while (true) {
          double dist2 = 0.0;
          for (int k = 0; k < d; ++k) {
            const double z = c[static_cast<std::size_t>(k)] + r * (2.0 * rng.uniform01() - 1.0);
            p.x[static_cast<std::size_t>(k)] = z;
            const double dx = z - c[static_cast<std::size_t>(k)];
            dist2 += dx * dx;
          }
          if (dist2 <= r * r) break;
        }
        const double eta_ball =
            0.5 * (1.0 + static_cast<double>(sigma[static_cast<std::size_t>(ball)]) * deviation);
        p.y = rng.uniform01() < eta_ball ? 1 : 0;
      } else {
        p.x[0] = 0.75 + 0.25 * rng.uniform01();
        for (int k = 1; k < d; ++k) p.x[static_cast<std::size_t>(k)] = rng.uniform01();
        p.y = rng.uniform01() < 0.5 ? 1 : 0;
      }
      out.push_back(std::move(p));
    }
  };

  std::vector<SupportRegion> support;
  for (int i = 0; i < m; ++i) {
    SupportRegion ball;
    ball.shape = SupportRegion::Shape::ball;
    ball.center = centers[static_cast<std::size_t>(i)];
    ball.radius = r;
    support.push_back(std::move(ball));
  }
  SupportRegion rest;
  rest.shape = SupportRegion::Shape::box;
  rest.lo.assign(static_cast<std::size_t>(d), 0.0);
  rest.hi.assign(static_cast<std::size_t>(d), 1.0);
  rest.lo[0] = 0.75;
  support.push_back(std::move(rest));

  ClassParams declared;
  declared.beta = beta;
  declared.gamma = params.gamma;
  declared.C0 = params.C0;
  declared.L = L;
  declared.c0 = 0.25;  // reported, not certified
  declared.r0 = r;
  declared.mu = rest_density > 0.0 ? std::min(ball_density, rest_density) : ball_density;

  nlohmann::json doc = {
      {"family", "lower_bound"}, {"d", d},
      {"q", q},                  {"m", m},
      {"w", params.w},           {"sigma", sigma},
      {"C_phi", C_phi},          {"beta", beta},
      {"gamma", params.gamma},   {"C0", params.C0},
      {"L", L},
  };

  return DistributionSpec(d, std::move(eta), std::move(density), std::move(sampler),
                          std::move(support), declared, std::move(doc));
}

HolderReport holder_check(const DistributionSpec& spec, double beta, double L,
                          std::size_t pairs, RngStream& rng) {
  if (!(beta > 0.0) || beta > 1.0) throw ParamError("holder_check: beta must lie in (0, 1]");
  if (!(L > 0.0)) throw ParamError("holder_check: L must be > 0");
  const int d = spec.dimension();
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> y(static_cast<std::size_t>(d));
  HolderReport report;
  report.pairs = pairs;
  for (std::size_t p = 0; p < pairs; ++p) {
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = rng.uniform01();
    if (p % 2 == 0) {
      for (int k = 0; k < d; ++k) y[static_cast<std::size_t>(k)] = rng.uniform01();
    } else {
      // Near pair: perturbation at a log-uniform scale in [1e-6, 1e-1].
      const double scale = std::pow(10.0, -(1.0 + 5.0 * rng.uniform01()));
      for (int k = 0; k < d; ++k) {
        const double z = x[static_cast<std::size_t>(k)] + scale * (2.0 * rng.uniform01() - 1.0);
        y[static_cast<std::size_t>(k)] = std::clamp(z, 0.0, 1.0);
      }
    }
    double dist2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dx = x[static_cast<std::size_t>(k)] - y[static_cast<std::size_t>(k)];
      dist2 += dx * dx;
    }
    const double dist = std::sqrt(dist2);
    if (dist < 1e-13) continue;
    const double ratio = std::fabs(spec.eta(x) - spec.eta(y)) / std::pow(dist, beta);
    report.worst_ratio = std::max(report.worst_ratio, ratio);
  }
  report.pass = report.worst_ratio <= L * (1.0 + 1e-9);
  return report;
}

MarginReport margin_check(const DistributionSpec& spec, double gamma, double C0,
                          std::span<const double> t_grid, std::size_t samples, RngStream& rng) {
  if (!(gamma >= 0.0)) throw ParamError("margin_check: gamma must be >= 0");
  if (!(C0 > 0.0)) throw ParamError("margin_check: C0 must be > 0");
  if (samples == 0) throw ParamError("margin_check: samples must be >= 1");
  for (double t : t_grid) {
    if (!(t > 0.0)) throw ParamError("margin_check: thresholds must be > 0");
  }

  std::vector<double> margins;
  margins.reserve(samples);
  std::vector<LabeledPoint> batch;
  batch.reserve(1024);
  std::size_t remaining = samples;
  while (remaining > 0) {
    const std::size_t chunk = std::min<std::size_t>(remaining, 1024);
    batch.clear();
    spec.sample_into(chunk, rng, batch);
    for (const LabeledPoint& p : batch) margins.push_back(std::fabs(spec.eta(p.x) - 0.5));
    remaining -= chunk;
  }

  MarginReport report;
  report.pass = true;
  for (double t : t_grid) {
    std::size_t hits = 0;
    for (double v : margins) {
      if (v > 0.0 && v <= t) ++hits;
    }
    MarginReport::Row row;
    row.t = t;
    row.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    row.bound = C0 * std::pow(t, gamma);
    row.std_error =
        std::sqrt(row.estimate * (1.0 - row.estimate) / static_cast<double>(samples));
    row.pass = row.estimate <= row.bound + 3.0 * row.std_error;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

RiskEstimate excess_risk_quadrature(const DistributionSpec& spec, const Predictor& predict,
                                    std::size_t nodes_per_axis) {
  if (spec.dimension() > 2) {
    throw ParamError("excess_risk_quadrature: supported for d <= 2; use excess_risk_mc");
  }
  if (nodes_per_axis < 2) throw ParamError("excess_risk_quadrature: nodes must be >= 2");
  ScalarField g = [&](std::span<const double> x) {
    if (predict(x) == spec.bayes(x)) return 0.0;
    return spec.density(x) * std::fabs(2.0 * spec.eta(x) - 1.0);
  };
  double total = 0.0;
  for (const SupportRegion& region : spec.support()) {
    const std::size_t nodes =
        region.shape == SupportRegion::Shape::ball ? std::min<std::size_t>(nodes_per_axis, 1025)
                                                   : nodes_per_axis;
    total += region_integral(region, g, nodes);
  }
  return RiskEstimate{std::max(total, 0.0), 0.0};
}

RiskEstimate excess_risk_mc(const DistributionSpec& spec, const Predictor& predict,
                            std::size_t samples, RngStream& rng) {
  if (samples == 0) throw ParamError("excess_risk_mc: samples must be >= 1");
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<LabeledPoint> batch;
  batch.reserve(1024);
  std::size_t remaining = samples;
  while (remaining > 0) {
    const std::size_t chunk = std::min<std::size_t>(remaining, 1024);
    batch.clear();
    spec.sample_into(chunk, rng, batch);
    for (const LabeledPoint& p : batch) {
      double v = 0.0;
      if (predict(p.x) != spec.bayes(p.x)) v = std::fabs(2.0 * spec.eta(p.x) - 1.0);
      sum += v;
      sum_sq += v * v;
    }
    remaining -= chunk;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return RiskEstimate{mean, std::sqrt(var / n)};
}

DistributionSpec spec_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw ConfigError("distribution document must be a JSON object");
    const std::string family = doc.at("family").get<std::string>();
    if (family == "smooth") {
      SmoothFamilyParams p;
      p.d = doc.at("d").get<int>();
      p.beta = doc.at("beta").get<double>();
      p.L = doc.at("L").get<double>();
      if (doc.contains("amplitude")) p.amplitude = doc.at("amplitude").get<double>();
      if (doc.contains("phase")) p.phase = doc.at("phase").get<double>();
      if (doc.contains("margin_gamma")) p.margin_gamma = doc.at("margin_gamma").get<double>();
      if (doc.contains("margin_C0")) p.margin_C0 = doc.at("margin_C0").get<double>();
      if (doc.contains("density_floor")) p.density_floor = doc.at("density_floor").get<double>();
      if (doc.contains("density_ramp_start")) {
        p.density_ramp_start = doc.at("density_ramp_start").get<double>();
      }
      if (doc.contains("density_ramp_end")) {
        p.density_ramp_end = doc.at("density_ramp_end").get<double>();
      }
      return make_smooth_family(p);
    }
    if (family == "step") {
      StepFamilyParams p;
      p.d = doc.at("d").get<int>();
      p.beta = doc.at("beta").get<double>();
      p.L = doc.at("L").get<double>();
      p.level = doc.at("level").get<double>();
      if (doc.contains("boundary")) p.boundary = doc.at("boundary").get<double>();
      if (doc.contains("valley_inner")) p.valley_inner = doc.at("valley_inner").get<double>();
      if (doc.contains("valley_ramp")) p.valley_ramp = doc.at("valley_ramp").get<double>();
      if (doc.contains("valley_floor")) p.valley_floor = doc.at("valley_floor").get<double>();
      if (doc.contains("margin_gamma")) p.margin_gamma = doc.at("margin_gamma").get<double>();
      if (doc.contains("margin_C0")) p.margin_C0 = doc.at("margin_C0").get<double>();
      return make_step_family(p);
    }
    if (family == "lower_bound") {
      const int d = doc.at("d").get<int>();
      LowerBoundParams p;
      p.q = doc.at("q").get<int>();
      p.m = doc.at("m").get<int>();
      p.w = doc.at("w").get<double>();
      p.sigma = doc.at("sigma").get<std::vector<int>>();
      if (doc.contains("C_phi")) p.C_phi = doc.at("C_phi").get<double>();
      p.beta = doc.at("beta").get<double>();
      p.gamma = doc.at("gamma").get<double>();
      p.C0 = doc.at("C0").get<double>();
      p.L = doc.at("L").get<double>();
      return make_lower_bound_family(p, d);
    }
    throw ConfigError("unknown distribution family: " + family);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed distribution document: ") + e.what());
  }
}

}  // namespace ldp
