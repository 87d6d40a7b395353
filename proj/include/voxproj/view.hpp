// Copyright 2026 The voxproj Authors
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

#ifndef VOXPROJ_VIEW_HPP
#define VOXPROJ_VIEW_HPP

#include <Eigen/Geometry>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace voxproj {

/// Spherical view direction: theta is elevation about the x-axis, phi azimuth about the (up) y-axis.
class Viewpoint {
 public:
  Viewpoint() = default;

  Viewpoint(double theta, double phi) : theta_(theta), phi_(phi) {
    constexpr double kHalfPi = std::numbers::pi / 2;
    if (!(theta >= -kHalfPi && theta <= kHalfPi)) throw std::invalid_argument("Viewpoint: theta outside [-pi/2, pi/2]");
    if (!(phi >= 0 && phi < 2 * std::numbers::pi)) throw std::invalid_argument("Viewpoint: phi outside [0, 2pi)");
  }

  static Viewpoint Degrees(double theta_deg, double phi_deg) {
    return Viewpoint(theta_deg * std::numbers::pi / 180, phi_deg * std::numbers::pi / 180);
  }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  double theta_degrees() const noexcept { return theta_ * 180 / std::numbers::pi; }
  double phi_degrees() const noexcept { return phi_ * 180 / std::numbers::pi; }

  /// Object rotation for this view: elevation first, then azimuth.
  Eigen::Matrix3d rotation() const {
    return (Eigen::AngleAxisd(phi_, Eigen::Vector3d::UnitY()) * Eigen::AngleAxisd(theta_, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
  }

  friend bool operator==(const Viewpoint&, const Viewpoint&) = default;

 private:
  double theta_ = 0;
  double phi_ = 0;
};

/// Ordered set of views. The default is the eight azimuths 0, 45, ..., 315 degrees at zero elevation.
class ViewpointSet {
 public:
  ViewpointSet() : ViewpointSet(Evenly(8)) {}
  explicit ViewpointSet(std::vector<Viewpoint> views) : views_(std::move(views)) {}

  /// count azimuths evenly spaced around the y-axis, starting at phi = 0.
  static ViewpointSet Evenly(int count) {
    if (count < 1) throw std::invalid_argument("ViewpointSet: need at least one view");
    std::vector<Viewpoint> views;
    views.reserve(count);
    for (int i = 0; i < count; ++i) views.emplace_back(0.0, 2 * std::numbers::pi * i / count);
    return ViewpointSet(std::move(views));
  }

  std::size_t size() const noexcept { return views_.size(); }
  const Viewpoint& operator[](std::size_t i) const { return views_[i]; }
  auto begin() const { return views_.begin(); }
  auto end() const { return views_.end(); }
  const std::vector<Viewpoint>& views() const noexcept { return views_; }

 private:
  std::vector<Viewpoint> views_;
};

enum class Resampling { kNearest, kTrilinear };

/// Parameters of the projection operators. Samples outside the grid read zero occupancy.
struct ProjectionConfig {
  double tau = 1.0;                         ///< accessibility falloff
  Resampling resampling = Resampling::kTrilinear;
  int supersample = 2;                      ///< rays per pixel side

  void validate() const {
    if (!(tau > 0)) throw std::invalid_argument("ProjectionConfig: tau must be > 0");
    if (supersample < 1) throw std::invalid_argument("ProjectionConfig: supersample must be >= 1");
  }
};

}  // namespace voxproj

#endif  // VOXPROJ_VIEW_HPP
