#pragma once

#include "siu3r/scene.hpp"

#include <vector>

namespace siu3r {

struct RasterConfig {
  Scalar near_plane = 0.01;
  Scalar dilation = 0.3;    // isotropic low-pass added to cov2d diagonal, px^2
  Scalar alpha_cap = 0.99;  // per-splat opacity ceiling
  Scalar t_min = 1e-4;      // transmittance cutoff, blending stops below it
  // Contributions with effective opacity below this are skipped. The culling
  // radius is derived from it, so tile culling drops nothing the blending
  // definition keeps.
  Scalar alpha_min = 1e-7;
  Index tile_size = 16;
  Index warn_attr_dim = 4096;
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// Screen-space footprint of one Gaussian in one view.
struct ProjectedSplat {
  Vec2 mean2d = Vec2::Zero();  // continuous pixel coords, pixel (i,j) center = (j+0.5, i+0.5)
  Mat2 cov2d = Mat2::Identity();
  Scalar depth = 0.0;  // camera-frame z
  Scalar radius = 0.0; // conservative pixel extent
  Index source_index = 0;
};

struct RenderOutput {
  Tensor<Scalar> attr_image;   // (K, H, W)
  Tensor<Scalar> alpha_image;  // (H, W), accumulated opacity in [0,1]
  Tensor<Scalar> depth_image;  // (H, W), alpha-normalized expected depth
};

/// Projects every primitive into the view; splats behind the near plane are
/// culled. cov2d is the first-order projection of R diag(s^2) R^T plus the
/// isotropic dilation.
std::vector<ProjectedSplat> project(const GaussianField& field, const CameraModel& cam,
                                    Index height, Index width, const RasterConfig& cfg = {});

/// Front-to-back alpha blending of the field's own attribute payload.
/// Per pixel: out = sum_i attr_i * a_i * T_i with T_i = prod_{j<i}(1 - a_j),
/// a_i = min(alpha_cap, alpha_i * exp(-0.5 d^T cov2d^-1 d)), splats in
/// ascending (depth, source_index) order.
RenderOutput render(const GaussianField& field, const CameraModel& cam, Index height, Index width,
                    const RasterConfig& cfg = {});

/// Same blending with the attribute payload swapped: attrs row k replaces
/// primitive k's attr. Rows must lie in [0,1]^K.
RenderOutput render_semantic(const GaussianField& field, const Mat& attrs, const CameraModel& cam,
                             Index height, Index width, const RasterConfig& cfg = {});

}  // namespace siu3r
