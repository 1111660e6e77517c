#include "siu3r/raster.hpp"

#include "siu3r/parallel.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace siu3r {

namespace {

Scalar max_eigenvalue_2x2(const Mat2& m) {
  const Scalar half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const Scalar half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return half_tr + std::sqrt(half_diff * half_diff + m(0, 1) * m(0, 1));
}

}  // namespace

std::vector<ProjectedSplat> project(const GaussianField& field, const CameraModel& cam,
                                    Index height, Index width, const RasterConfig& cfg) {
  if (height <= 0 || width <= 0) throw std::invalid_argument("project: non-positive image size");
  const Scalar f_px = cam.fx * static_cast<Scalar>(width);
  const Scalar f_py = cam.fy * static_cast<Scalar>(height);
  const Scalar c_px = cam.cx * static_cast<Scalar>(width);
  const Scalar c_py = cam.cy * static_cast<Scalar>(height);
  const Mat3 rot_w2c = cam.rotation_c2w().transpose();

  std::vector<ProjectedSplat> out;
  out.reserve(field.prims.size());
  for (Index k = 0; k < field.count(); ++k) {
    const auto& g = field.prims[static_cast<std::size_t>(k)];
    if (g.alpha <= cfg.alpha_min) continue;
    const Vec3 p = cam.world_to_camera(g.mu);
    if (!(p.z() > cfg.near_plane)) continue;

    ProjectedSplat s;
    s.source_index = k;
    s.depth = p.z();
    s.mean2d = Vec2(f_px * p.x() / p.z() + c_px, f_py * p.y() / p.z() + c_py);

    const Mat3 cov3d_cam = [&] {
      const Mat3 r = quat_to_rotation(g.rot);
      const Mat3 cov_world = r * g.scale.array().square().matrix().asDiagonal() * r.transpose();
      return Mat3(rot_w2c * cov_world * rot_w2c.transpose());
    }();
    Eigen::Matrix<Scalar, 2, 3> jac;
    const Scalar iz = 1.0 / p.z();
    jac << f_px * iz, 0, -f_px * p.x() * iz * iz,
           0, f_py * iz, -f_py * p.y() * iz * iz;
    s.cov2d = jac * cov3d_cam * jac.transpose();
    s.cov2d(0, 0) += cfg.dilation;
    s.cov2d(1, 1) += cfg.dilation;

    // Radius where the weight drops below alpha_min / alpha; outside it the
    // blending definition skips the splat anyway.
    const Scalar lam = max_eigenvalue_2x2(s.cov2d);
    s.radius = std::sqrt(2.0 * std::max<Scalar>(0.0, std::log(g.alpha / cfg.alpha_min)) * lam);
    out.push_back(s);
  }
  return out;
}

namespace {

struct BlendLists {
  std::vector<std::vector<Index>> per_tile;  // indices into the splat vector
  Index tiles_x = 0, tiles_y = 0;
};

BlendLists bin_splats(const std::vector<ProjectedSplat>& splats, Index height, Index width,
                      const RasterConfig& cfg) {
  BlendLists lists;
  lists.tiles_x = (width + cfg.tile_size - 1) / cfg.tile_size;
  lists.tiles_y = (height + cfg.tile_size - 1) / cfg.tile_size;
  lists.per_tile.resize(static_cast<std::size_t>(lists.tiles_x * lists.tiles_y));
  for (Index si = 0; si < static_cast<Index>(splats.size()); ++si) {
    const auto& s = splats[static_cast<std::size_t>(si)];
    const Index x0 = std::max<Index>(0, static_cast<Index>(std::floor(s.mean2d.x() - s.radius)) - 1);
    const Index x1 = std::min<Index>(width - 1, static_cast<Index>(std::ceil(s.mean2d.x() + s.radius)));
    const Index y0 = std::max<Index>(0, static_cast<Index>(std::floor(s.mean2d.y() - s.radius)) - 1);
    const Index y1 = std::min<Index>(height - 1, static_cast<Index>(std::ceil(s.mean2d.y() + s.radius)));
    if (x0 > x1 || y0 > y1) continue;
    for (Index ty = y0 / cfg.tile_size; ty <= y1 / cfg.tile_size; ++ty)
      for (Index tx = x0 / cfg.tile_size; tx <= x1 / cfg.tile_size; ++tx)
        lists.per_tile[static_cast<std::size_t>(ty * lists.tiles_x + tx)].push_back(si);
  }
  return lists;
}

// attrs == nullptr means "use the primitive's own payload".
RenderOutput render_impl(const GaussianField& field, const Mat* attrs, const CameraModel& cam,
                         Index height, Index width, const RasterConfig& cfg) {
  const Index K = attrs ? attrs->cols() : field.attr_dim;
  if (K < 1) throw std::invalid_argument("render: attribute dimension must be >= 1");
  if (attrs && attrs->rows() != field.count())
    throw std::invalid_argument("render_semantic: attribute row count differs from field size");
  if (K > cfg.warn_attr_dim)
    std::cerr << "siu3r: rasterizing " << K
              << " attribute channels; expect high memory traffic\n";

  RenderOutput out;
  out.attr_image = Tensor<Scalar>({K, height, width});
  out.alpha_image = Tensor<Scalar>({height, width});
  out.depth_image = Tensor<Scalar>({height, width});

  std::vector<ProjectedSplat> splats = project(field, cam, height, width, cfg);
  std::stable_sort(splats.begin(), splats.end(), [](const ProjectedSplat& a, const ProjectedSplat& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.source_index < b.source_index;
  });
  BlendLists lists = bin_splats(splats, height, width, cfg);

  // Inverses and source opacities up front; per-pixel loop stays cheap.
  std::vector<Mat2> inv_cov(splats.size());
  std::vector<Scalar> base_alpha(splats.size());
  for (std::size_t si = 0; si < splats.size(); ++si) {
    const Mat2& c = splats[si].cov2d;
    const Scalar det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
    if (!(det > 0.0) || !(c(0, 0) > 0.0))
      throw std::logic_error("render: non-SPD 2D covariance after dilation");
    inv_cov[si] << c(1, 1) / det, -c(0, 1) / det, -c(1, 0) / det, c(0, 0) / det;
    base_alpha[si] = field.prims[static_cast<std::size_t>(splats[si].source_index)].alpha;
  }

  const Index n_tiles = lists.tiles_x * lists.tiles_y;
  parallel_for(n_tiles, [&](Index tile) {
    const Index tx = tile % lists.tiles_x;
    const Index ty = tile / lists.tiles_x;
    const auto& list = lists.per_tile[static_cast<std::size_t>(tile)];
    const Index i0 = ty * cfg.tile_size, i1 = std::min(height, i0 + cfg.tile_size);
    const Index j0 = tx * cfg.tile_size, j1 = std::min(width, j0 + cfg.tile_size);
    Vec acc(K);
    for (Index i = i0; i < i1; ++i) {
      for (Index j = j0; j < j1; ++j) {
        const Vec2 px(static_cast<Scalar>(j) + 0.5, static_cast<Scalar>(i) + 0.5);
        Scalar trans = 1.0, alpha_acc = 0.0, depth_acc = 0.0;
        acc.setZero();
        for (Index si : list) {
          const auto& s = splats[static_cast<std::size_t>(si)];
          const Vec2 d = px - s.mean2d;
          const Scalar power = 0.5 * d.dot(inv_cov[static_cast<std::size_t>(si)] * d);
          const Scalar a = std::min(cfg.alpha_cap, base_alpha[static_cast<std::size_t>(si)] * std::exp(-power));
          if (a < cfg.alpha_min) continue;
          const Scalar w = a * trans;
          if (attrs)
            acc += w * attrs->row(s.source_index).transpose();
          else
            acc += w * field.prims[static_cast<std::size_t>(s.source_index)].attr;
          alpha_acc += w;
          depth_acc += w * s.depth;
          trans *= (1.0 - a);
          if (trans < cfg.t_min) break;
        }
        for (Index k = 0; k < K; ++k) out.attr_image(k, i, j) = acc[k];
        out.alpha_image(i, j) = alpha_acc;
        out.depth_image(i, j) = depth_acc / std::max<Scalar>(alpha_acc, 1e-8);
      }
    }
  }, cfg.workers);

  return out;
}

}  // namespace

RenderOutput render(const GaussianField& field, const CameraModel& cam, Index height, Index width,
                    const RasterConfig& cfg) {
  return render_impl(field, nullptr, cam, height, width, cfg);
}

RenderOutput render_semantic(const GaussianField& field, const Mat& attrs, const CameraModel& cam,
                             Index height, Index width, const RasterConfig& cfg) {
  if (attrs.size() > 0 && (attrs.minCoeff() < 0.0 || attrs.maxCoeff() > 1.0))
    throw std::invalid_argument("render_semantic: attributes must lie in [0,1]");
  return render_impl(field, &attrs, cam, height, width, cfg);
}

}  // namespace siu3r
