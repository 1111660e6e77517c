#pragma once

#include "siu3r/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace siu3r {

/// Reserved label for "no prediction here". Deliberately out of the id range
/// so dataset class ids pass through unchanged.
inline constexpr int kBackground = -1;

struct SceneLimits {
  Scalar scale_min = 0.5;
  Scalar scale_max = 15.0;
  Scalar quat_norm_tol = 1e-3;  // renormalize within this, reject beyond
};

/// One pixel-aligned Gaussian primitive. attr is RGB for rendering or a
/// semantic probability vector during multi-view aggregation.
struct GaussianPrimitive {
  Vec3 mu = Vec3::Zero();
  Scalar alpha = 0.0;
  Vec4 rot = Vec4(1, 0, 0, 0);  // unit quaternion, (w,x,y,z)
  Vec3 scale = Vec3::Ones();    // stddevs, scene units
  Vec attr;                     // length = field attr_dim
};

/// Dense V*H*W field of primitives; index (v,i,j) is the Gaussian predicted
/// at pixel (i,j) of view v. Edited fields lose that alignment and are
/// flagged sparse (render accepts them, lifting does not).
struct GaussianField {
  std::vector<GaussianPrimitive> prims;
  Index views = 0;
  Index height = 0;
  Index width = 0;
  Index attr_dim = 0;
  bool pixel_aligned = true;
  // original flat index per primitive, kept through edits
  std::vector<Index> source_index;

  Index count() const { return static_cast<Index>(prims.size()); }
  Index flat(Index v, Index i, Index j) const { return (v * height + i) * width + j; }
  GaussianPrimitive& at(Index v, Index i, Index j) { return prims[flat(v, i, j)]; }
  const GaussianPrimitive& at(Index v, Index i, Index j) const { return prims[flat(v, i, j)]; }

  static GaussianField dense(Index views, Index height, Index width, Index attr_dim);
};

/// Pinhole camera with width/height-normalized intrinsics and an
/// OpenCV-convention camera-to-world pose (+x right, +y down, +z forward).
struct CameraModel {
  Scalar fx = 1.0, fy = 1.0, cx = 0.5, cy = 0.5;
  Mat4 pose_c2w = Mat4::Identity();

  Mat3 rotation_c2w() const { return pose_c2w.block<3, 3>(0, 0); }
  Vec3 translation_c2w() const { return pose_c2w.block<3, 1>(0, 3); }
  Vec3 world_to_camera(const Vec3& p) const {
    return rotation_c2w().transpose() * (p - translation_c2w());
  }
  Vec3 camera_to_world(const Vec3& p) const { return rotation_c2w() * p + translation_c2w(); }
};

/// Raw network outputs for one scene.
struct SemanticPredictions {
  Tensor<Scalar> mask_logits;  // (N_q, V, H, W)
  Mat class_logits;            // N_q x N_c, last column = no-object
  Mat queries;                 // N_q x d, last-layer hidden states

  Index num_queries() const { return mask_logits.rank() == 4 ? mask_logits.dim(0) : 0; }
  Index num_classes() const { return class_logits.cols(); }
};

struct ClassTaxonomy {
  std::vector<std::string> names;  // size N_c, names.back() is no-object
  std::vector<bool> is_thing;      // size N_c, false at no_object

  Index num_classes() const { return static_cast<Index>(names.size()); }
  Index no_object() const { return num_classes() - 1; }
  bool thing(Index c) const { return is_thing[static_cast<std::size_t>(c)]; }
  bool stuff(Index c) const { return c != no_object() && !thing(c); }
};

/// Per-view semantic and instance id maps. Background is kBackground in both
/// maps simultaneously; instance ids are original query indices.
struct LabelMaps {
  Tensor<int> sem;  // (V, H, W)
  Tensor<int> ins;  // (V, H, W)

  Index views() const { return sem.rank() == 3 ? sem.dim(0) : 0; }
  Index height() const { return sem.rank() == 3 ? sem.dim(1) : 0; }
  Index width() const { return sem.rank() == 3 ? sem.dim(2) : 0; }
};

/// Lifted per-Gaussian index sets, keys as in the label maps. Indices are
/// flat positions into the source GaussianField.
struct SegmentationField {
  std::map<int, std::vector<Index>> sem_sets;
  std::map<int, std::vector<Index>> ins_sets;
  // panoptic = stuff classes as regions + things as instances
  std::map<int, std::vector<Index>> pano_stuff;
  std::map<int, std::vector<Index>> pano_things;
  std::optional<std::pair<int, std::vector<Index>>> text_set;
};

/// Checks every scene_core invariant and returns the violations found
/// (empty = valid). Purely observational.
std::vector<std::string> validate_bundle(const GaussianField& field,
                                         const SemanticPredictions& preds,
                                         const std::vector<CameraModel>& cams,
                                         const SceneLimits& limits = {});

std::vector<std::string> validate_field(const GaussianField& field, const SceneLimits& limits = {});
std::vector<std::string> validate_camera(const CameraModel& cam, Index view_index = -1);

}  // namespace siu3r
