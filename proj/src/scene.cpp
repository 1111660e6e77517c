#include "siu3r/scene.hpp"

#include <sstream>

namespace siu3r {

GaussianField GaussianField::dense(Index views, Index height, Index width, Index attr_dim) {
  GaussianField f;
  f.views = views;
  f.height = height;
  f.width = width;
  f.attr_dim = attr_dim;
  f.pixel_aligned = true;
  f.prims.resize(static_cast<std::size_t>(views * height * width));
  f.source_index.resize(f.prims.size());
  for (std::size_t k = 0; k < f.prims.size(); ++k) {
    f.prims[k].attr = Vec::Zero(attr_dim);
    f.source_index[k] = static_cast<Index>(k);
  }
  return f;
}

namespace {

std::string prim_tag(const GaussianField& field, Index k) {
  std::ostringstream os;
  os << "primitive " << k;
  if (field.pixel_aligned && field.width > 0 && field.height > 0) {
    const Index v = k / (field.height * field.width);
    const Index r = k % (field.height * field.width);
    os << " (v=" << v << ",i=" << r / field.width << ",j=" << r % field.width << ")";
  }
  return os.str();
}

}  // namespace

std::vector<std::string> validate_field(const GaussianField& field, const SceneLimits& limits) {
  std::vector<std::string> report;
  if (field.pixel_aligned &&
      field.count() != field.views * field.height * field.width) {
    std::ostringstream os;
    os << "pixel-aligned field has " << field.count() << " primitives, expected "
       << field.views * field.height * field.width;
    report.push_back(os.str());
  }
  if (!field.source_index.empty() && field.source_index.size() != field.prims.size())
    report.push_back("source_index length differs from primitive count");
  for (Index k = 0; k < field.count(); ++k) {
    const auto& g = field.prims[static_cast<std::size_t>(k)];
    if (!(g.alpha >= 0.0 && g.alpha <= 1.0))
      report.push_back(prim_tag(field, k) + ": opacity outside [0,1]");
    const Scalar qn = g.rot.norm();
    if (std::abs(qn - 1.0) > 1e-6)
      report.push_back(prim_tag(field, k) + ": quaternion not unit norm");
    for (int a = 0; a < 3; ++a) {
      if (!(g.scale[a] > 0.0))
        report.push_back(prim_tag(field, k) + ": non-positive scale");
      else if (g.scale[a] < limits.scale_min || g.scale[a] > limits.scale_max)
        report.push_back(prim_tag(field, k) + ": scale outside configured bounds");
    }
    if (g.attr.size() != field.attr_dim)
      report.push_back(prim_tag(field, k) + ": attribute length differs from field attr_dim");
    if (!g.mu.allFinite() || !g.attr.allFinite())
      report.push_back(prim_tag(field, k) + ": non-finite parameter");
  }
  return report;
}

std::vector<std::string> validate_camera(const CameraModel& cam, Index view_index) {
  std::vector<std::string> report;
  std::string tag = "camera";
  if (view_index >= 0) tag += " " + std::to_string(view_index);
  const Mat3 r = cam.rotation_c2w();
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6)
    report.push_back(tag + ": rotation block not orthonormal");
  else if (r.determinant() < 0)
    report.push_back(tag + ": rotation determinant is -1");
  if (!(cam.fx > 0 && cam.fy > 0)) report.push_back(tag + ": non-positive focal length");
  if (!(cam.cx > 0 && cam.cx < 1 && cam.cy > 0 && cam.cy < 1))
    report.push_back(tag + ": principal point outside (0,1)");
  if (!cam.pose_c2w.allFinite()) report.push_back(tag + ": non-finite pose");
  const Vec4 bottom = cam.pose_c2w.row(3);
  if ((bottom - Vec4(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-9)
    report.push_back(tag + ": pose bottom row is not (0,0,0,1)");
  return report;
}

std::vector<std::string> validate_bundle(const GaussianField& field,
                                         const SemanticPredictions& preds,
                                         const std::vector<CameraModel>& cams,
                                         const SceneLimits& limits) {
  std::vector<std::string> report = validate_field(field, limits);

  if (static_cast<Index>(cams.size()) != field.views)
    report.push_back("camera count differs from field view count");
  for (std::size_t v = 0; v < cams.size(); ++v) {
    auto cr = validate_camera(cams[v], static_cast<Index>(v));
    report.insert(report.end(), cr.begin(), cr.end());
  }

  if (preds.mask_logits.rank() != 4) {
    report.push_back("mask_logits is not rank 4 (N_q,V,H,W)");
  } else {
    if (preds.mask_logits.dim(1) != field.views || preds.mask_logits.dim(2) != field.height ||
        preds.mask_logits.dim(3) != field.width)
      report.push_back("mask_logits spatial dims differ from field dims");
    if (preds.mask_logits.dim(0) != preds.class_logits.rows())
      report.push_back("query-count mismatch between mask_logits and class_logits");
    if (!all_finite(preds.mask_logits)) report.push_back("mask_logits contain non-finite values");
  }
  if (!preds.class_logits.allFinite()) report.push_back("class_logits contain non-finite values");
  if (preds.queries.size() > 0) {
    if (preds.queries.rows() != preds.class_logits.rows())
      report.push_back("query-count mismatch between queries and class_logits");
    if (!preds.queries.allFinite()) report.push_back("queries contain non-finite values");
  }
  return report;
}

}  // namespace siu3r
