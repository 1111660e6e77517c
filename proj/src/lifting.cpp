#include "siu3r/lifting.hpp"

#include <algorithm>
#include <stdexcept>

namespace siu3r {

FilteredQueries filter_queries(const SemanticPredictions& preds, Scalar tau_c) {
  if (!(tau_c > 0.0 && tau_c < 1.0)) throw std::invalid_argument("filter_queries: tau_c outside (0,1)");
  if (preds.mask_logits.rank() != 4) throw std::invalid_argument("filter_queries: mask_logits must be (N_q,V,H,W)");
  const Index n_q = preds.class_logits.rows();
  const Index no_object = preds.class_logits.cols() - 1;
  if (preds.mask_logits.dim(0) != n_q)
    throw std::invalid_argument("filter_queries: query-count mismatch");

  FilteredQueries out;
  for (Index n = 0; n < n_q; ++n) {
    const Vec probs = softmax(preds.class_logits.row(n));
    const Index best = argmax_low(probs);
    if (probs[best] > tau_c && best != no_object) out.kept.push_back(n);
  }

  const Index n_kept = static_cast<Index>(out.kept.size());
  const Index views = preds.mask_logits.dim(1);
  const Index h = preds.mask_logits.dim(2);
  const Index w = preds.mask_logits.dim(3);
  out.class_logits.resize(n_kept, preds.class_logits.cols());
  out.queries.resize(n_kept, preds.queries.cols());
  out.mask_logits = Tensor<Scalar>({n_kept, views, h, w});
  for (Index r = 0; r < n_kept; ++r) {
    const Index n = out.kept[static_cast<std::size_t>(r)];
    out.class_logits.row(r) = preds.class_logits.row(n);
    if (preds.queries.rows() > n) out.queries.row(r) = preds.queries.row(n);
    for (Index v = 0; v < views; ++v)
      for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < w; ++j)
          out.mask_logits(r, v, i, j) = preds.mask_logits(n, v, i, j);
  }
  return out;
}

ClassQueryMaps class_query_maps(const Mat& class_logits, const Tensor<Scalar>& mask_logits,
                                std::vector<Index> kept) {
  if (mask_logits.rank() != 4) throw std::invalid_argument("class_query_maps: mask_logits must be (N_q',V,H,W)");
  if (class_logits.rows() != mask_logits.dim(0))
    throw std::invalid_argument("class_query_maps: query-count mismatch");
  if (!class_logits.allFinite() || !all_finite(mask_logits))
    throw std::invalid_argument("class_query_maps: non-finite logits");

  const Index n_q = class_logits.rows();
  const Index n_c = class_logits.cols();
  const Index views = mask_logits.dim(1);
  const Index h = mask_logits.dim(2);
  const Index w = mask_logits.dim(3);

  ClassQueryMaps maps;
  maps.kept = std::move(kept);
  maps.class_conf.resize(n_q, n_c);
  for (Index n = 0; n < n_q; ++n) maps.class_conf.row(n) = softmax(class_logits.row(n)).transpose();
  maps.mask_prob = Tensor<Scalar>({n_q, views, h, w});
  for (Index flat = 0; flat < mask_logits.size(); ++flat)
    maps.mask_prob[flat] = sigmoid(mask_logits[flat]);

  maps.z = Tensor<Scalar>({views, n_q, n_c, h, w});
  for (Index v = 0; v < views; ++v)
    for (Index n = 0; n < n_q; ++n)
      for (Index c = 0; c < n_c; ++c)
        for (Index i = 0; i < h; ++i)
          for (Index j = 0; j < w; ++j)
            maps.z(v, n, c, i, j) = maps.class_conf(n, c) * maps.mask_prob(n, v, i, j);
  return maps;
}

ClassQueryMaps aggregate_multiview(const ClassQueryMaps& maps, const GaussianField& field,
                                   const std::vector<CameraModel>& cams, const LiftConfig& cfg,
                                   const RasterConfig& raster_cfg) {
  if (maps.kept.empty()) return maps;
  if (!field.pixel_aligned)
    throw std::invalid_argument("aggregate_multiview: field must be pixel-aligned");
  const Index views = maps.z.dim(0);
  const Index n_q = maps.z.dim(1);
  const Index n_c = maps.z.dim(2);
  const Index h = maps.z.dim(3);
  const Index w = maps.z.dim(4);
  if (field.views != views || field.height != h || field.width != w)
    throw std::invalid_argument("aggregate_multiview: field dims differ from maps");
  if (static_cast<Index>(cams.size()) != views)
    throw std::invalid_argument("aggregate_multiview: camera count differs from views");
  const Index k_agg = n_q * n_c;
  if (k_agg > cfg.max_aggregate_dim)
    throw std::invalid_argument("aggregate_multiview: attribute budget exceeded");

  // Each Gaussian takes the z vector of its own pixel (spatial indexing of Z).
  Mat attrs(field.count(), k_agg);
  for (Index v = 0; v < views; ++v)
    for (Index i = 0; i < h; ++i)
      for (Index j = 0; j < w; ++j) {
        const Index row = field.flat(v, i, j);
        for (Index n = 0; n < n_q; ++n)
          for (Index c = 0; c < n_c; ++c)
            attrs(row, n * n_c + c) = maps.z(v, n, c, i, j);
      }

  ClassQueryMaps out = maps;
  out.aggregated = true;
  for (Index v = 0; v < views; ++v) {
    const RenderOutput ro = render_semantic(field, attrs, cams[static_cast<std::size_t>(v)], h, w, raster_cfg);
    for (Index i = 0; i < h; ++i)
      for (Index j = 0; j < w; ++j) {
        const Scalar a = ro.alpha_image(i, j);
        if (a < cfg.coverage_min) continue;  // keep pre-aggregation z
        for (Index n = 0; n < n_q; ++n)
          for (Index c = 0; c < n_c; ++c) {
            const Scalar fused = ro.attr_image(n * n_c + c, i, j) / a;
            out.z(v, n, c, i, j) = std::clamp<Scalar>(fused, 0.0, 1.0);
          }
      }
  }
  return out;
}

LabelMaps derive_label_maps(const ClassQueryMaps& maps, Scalar tau, const ClassTaxonomy& taxonomy) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("derive_label_maps: tau outside (0,1)");
  const Index views = maps.z.rank() == 5 ? maps.z.dim(0) : 0;
  const Index n_q = views > 0 ? maps.z.dim(1) : 0;
  const Index n_c = views > 0 ? maps.z.dim(2) : 0;
  const Index h = views > 0 ? maps.z.dim(3) : 0;
  const Index w = views > 0 ? maps.z.dim(4) : 0;
  if (n_q > 0 && n_c != taxonomy.num_classes())
    throw std::invalid_argument("derive_label_maps: class count differs from taxonomy");

  LabelMaps labels;
  labels.sem = Tensor<int>({views, h, w}, kBackground);
  labels.ins = Tensor<int>({views, h, w}, kBackground);
  if (n_q == 0) return labels;

  const Index no_object = taxonomy.no_object();
  for (Index v = 0; v < views; ++v)
    for (Index i = 0; i < h; ++i)
      for (Index j = 0; j < w; ++j) {
        // winning query per class, then winning class; ties toward lower index
        Scalar best_p = -1.0;
        Index best_c = -1, best_n = -1;
        for (Index c = 0; c < n_c; ++c) {
          if (c == no_object) continue;
          Scalar class_p = -1.0;
          Index class_n = -1;
          for (Index n = 0; n < n_q; ++n) {
            const Scalar p = maps.z(v, n, c, i, j);
            if (p > class_p) {
              class_p = p;
              class_n = n;
            }
          }
          if (class_p > best_p) {
            best_p = class_p;
            best_c = c;
            best_n = class_n;
          }
        }
        if (best_p < tau) continue;  // background
        labels.sem(v, i, j) = static_cast<int>(best_c);
        labels.ins(v, i, j) = static_cast<int>(maps.kept[static_cast<std::size_t>(best_n)]);
      }
  return labels;
}

SegmentationField lift_to_3d(const LabelMaps& labels, const GaussianField& field,
                             const ClassTaxonomy& taxonomy, std::optional<Index> text_id,
                             const std::vector<Index>* kept_queries) {
  if (!field.pixel_aligned) throw std::invalid_argument("lift_to_3d: field must be pixel-aligned");
  if (labels.views() != field.views || labels.height() != field.height ||
      labels.width() != field.width)
    throw std::invalid_argument("lift_to_3d: label dims differ from field dims");
  if (text_id && kept_queries &&
      std::find(kept_queries->begin(), kept_queries->end(), *text_id) == kept_queries->end())
    throw std::invalid_argument("lift_to_3d: text_id is not a kept query");

  SegmentationField seg;
  for (Index v = 0; v < field.views; ++v)
    for (Index i = 0; i < field.height; ++i)
      for (Index j = 0; j < field.width; ++j) {
        const int sem = labels.sem(v, i, j);
        const int ins = labels.ins(v, i, j);
        if (sem == kBackground) continue;
        const Index flat = field.flat(v, i, j);
        seg.sem_sets[sem].push_back(flat);
        seg.ins_sets[ins].push_back(flat);
        if (taxonomy.stuff(sem))
          seg.pano_stuff[sem].push_back(flat);
        else
          seg.pano_things[ins].push_back(flat);
      }
  if (text_id) {
    auto it = seg.ins_sets.find(static_cast<int>(*text_id));
    seg.text_set = {static_cast<int>(*text_id),
                    it == seg.ins_sets.end() ? std::vector<Index>{} : it->second};
  }
  return seg;
}

}  // namespace siu3r
