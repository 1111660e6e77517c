#pragma once

#include "siu3r/raster.hpp"
#include "siu3r/scene.hpp"

#include <optional>

namespace siu3r {

struct LiftConfig {
  Scalar tau_c = 0.5;         // query confidence threshold
  Scalar tau = 0.3;           // pixel probability threshold
  Scalar coverage_min = 0.5;  // below this accumulated alpha, keep pre-aggregation z
  Index max_aggregate_dim = 4096;
};

/// Queries surviving the confidence filter, with row-filtered predictions.
struct FilteredQueries {
  std::vector<Index> kept;      // original query indices, ascending
  Mat queries;                  // N_q' x d
  Tensor<Scalar> mask_logits;   // (N_q', V, H, W)
  Mat class_logits;             // N_q' x N_c
};

/// Class-wise query probability maps: z[v,n,c,i,j] = class_conf[n,c] *
/// mask_prob[n,v,i,j] before aggregation; after aggregation z holds the
/// rasterized fusion and no longer factorizes.
struct ClassQueryMaps {
  Tensor<Scalar> z;            // (V, N_q', N_c, H, W)
  std::vector<Index> kept;     // original query index per row n
  Mat class_conf;              // N_q' x N_c, softmaxed
  Tensor<Scalar> mask_prob;    // (N_q', V, H, W), sigmoided
  bool aggregated = false;
};

/// Keeps query n iff max softmax(class logits)[n] > tau_c and the argmax is
/// not the no-object class.
FilteredQueries filter_queries(const SemanticPredictions& preds, Scalar tau_c);

ClassQueryMaps class_query_maps(const Mat& class_logits, const Tensor<Scalar>& mask_logits,
                                std::vector<Index> kept);

/// Multi-view mask aggregation: each Gaussian takes the z vector of its own
/// pixel, the field is rasterized into every view with those payloads, and
/// pixels with accumulated alpha >= coverage_min adopt the alpha-normalized
/// rendering. Training-free; pure.
ClassQueryMaps aggregate_multiview(const ClassQueryMaps& maps, const GaussianField& field,
                                   const std::vector<CameraModel>& cams,
                                   const LiftConfig& cfg = {},
                                   const RasterConfig& raster_cfg = {});

/// Max/argmax cascade over z: winning query per class, winning class per
/// pixel, instance id = original index of the winning query at the winning
/// class. Pixels whose winning probability is below tau become background.
LabelMaps derive_label_maps(const ClassQueryMaps& maps, Scalar tau, const ClassTaxonomy& taxonomy);

/// Groups Gaussians by the label of their own pixel into semantic, instance,
/// panoptic, and optional text-referred index sets.
SegmentationField lift_to_3d(const LabelMaps& labels, const GaussianField& field,
                             const ClassTaxonomy& taxonomy,
                             std::optional<Index> text_id = std::nullopt,
                             const std::vector<Index>* kept_queries = nullptr);

}  // namespace siu3r
