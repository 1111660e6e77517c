#pragma once

#include "siu3r/scene.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace siu3r {

/// Eq.-5 weights: L1, perceptual, mask, continuity, text.
struct LossWeights {
  Scalar l1 = 1.0;
  Scalar perceptual = 0.5;
  Scalar mask = 0.05;
  Scalar continuity = 0.05;
  Scalar text = 1.0;
};

/// Per-term weights of the bipartite matching cost, Mask2Former convention.
struct MatchCost {
  Scalar w_class = 2.0;
  Scalar w_bce = 5.0;
  Scalar w_dice = 5.0;
};

/// Externally supplied perceptual distance (two (K,H,W) images -> scalar).
/// The engine never bundles network weights; without a plugin the term is 0.
using PerceptualDistance = std::function<Scalar(const Tensor<Scalar>&, const Tensor<Scalar>&)>;

/// Minimum-cost bipartite assignment of an n x m matrix; returns min(n,m)
/// (row, col) pairs sorted by row. Globally optimal; among equal-cost optima
/// the lexicographically smallest pair list is returned.
std::vector<std::pair<Index, Index>> hungarian(const Mat& cost);

Scalar assignment_cost(const Mat& cost, const std::vector<std::pair<Index, Index>>& assignment);

// Shared mask-cost pieces. Probabilities are clamped to the sigmoid image of
// +/-kLogitCap so BCE stays finite on hard 0/1 masks.
Scalar mean_bce(const Tensor<Scalar>& prob, const Tensor<Scalar>& gt);
Scalar dice_coefficient(const Tensor<Scalar>& prob, const Tensor<Scalar>& gt);

struct MaskLossResult {
  Scalar loss = 0.0;
  Scalar class_term = 0.0;
  Scalar bce_term = 0.0;
  Scalar dice_term = 0.0;
  Scalar no_object_term = 0.0;
  std::vector<std::pair<Index, Index>> assignment;  // (query, gt) pairs
};

/// Hungarian-matched segmentation loss: class CE + mask BCE + dice over the
/// matched pairs, plus CE toward no-object for unmatched queries, each term
/// mean-reduced.
MaskLossResult mask_loss(const SemanticPredictions& preds,
                         const std::vector<Tensor<Scalar>>& gt_masks,
                         const std::vector<Index>& gt_classes, Index num_classes,
                         const MatchCost& cost = {});

/// Intra-instance depth continuity: sum over instances and member pixels of
/// the squared gap to the mean depth of the 4-connected same-instance
/// neighborhood. Pixels with no same-instance neighbor contribute 0.
Scalar continuity_loss(const Tensor<Scalar>& depth, const LabelMaps& labels);
Tensor<Scalar> continuity_loss_grad(const Tensor<Scalar>& depth, const LabelMaps& labels);

Scalar photometric_l1(const Tensor<Scalar>& img, const Tensor<Scalar>& gt);
Tensor<Scalar> photometric_l1_grad(const Tensor<Scalar>& img, const Tensor<Scalar>& gt);

struct LossComponents {
  Scalar l1 = 0.0;
  Scalar perceptual = 0.0;  // 0 when no plugin is supplied
  Scalar mask = 0.0;
  Scalar continuity = 0.0;
  Scalar text = 0.0;
};

Scalar total_loss(const LossComponents& components, const LossWeights& weights = {});

/// Max over coordinates of |g_analytic - g_fd| / max(1, |g_fd|) with central
/// differences of step eps.
Scalar grad_check(const std::function<Scalar(const Vec&)>& f, const Vec& grad_analytic,
                  const Vec& params, Scalar eps = 1e-4);

}  // namespace siu3r
