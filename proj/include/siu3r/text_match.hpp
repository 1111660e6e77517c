#pragma once

#include "siu3r/types.hpp"

#include <vector>

namespace siu3r {

/// One single-head cross-attention layer: text rows attend over query hidden
/// states, residual added, no norm or feed-forward.
struct CrossAttentionLayer {
  Mat w_q;  // d_text x d_k
  Mat w_k;  // d x d_k
  Mat w_v;  // d x d_text
};

struct CrossAttentionStack {
  std::vector<CrossAttentionLayer> layers;  // L2 of them, default depth 6

  Index depth() const { return static_cast<Index>(layers.size()); }
  static CrossAttentionStack zeros(Index depth, Index d_text, Index d, Index d_k);
};

struct TextFeatures {
  Mat feats;  // N_t x d_text, one row per prompt

  Index num_prompts() const { return feats.rows(); }
};

struct QuerySelection {
  std::vector<Index> text_id;  // best query per prompt
  Mat scores;                  // N_t x N_q
};

/// Refined text features after the stack: per layer, scaled dot-product
/// attention with softmax over the N_q queries, value-projected queries
/// summed and added to the text row.
Mat attend(const TextFeatures& text, const Mat& queries, const CrossAttentionStack& stack);

/// score[t,n] = attend(text)[t] . q_n; text_id[t] = argmax_n (ties -> lowest).
QuerySelection select_query(const TextFeatures& text, const Mat& queries,
                            const CrossAttentionStack& stack);

/// Mean over prompts of cross-entropy between softmax(score row) and the
/// one-hot ground-truth query.
Scalar text_matching_loss(const Mat& scores, const Mat& gt_onehot);

/// Hungarian assignment between predicted masks and ground-truth text masks
/// on the BCE+dice matching cost (class term omitted); the winning query per
/// ground-truth mask becomes its one-hot target row.
Mat gt_assignment_from_masks(const std::vector<Tensor<Scalar>>& pred_masks,
                             const std::vector<Tensor<Scalar>>& gt_text_masks);

}  // namespace siu3r
