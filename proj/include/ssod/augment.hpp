#pragma once

// Weak and strong augmentation pipelines. Weak is random horizontal flip
// only. Strong is color jitter + cutout followed by at most one of Mixup
// (convex pixel blend, label weights scaled by the blend coefficient) or
// Mosaic (side-by-side tiling with rescaled boxes). All transforms are pure:
// inputs are taken by const reference and never modified.

#include <optional>
#include <string>

#include "ssod/dataset.hpp"
#include "ssod/rng.hpp"

namespace ssod {

enum class MixKind { NONE, MIXUP, MOSAIC_H, MOSAIC_V };

struct AugmentationRecord {
  bool flipped = false;
  double brightness = 0.0;  // additive shift
  double contrast = 1.0;    // multiplicative factor about the image mean
  std::optional<Box> cutout_rect;
  MixKind mix_kind = MixKind::NONE;
  double lambda_m = 1.0;  // meaningful only when mix_kind == MIXUP
  std::string partner_id;
};

struct AugmentConfig {
  double alpha_m = 1.0;  // Beta(alpha_m, alpha_m) for the Mixup coefficient
  double jitter_brightness = 0.2;
  double jitter_contrast = 0.3;
  double p_cutout = 1.0;
  double cutout_frac_lo = 0.1;  // per-axis cutout size, fraction of W or H
  double cutout_frac_hi = 0.35;
  double p_mixup = 0.4;
  double p_mosaic = 0.4;

  void validate() const;
};

// Random horizontal flip with probability 1/2; boxes flipped with the pixels.
std::pair<ImageSample, AugmentationRecord> weak_augment(const ImageSample& sample,
                                                        RngStream& rng);

// Brightness/contrast jitter (clipped to [0,1]) plus one mean-filled cutout
// rectangle. Annotations pass through untouched.
ImageSample color_cutout(const ImageSample& sample, const AugmentConfig& cfg,
                         RngStream& rng, AugmentationRecord* record = nullptr);

// Convex blend with a fixed coefficient: pixels lambda*u + (1-lambda)*l,
// boxes unioned, pseudo-box weights scaled by lambda and partner-box weights
// by (1-lambda). The partner is resized to the unlabeled image first.
ImageSample mixup_with(const ImageSample& unlabeled, const ImageSample& labeled,
                       double lambda_m);

// Draws lambda_m ~ Beta(alpha_m, alpha_m), then blends as above.
ImageSample mixup(const ImageSample& unlabeled, const ImageSample& labeled,
                  double alpha_m, RngStream& rng, double* lambda_out = nullptr);

// Two-tile mosaic on the unlabeled image's canvas. Boxes are rescaled per
// axis (and the partner tile's shifted); boxes smaller than 16 px^2 after
// resizing are dropped. Weights are left unchanged.
ImageSample mosaic(const ImageSample& unlabeled, const ImageSample& labeled,
                   MixKind kind);

// Full strong pipeline: color_cutout always, then one of
// {nothing, mixup, mosaic} by the configured probabilities.
std::pair<ImageSample, AugmentationRecord> strong_augment(
    const ImageSample& unlabeled_with_pseudo, const ImageSample& labeled_partner,
    const AugmentConfig& cfg, RngStream& rng);

}  // namespace ssod
