#include "ssod/augment.hpp"

#include <algorithm>
#include <cmath>

#include "ssod/errors.hpp"

namespace ssod {

void AugmentConfig::validate() const {
  if (!(alpha_m > 0.0)) throw ConfigError("augment: alpha_m must be > 0");
  if (jitter_brightness < 0.0 || jitter_contrast < 0.0 || jitter_contrast >= 1.0)
    throw ConfigError("augment: jitter ranges invalid");
  for (double p : {p_cutout, p_mixup, p_mosaic})
    if (p < 0.0 || p > 1.0) throw ConfigError("augment: probability out of [0,1]");
  if (p_mixup + p_mosaic > 1.0)
    throw ConfigError("augment: p_mixup + p_mosaic must be <= 1");
  if (!(cutout_frac_lo > 0.0 && cutout_frac_lo <= cutout_frac_hi &&
        cutout_frac_hi < 1.0))
    throw ConfigError("augment: cutout fraction range invalid");
}

std::pair<ImageSample, AugmentationRecord> weak_augment(const ImageSample& sample,
                                                        RngStream& rng) {
  AugmentationRecord rec;
  rec.flipped = rng.bernoulli(0.5);
  if (!rec.flipped) return {sample, rec};

  ImageSample out;
  out.id = sample.id;
  out.pixels = hflip_image(sample.pixels);
  if (sample.annotations) {
    AnnotationSet ann = *sample.annotations;
    for (auto& a : ann.items) a.box = hflip_box(a.box, sample.pixels.width);
    out.annotations = std::move(ann);
  }
  return {std::move(out), rec};
}

ImageSample color_cutout(const ImageSample& sample, const AugmentConfig& cfg,
                         RngStream& rng, AugmentationRecord* record) {
  ImageSample out = sample;
  const double b = rng.uniform(-cfg.jitter_brightness, cfg.jitter_brightness);
  const double c = rng.uniform(1.0 - cfg.jitter_contrast, 1.0 + cfg.jitter_contrast);
  const float mean = image_mean(out.pixels);
  for (auto& chan : out.pixels.ch)
    chan = ((chan.array() - mean) * static_cast<float>(c) + mean +
            static_cast<float>(b))
               .matrix();
  clip_pixels(out.pixels);

  std::optional<Box> rect;
  if (rng.bernoulli(cfg.p_cutout)) {
    const double W = out.pixels.width, H = out.pixels.height;
    const double cw = rng.uniform(cfg.cutout_frac_lo, cfg.cutout_frac_hi) * W;
    const double chh = rng.uniform(cfg.cutout_frac_lo, cfg.cutout_frac_hi) * H;
    const double x1 = rng.uniform(0.0, W - cw);
    const double y1 = rng.uniform(0.0, H - chh);
    rect = Box(x1, y1, x1 + cw, y1 + chh);
    std::array<float, 3> fill;
    for (int k = 0; k < 3; ++k) fill[k] = out.pixels.ch[k].mean();
    const int ix1 = static_cast<int>(std::floor(rect->x1));
    const int iy1 = static_cast<int>(std::floor(rect->y1));
    const int ix2 = std::min(out.pixels.width, static_cast<int>(std::ceil(rect->x2)));
    const int iy2 = std::min(out.pixels.height, static_cast<int>(std::ceil(rect->y2)));
    for (int k = 0; k < 3; ++k)
      out.pixels.ch[k].block(iy1, ix1, iy2 - iy1, ix2 - ix1).setConstant(fill[k]);
  }

  if (record) {
    record->brightness = b;
    record->contrast = c;
    record->cutout_rect = rect;
  }
  return out;
}

namespace {

// Resize a sample (pixels and boxes) to the given dimensions.
ImageSample resize_sample(const ImageSample& s, int w, int h) {
  if (s.pixels.width == w && s.pixels.height == h) return s;
  ImageSample out;
  out.id = s.id;
  out.pixels = resize_image(s.pixels, w, h);
  if (s.annotations) {
    const double sx = static_cast<double>(w) / s.pixels.width;
    const double sy = static_cast<double>(h) / s.pixels.height;
    AnnotationSet ann = *s.annotations;
    for (auto& a : ann.items) a.box = scale_translate_box(a.box, sx, sy, 0, 0);
    out.annotations = std::move(ann);
  }
  return out;
}

const AnnotationSet& require_annotations(const ImageSample& s, const char* who) {
  if (!s.annotations)
    throw std::logic_error(std::string(who) + ": sample '" + s.id +
                           "' carries no annotations");
  return *s.annotations;
}

}  // namespace

ImageSample mixup_with(const ImageSample& unlabeled, const ImageSample& labeled,
                       double lambda_m) {
  const ImageSample partner =
      resize_sample(labeled, unlabeled.pixels.width, unlabeled.pixels.height);
  if (!partner.pixels.same_size(unlabeled.pixels))
    throw std::logic_error("mixup: dimension mismatch after resize");

  const auto& pseudo = require_annotations(unlabeled, "mixup");
  const auto& human = require_annotations(partner, "mixup");

  ImageSample out;
  out.id = unlabeled.id;
  out.pixels = ImageF(unlabeled.pixels.width, unlabeled.pixels.height);
  const auto lam = static_cast<float>(lambda_m);
  for (int c = 0; c < 3; ++c)
    out.pixels.ch[c] = lam * unlabeled.pixels.ch[c] + (1 - lam) * partner.pixels.ch[c];

  AnnotationSet ann;
  ann.source = AnnotationSource::MIXED;
  for (auto a : pseudo.items) {
    a.weight *= lambda_m;
    ann.items.push_back(a);
  }
  for (auto a : human.items) {
    a.weight *= (1.0 - lambda_m);
    ann.items.push_back(a);
  }
  out.annotations = std::move(ann);
  return out;
}

ImageSample mixup(const ImageSample& unlabeled, const ImageSample& labeled,
                  double alpha_m, RngStream& rng, double* lambda_out) {
  const double lam = rng.beta(alpha_m, alpha_m);
  if (lambda_out) *lambda_out = lam;
  return mixup_with(unlabeled, labeled, lam);
}

ImageSample mosaic(const ImageSample& unlabeled, const ImageSample& labeled,
                   MixKind kind) {
  if (kind != MixKind::MOSAIC_H && kind != MixKind::MOSAIC_V)
    throw std::logic_error("mosaic: kind must be MOSAIC_H or MOSAIC_V");
  const int W = unlabeled.pixels.width, H = unlabeled.pixels.height;
  const bool horizontal = kind == MixKind::MOSAIC_H;
  const int first_w = horizontal ? W / 2 : W;
  const int first_h = horizontal ? H : H / 2;
  const int second_w = horizontal ? W - first_w : W;
  const int second_h = horizontal ? H : H - first_h;

  const ImageSample a = resize_sample(unlabeled, first_w, first_h);
  const ImageSample b = resize_sample(labeled, second_w, second_h);
  const auto& ann_a = require_annotations(a, "mosaic");
  const auto& ann_b = require_annotations(b, "mosaic");

  ImageSample out;
  out.id = unlabeled.id;
  out.pixels = ImageF(W, H);
  const int dx = horizontal ? first_w : 0;
  const int dy = horizontal ? 0 : first_h;
  for (int c = 0; c < 3; ++c) {
    out.pixels.ch[c].block(0, 0, first_h, first_w) = a.pixels.ch[c];
    out.pixels.ch[c].block(dy, dx, second_h, second_w) = b.pixels.ch[c];
  }

  AnnotationSet ann;
  ann.source = AnnotationSource::MIXED;
  constexpr double kMinArea = 16.0;
  for (const auto& item : ann_a.items)
    if (item.box.area() >= kMinArea) ann.items.push_back(item);
  for (auto item : ann_b.items) {
    if (item.box.area() < kMinArea) continue;
    item.box = scale_translate_box(item.box, 1.0, 1.0, dx, dy);
    ann.items.push_back(item);
  }
  out.annotations = std::move(ann);
  return out;
}

std::pair<ImageSample, AugmentationRecord> strong_augment(
    const ImageSample& unlabeled_with_pseudo, const ImageSample& labeled_partner,
    const AugmentConfig& cfg, RngStream& rng) {
  AugmentationRecord rec;
  ImageSample out = color_cutout(unlabeled_with_pseudo, cfg, rng, &rec);

  const double roll = rng.uniform();
  if (roll < cfg.p_mixup) {
    rec.mix_kind = MixKind::MIXUP;
    rec.partner_id = labeled_partner.id;
    out = mixup(out, labeled_partner, cfg.alpha_m, rng, &rec.lambda_m);
  } else if (roll < cfg.p_mixup + cfg.p_mosaic) {
    rec.mix_kind = rng.bernoulli(0.5) ? MixKind::MOSAIC_H : MixKind::MOSAIC_V;
    rec.partner_id = labeled_partner.id;
    out = mosaic(out, labeled_partner, rec.mix_kind);
  }
  return {std::move(out), rec};
}

}  // namespace ssod
