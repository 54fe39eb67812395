#pragma once

// Axis-aligned box algebra shared by the whole project: IoU, greedy NMS,
// flip/scale/translate, clipping, and the center/size delta codec used
// between anchors and regression targets. Everything here is a pure function.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssod {

// Corner-form box in continuous pixel units. Degenerate boxes (zero or
// negative extent) are rejected at construction.
struct Box {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

  Box() = default;
  Box(double x1_, double y1_, double x2_, double y2_)
      : x1(x1_), y1(y1_), x2(x2_), y2(y2_) {
    if (!(x1 < x2) || !(y1 < y2) || !std::isfinite(x1) || !std::isfinite(y1) ||
        !std::isfinite(x2) || !std::isfinite(y2)) {
      throw std::invalid_argument("Box: degenerate corners (" +
                                  std::to_string(x1_) + "," + std::to_string(y1_) +
                                  "," + std::to_string(x2_) + "," +
                                  std::to_string(y2_) + ")");
    }
  }

  // Fallible constructor for paths that may legitimately collapse a box
  // (clipping, decoding), where the caller drops the result instead.
  static std::optional<Box> make(double x1, double y1, double x2, double y2) {
    if (!(x1 < x2) || !(y1 < y2) || !std::isfinite(x1) || !std::isfinite(y1) ||
        !std::isfinite(x2) || !std::isfinite(y2)) {
      return std::nullopt;
    }
    return Box(x1, y1, x2, y2);
  }

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double cx() const { return 0.5 * (x1 + x2); }
  double cy() const { return 0.5 * (y1 + y2); }

  bool operator==(const Box& o) const {
    return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
  }
};

// Center/size offsets between an anchor and a target box:
//   tx = (xc - xa) / wa,  ty = (yc - ya) / ha,
//   tw = ln(w / wa),      th = ln(h / ha).
struct BoxDelta {
  double tx = 0.0, ty = 0.0, tw = 0.0, th = 0.0;
};

inline double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

inline double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

// Greedy descending-score suppression. Returns the kept input indices in
// descending score order; score ties are broken by input index (lower wins).
inline std::vector<int> nms(const std::vector<Box>& boxes,
                            const std::vector<double>& scores,
                            double iou_threshold) {
  if (boxes.size() != scores.size())
    throw std::invalid_argument("nms: boxes/scores length mismatch");
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw std::invalid_argument("nms: iou_threshold must be in (0,1)");
  std::vector<int> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<int> kept;
  std::vector<char> suppressed(boxes.size(), 0);
  for (int idx : order) {
    if (suppressed[idx]) continue;
    kept.push_back(idx);
    for (int other : order) {
      if (suppressed[other] || other == idx) continue;
      if (iou(boxes[idx], boxes[other]) > iou_threshold) suppressed[other] = 1;
    }
  }
  return kept;
}

inline Box hflip_box(const Box& b, double image_width) {
  return Box(image_width - b.x2, b.y1, image_width - b.x1, b.y2);
}

// Per-axis affine map: scale about the origin, then translate.
inline Box scale_translate_box(const Box& b, double sx, double sy, double dx,
                               double dy) {
  return Box(b.x1 * sx + dx, b.y1 * sy + dy, b.x2 * sx + dx, b.y2 * sy + dy);
}

// Clip to [0,W]x[0,H]; a box that collapses is dropped.
inline std::optional<Box> clip_box(const Box& b, double width, double height) {
  return Box::make(std::clamp(b.x1, 0.0, width), std::clamp(b.y1, 0.0, height),
                   std::clamp(b.x2, 0.0, width), std::clamp(b.y2, 0.0, height));
}

inline BoxDelta encode_delta(const Box& anchor, const Box& target) {
  BoxDelta d;
  d.tx = (target.cx() - anchor.cx()) / anchor.width();
  d.ty = (target.cy() - anchor.cy()) / anchor.height();
  d.tw = std::log(target.width() / anchor.width());
  d.th = std::log(target.height() / anchor.height());
  return d;
}

inline Box decode_delta(const Box& anchor, const BoxDelta& d) {
  const double cx = anchor.cx() + d.tx * anchor.width();
  const double cy = anchor.cy() + d.ty * anchor.height();
  const double w = anchor.width() * std::exp(d.tw);
  const double h = anchor.height() * std::exp(d.th);
  return Box(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
}

// Decode and clip to the supplied image extent.
inline std::optional<Box> decode_delta(const Box& anchor, const BoxDelta& d,
                                       double width, double height) {
  return clip_box(decode_delta(anchor, d), width, height);
}

}  // namespace ssod
