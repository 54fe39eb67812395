#pragma once

// Planar RGB image with float pixels in [0,1]. Channels are dense Eigen
// matrices indexed (row=y, col=x), which keeps per-channel operations
// (flip, blend, jitter) single Eigen expressions.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssod {

using Eigen::MatrixXf;

struct ImageF {
  int width = 0;
  int height = 0;
  std::array<MatrixXf, 3> ch;

  ImageF() = default;
  ImageF(int w, int h) : width(w), height(h) {
    if (w <= 0 || h <= 0)
      throw std::invalid_argument("ImageF: non-positive dimensions");
    for (auto& c : ch) c = MatrixXf::Zero(h, w);
  }

  float& at(int c, int y, int x) { return ch[c](y, x); }
  float at(int c, int y, int x) const { return ch[c](y, x); }

  bool same_size(const ImageF& o) const {
    return width == o.width && height == o.height;
  }
};

inline void clip_pixels(ImageF& img) {
  for (auto& c : img.ch) c = c.cwiseMax(0.0f).cwiseMin(1.0f);
}

// Snap every pixel to the 8-bit grid (k/255). Generated datasets are
// quantized at creation so a PNG round-trip is lossless.
inline void quantize_pixels(ImageF& img) {
  for (auto& c : img.ch)
    c = ((c * 255.0f).array().round() / 255.0f).cwiseMax(0.0f).cwiseMin(1.0f);
}

inline ImageF hflip_image(const ImageF& img) {
  ImageF out(img.width, img.height);
  for (int c = 0; c < 3; ++c) out.ch[c] = img.ch[c].rowwise().reverse();
  return out;
}

inline float image_mean(const ImageF& img) {
  return (img.ch[0].mean() + img.ch[1].mean() + img.ch[2].mean()) / 3.0f;
}

// Bilinear resample (half-pixel centers, clamped at borders).
inline ImageF resize_image(const ImageF& img, int new_w, int new_h) {
  if (new_w <= 0 || new_h <= 0)
    throw std::invalid_argument("resize_image: non-positive target size");
  if (new_w == img.width && new_h == img.height) return img;
  ImageF out(new_w, new_h);
  const float sx = static_cast<float>(img.width) / new_w;
  const float sy = static_cast<float>(img.height) / new_h;
  for (int y = 0; y < new_h; ++y) {
    const float fy = (y + 0.5f) * sy - 0.5f;
    const int y0 = std::max(0, std::min(img.height - 1, (int)std::floor(fy)));
    const int y1 = std::min(img.height - 1, y0 + 1);
    const float wy = std::max(0.0f, std::min(1.0f, fy - y0));
    for (int x = 0; x < new_w; ++x) {
      const float fx = (x + 0.5f) * sx - 0.5f;
      const int x0 = std::max(0, std::min(img.width - 1, (int)std::floor(fx)));
      const int x1 = std::min(img.width - 1, x0 + 1);
      const float wx = std::max(0.0f, std::min(1.0f, fx - x0));
      for (int c = 0; c < 3; ++c) {
        const float top = img.ch[c](y0, x0) * (1 - wx) + img.ch[c](y0, x1) * wx;
        const float bot = img.ch[c](y1, x0) * (1 - wx) + img.ch[c](y1, x1) * wx;
        out.ch[c](y, x) = top * (1 - wy) + bot * wy;
      }
    }
  }
  return out;
}

// PNG I/O (8-bit RGB), implemented in image_io.cpp.
void write_png(const std::string& path, const ImageF& img);
ImageF read_png(const std::string& path);

}  // namespace ssod
