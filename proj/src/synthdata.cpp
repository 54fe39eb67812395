#include "ssod/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ssod/errors.hpp"
#include "ssod/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ssod {

namespace {

enum class ShapeKind {
  kCircle,
  kSquare,
  kTriangle,
  kDiamond,
  kPlus,
  kRing,
  kFrame,
  kTriangleDown,
};

struct ShapeSpec {
  ShapeKind kind;
  Box box;
  std::array<float, 3> color;
};

bool inside_shape(ShapeKind kind, const Box& b, double px, double py) {
  const double w = b.width(), h = b.height();
  const double nx = (px - b.cx()) / (0.5 * w);   // [-1,1] across the box
  const double ny = (py - b.cy()) / (0.5 * h);
  if (std::abs(nx) > 1.0 || std::abs(ny) > 1.0) return false;
  switch (kind) {
    case ShapeKind::kCircle:
      return nx * nx + ny * ny <= 1.0;
    case ShapeKind::kSquare:
      return true;
    case ShapeKind::kTriangle:
      // Apex at the top center, base along the bottom edge.
      return std::abs(nx) <= 0.5 * (ny + 1.0);
    case ShapeKind::kDiamond:
      return std::abs(nx) + std::abs(ny) <= 1.0;
    case ShapeKind::kPlus:
      return std::abs(nx) <= 1.0 / 3.0 || std::abs(ny) <= 1.0 / 3.0;
    case ShapeKind::kRing: {
      const double r2 = nx * nx + ny * ny;
      return r2 <= 1.0 && r2 >= 0.55 * 0.55;
    }
    case ShapeKind::kFrame:
      return std::abs(nx) >= 0.6 || std::abs(ny) >= 0.6;
    case ShapeKind::kTriangleDown:
      return std::abs(nx) <= 0.5 * (1.0 - ny);
  }
  return false;
}

// Square-ish shapes keep aspect 1; the rest draw height independently.
bool free_aspect(ShapeKind kind) {
  return kind == ShapeKind::kTriangle || kind == ShapeKind::kDiamond ||
         kind == ShapeKind::kTriangleDown;
}

// Low-frequency correlated noise: a coarse normal grid, bilinearly upsampled.
void add_background(ImageF& img, RngStream& rng) {
  const int W = img.width, H = img.height;
  std::array<float, 3> tint;
  for (auto& t : tint) t = static_cast<float>(rng.uniform(0.2, 0.8));

  const int step = 8;
  const int gw = W / step + 2, gh = H / step + 2;
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXf grid(gh, gw);
    for (int gy = 0; gy < gh; ++gy)
      for (int gx = 0; gx < gw; ++gx)
        grid(gy, gx) = static_cast<float>(rng.normal(0.0, 0.13));
    for (int y = 0; y < H; ++y) {
      const float fy = static_cast<float>(y) / step;
      const int y0 = static_cast<int>(fy);
      const float wy = fy - y0;
      for (int x = 0; x < W; ++x) {
        const float fx = static_cast<float>(x) / step;
        const int x0 = static_cast<int>(fx);
        const float wx = fx - x0;
        const float v = grid(y0, x0) * (1 - wx) * (1 - wy) +
                        grid(y0, x0 + 1) * wx * (1 - wy) +
                        grid(y0 + 1, x0) * (1 - wx) * wy +
                        grid(y0 + 1, x0 + 1) * wx * wy;
        img.ch[c](y, x) = tint[c] + v;
      }
    }
  }
  // Fine per-pixel grain.
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x)
        img.ch[c](y, x) += static_cast<float>(rng.normal(0.0, 0.02));
  clip_pixels(img);
}

std::array<float, 3> pick_color(RngStream& rng, const ImageF& img, const Box& at) {
  // Local background mean under the box; redraw until the color has some
  // contrast against it (bounded tries keep determinism simple).
  const int x0 = std::max(0, (int)at.x1), x1 = std::min(img.width - 1, (int)at.x2);
  const int y0 = std::max(0, (int)at.y1), y1 = std::min(img.height - 1, (int)at.y2);
  std::array<float, 3> bg = {0.5f, 0.5f, 0.5f};
  if (x1 >= x0 && y1 >= y0) {
    for (int c = 0; c < 3; ++c)
      bg[c] = img.ch[c].block(y0, x0, y1 - y0 + 1, x1 - x0 + 1).mean();
  }
  std::array<float, 3> color{};
  for (int tries = 0; tries < 8; ++tries) {
    for (auto& v : color) v = static_cast<float>(rng.uniform());
    float d2 = 0;
    for (int c = 0; c < 3; ++c) d2 += (color[c] - bg[c]) * (color[c] - bg[c]);
    if (d2 >= 0.35f * 0.35f) break;
  }
  return color;
}

std::string sample_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%06d", index);
  return buf;
}

std::string format_coord(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_coord(const json& j, const std::string& context) {
  if (!j.is_string()) throw ParseError("coordinate is not a decimal string in " + context);
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw ParseError("bad coordinate '" + s + "' in " + context);
  return v;
}

}  // namespace

const std::vector<std::string>& shape_class_names() {
  static const std::vector<std::string> names = {
      "circle", "square", "triangle", "diamond",
      "plus",   "ring",   "frame",    "triangle_down"};
  return names;
}

std::vector<ImageSample> generate_dataset(const GenerateConfig& cfg) {
  if (cfg.count <= 0) throw ConfigError("generate_dataset: count must be > 0");
  if (cfg.image_size < 64)
    throw ConfigError("generate_dataset: image_size must be >= 64");
  if (cfg.classes < 1 || cfg.classes > 8)
    throw ConfigError("generate_dataset: classes must be in [1,8]");
  if (cfg.max_shapes < 1)
    throw ConfigError("generate_dataset: max_shapes must be >= 1");

  std::vector<ImageSample> out;
  out.reserve(cfg.count);
  const double size = cfg.image_size;
  const double min_side = 10.0;
  const double max_side = std::min(28.0, size / 2.0 - 4.0);

  for (int i = 0; i < cfg.count; ++i) {
    RngStream rng(cfg.seed, StreamTag::kDatasetImage, {static_cast<std::uint64_t>(i)});
    ImageSample s;
    s.id = sample_id(i);
    s.pixels = ImageF(cfg.image_size, cfg.image_size);
    add_background(s.pixels, rng);

    const int n_shapes = 1 + rng.uniform_int(cfg.max_shapes);
    std::vector<ShapeSpec> specs;
    for (int k = 0; k < n_shapes; ++k) {
      const auto kind = static_cast<ShapeKind>(rng.uniform_int(cfg.classes));
      const double w = rng.uniform(min_side, max_side);
      double h = w;
      if (free_aspect(kind))
        h = std::clamp(rng.uniform(min_side, max_side), 0.5 * w, 2.0 * w);
      // Keep instances mostly separate: bounded rejection on overlap.
      bool placed = false;
      for (int tries = 0; tries < 20 && !placed; ++tries) {
        const double cx = rng.uniform(1.0 + w / 2, size - 1.0 - w / 2);
        const double cy = rng.uniform(1.0 + h / 2, size - 1.0 - h / 2);
        Box box(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2);
        bool clear = true;
        for (const auto& other : specs)
          if (iou(box, other.box) > 0.2) clear = false;
        if (!clear) continue;
        specs.push_back({kind, box, pick_color(rng, s.pixels, box)});
        placed = true;
      }
    }

    AnnotationSet ann;
    ann.source = AnnotationSource::HUMAN;
    for (const auto& spec : specs) {
      for (int y = std::max(0, (int)std::floor(spec.box.y1));
           y <= std::min(cfg.image_size - 1, (int)std::ceil(spec.box.y2)); ++y) {
        for (int x = std::max(0, (int)std::floor(spec.box.x1));
             x <= std::min(cfg.image_size - 1, (int)std::ceil(spec.box.x2)); ++x) {
          if (inside_shape(spec.kind, spec.box, x + 0.5, y + 0.5)) {
            for (int c = 0; c < 3; ++c) s.pixels.ch[c](y, x) = spec.color[c];
          }
        }
      }
      ann.items.push_back({spec.box, static_cast<int>(spec.kind), 1.0, 1.0});
    }
    quantize_pixels(s.pixels);
    s.annotations = std::move(ann);
    out.push_back(std::move(s));
  }
  return out;
}

DatasetSplit split_dataset(const std::vector<ImageSample>& samples,
                           double labeled_fraction, std::uint64_t seed) {
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0))
    throw ConfigError("split_dataset: labeled_fraction must be in (0,1]");
  const size_t n = samples.size();
  const size_t n_l = static_cast<size_t>(
      std::llround(labeled_fraction * static_cast<double>(n)));

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(seed, StreamTag::kDatasetSplit, {});
  for (size_t i = n; i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.uniform_int(static_cast<int>(i)));
    std::swap(order[i - 1], order[j]);
  }

  std::vector<char> labeled(n, 0);
  for (size_t i = 0; i < std::min(n_l, n); ++i) labeled[order[i]] = 1;

  DatasetSplit split;
  for (size_t i = 0; i < n; ++i) {
    if (labeled[i])
      split.labeled_ids.push_back(samples[i].id);
    else
      split.unlabeled_ids.push_back(samples[i].id);
  }
  return split;
}

Dataset::Dataset(std::vector<ImageSample> samples, DatasetSplit split,
                 std::vector<std::string> class_names)
    : samples_(std::move(samples)),
      split_(std::move(split)),
      class_names_(std::move(class_names)) {
  for (size_t i = 0; i < samples_.size(); ++i) index_[samples_[i].id] = i;
  for (const auto& id : split_.labeled_ids) {
    if (!index_.count(id))
      throw ConfigError("Dataset: split references unknown id " + id);
    labeled_[id] = true;
  }
  for (const auto& id : split_.unlabeled_ids) {
    if (!index_.count(id))
      throw ConfigError("Dataset: split references unknown id " + id);
    if (labeled_.count(id))
      throw ConfigError("Dataset: id in both split pools: " + id);
    labeled_[id] = false;
  }
}

const ImageSample& Dataset::sample(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ConfigError("Dataset: unknown sample id " + id);
  return samples_[it->second];
}

bool Dataset::has_sample(const std::string& id) const { return index_.count(id) > 0; }

bool Dataset::is_labeled(const std::string& id) const {
  auto it = labeled_.find(id);
  if (it == labeled_.end()) throw ConfigError("Dataset: id not in split: " + id);
  return it->second;
}

const AnnotationSet* Dataset::train_annotations(const std::string& id) const {
  if (!is_labeled(id)) return nullptr;
  const auto& s = sample(id);
  return s.annotations ? &*s.annotations : nullptr;
}

const AnnotationSet& Dataset::oracle_annotations(const std::string& id) const {
  const auto& s = sample(id);
  if (!s.annotations)
    throw ConfigError("Dataset: no ground truth stored for " + id);
  return *s.annotations;
}

void save_dataset(const std::string& dir, const std::vector<ImageSample>& samples,
                  const DatasetSplit& split,
                  const std::vector<std::string>& class_names, bool overwrite) {
  const fs::path root(dir);
  if (fs::exists(root) && !fs::is_empty(root) && !overwrite)
    throw ConfigError("save_dataset: " + dir +
                      " exists and is not empty (pass --force to overwrite)");
  fs::create_directories(root / "images");

  json j;
  j["classes"] = class_names;
  j["samples"] = json::array();
  for (const auto& s : samples) {
    if (!s.annotations)
      throw ConfigError("save_dataset: sample without annotations: " + s.id);
    json js;
    js["id"] = s.id;
    js["width"] = s.pixels.width;
    js["height"] = s.pixels.height;
    json boxes = json::array(), labels = json::array();
    for (const auto& a : s.annotations->items) {
      boxes.push_back({format_coord(a.box.x1), format_coord(a.box.y1),
                       format_coord(a.box.x2), format_coord(a.box.y2)});
      labels.push_back(a.class_id);
    }
    js["boxes"] = std::move(boxes);
    js["labels"] = std::move(labels);
    j["samples"].push_back(std::move(js));
    write_png((root / "images" / (s.id + ".png")).string(), s.pixels);
  }
  j["split"] = {{"labeled", split.labeled_ids}, {"unlabeled", split.unlabeled_ids}};

  std::ofstream out(root / "annotations.json");
  if (!out) throw std::runtime_error("save_dataset: cannot write annotations.json");
  out << j.dump(1) << "\n";
}

Dataset load_dataset(const std::string& dir) {
  const fs::path root(dir);
  std::ifstream in(root / "annotations.json");
  if (!in) throw ParseError("load_dataset: missing " + (root / "annotations.json").string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("load_dataset: malformed annotations.json: " +
                     std::string(e.what()));
  }

  std::vector<std::string> class_names;
  std::vector<ImageSample> samples;
  try {
    class_names = j.at("classes").get<std::vector<std::string>>();
    const int classes = static_cast<int>(class_names.size());
    for (const auto& js : j.at("samples")) {
      ImageSample s;
      s.id = js.at("id").get<std::string>();
      const int width = js.at("width").get<int>();
      const int height = js.at("height").get<int>();
      s.pixels = read_png((root / "images" / (s.id + ".png")).string());
      if (s.pixels.width != width || s.pixels.height != height)
        throw ParseError("load_dataset: size mismatch for record " + s.id);
      const auto& boxes = js.at("boxes");
      const auto& labels = js.at("labels");
      if (boxes.size() != labels.size())
        throw ParseError("load_dataset: boxes/labels length mismatch in record " + s.id);
      AnnotationSet ann;
      ann.source = AnnotationSource::HUMAN;
      for (size_t k = 0; k < boxes.size(); ++k) {
        const auto& b = boxes[k];
        if (!b.is_array() || b.size() != 4)
          throw ParseError("load_dataset: bad box in record " + s.id);
        const std::string ctx = "record " + s.id;
        Annotation a;
        try {
          a.box = Box(parse_coord(b[0], ctx), parse_coord(b[1], ctx),
                      parse_coord(b[2], ctx), parse_coord(b[3], ctx));
        } catch (const std::invalid_argument& e) {
          throw ParseError("load_dataset: degenerate box in record " + s.id);
        }
        if (a.box.x1 < 0 || a.box.y1 < 0 || a.box.x2 > width || a.box.y2 > height)
          throw ParseError("load_dataset: box outside image in record " + s.id);
        a.class_id = labels[k].get<int>();
        if (a.class_id < 0 || a.class_id >= classes)
          throw ParseError("load_dataset: label out of range in record " + s.id);
        ann.items.push_back(a);
      }
      s.annotations = std::move(ann);
      samples.push_back(std::move(s));
    }

    DatasetSplit split;
    split.labeled_ids = j.at("split").at("labeled").get<std::vector<std::string>>();
    split.unlabeled_ids = j.at("split").at("unlabeled").get<std::vector<std::string>>();
    return Dataset(std::move(samples), std::move(split), std::move(class_names));
  } catch (const json::exception& e) {
    throw ParseError("load_dataset: malformed annotations.json: " +
                     std::string(e.what()));
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_hash: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

std::string dataset_hash(const std::string& dir) {
  const fs::path root(dir);
  std::string acc = file_hash((root / "annotations.json").string());
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(root / "images"))
    names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  for (const auto& n : names)
    acc += file_hash((root / "images" / n).string());
  return fnv1a_hex(acc);
}

}  // namespace ssod
