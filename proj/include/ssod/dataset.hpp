#pragma once

// Dataset model: annotated image samples, the labeled/unlabeled split, the
// procedural shapes generator, and the on-disk format
// (images/<id>.png + annotations.json with decimal-string coordinates).

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssod/box.hpp"
#include "ssod/image.hpp"

namespace ssod {

enum class AnnotationSource { HUMAN, PSEUDO, MIXED };

// One annotated instance. `class_id` is a zero-based foreground class index
// into the dataset's class-name list. `weight` is the soft-label mass the box
// carries into the loss (1 for human and freshly generated pseudo boxes,
// scaled by the mixing coefficient after Mixup). `confidence` is the score the
// box had when it was generated (1 for human boxes); the unsupervised
// regression gate reads this pre-mix value.
struct Annotation {
  Box box;
  int class_id = 0;
  double weight = 1.0;
  double confidence = 1.0;
};

struct AnnotationSet {
  std::vector<Annotation> items;
  AnnotationSource source = AnnotationSource::HUMAN;

  size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  // Materialized per-box class vector of length classes+1 (background first):
  // weight on the hard class, zero elsewhere.
  Eigen::VectorXd class_weights(int item, int classes) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(classes + 1);
    v[items[item].class_id + 1] = items[item].weight;
    return v;
  }
};

struct ImageSample {
  std::string id;
  ImageF pixels;
  std::optional<AnnotationSet> annotations;
};

struct DatasetSplit {
  std::vector<std::string> labeled_ids;
  std::vector<std::string> unlabeled_ids;

  size_t n_labeled() const { return labeled_ids.size(); }
  size_t n_unlabeled() const { return unlabeled_ids.size(); }
};

struct GenerateConfig {
  std::uint64_t seed = 0;
  int count = 0;
  int image_size = 64;
  int classes = 3;
  int max_shapes = 3;
};

// Shape-kind names; the first `classes` entries are used.
const std::vector<std::string>& shape_class_names();

// Procedural shapes-on-noise generator. Deterministic in (seed, config);
// every sample carries tight HUMAN boxes.
std::vector<ImageSample> generate_dataset(const GenerateConfig& cfg);

// Deterministic labeled/unlabeled partition; |labeled| = round(fraction * n).
DatasetSplit split_dataset(const std::vector<ImageSample>& samples,
                           double labeled_fraction, std::uint64_t seed);

// An immutable loaded dataset. Training code reads annotations through
// train_annotations(), which refuses unlabeled ids; evaluation of pseudo-label
// quality on the unlabeled pool goes through the explicit oracle accessor.
class Dataset {
 public:
  Dataset(std::vector<ImageSample> samples, DatasetSplit split,
          std::vector<std::string> class_names);

  const std::vector<std::string>& class_names() const { return class_names_; }
  int num_classes() const { return static_cast<int>(class_names_.size()); }
  const DatasetSplit& split() const { return split_; }
  size_t size() const { return samples_.size(); }

  const ImageSample& sample(const std::string& id) const;
  bool has_sample(const std::string& id) const;

  // Null for ids in the unlabeled pool: their labels are withheld.
  const AnnotationSet* train_annotations(const std::string& id) const;

  // Ground truth regardless of split, for pseudo-label quality measurement
  // only. Call sites name their intent.
  const AnnotationSet& oracle_annotations(const std::string& id) const;

  bool is_labeled(const std::string& id) const;

 private:
  std::vector<ImageSample> samples_;
  DatasetSplit split_;
  std::vector<std::string> class_names_;
  std::map<std::string, size_t> index_;
  std::map<std::string, bool> labeled_;
};

// Directory layout: <dir>/images/<id>.png + <dir>/annotations.json.
// Box coordinates are serialized as decimal strings (%.17g) so they
// round-trip exactly.
void save_dataset(const std::string& dir, const std::vector<ImageSample>& samples,
                  const DatasetSplit& split,
                  const std::vector<std::string>& class_names,
                  bool overwrite = false);

Dataset load_dataset(const std::string& dir);

// Content fingerprint of a dataset directory (annotations + image bytes).
std::string dataset_hash(const std::string& dir);

// FNV-1a over a byte buffer, hex-encoded; shared by manifests.
std::string fnv1a_hex(const std::string& bytes);
std::string file_hash(const std::string& path);

}  // namespace ssod
