#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "propdetect/corpus.hpp"
#include "propdetect/embeddings.hpp"
#include "propdetect/registry.hpp"

namespace propdetect {

/// Feature fusion modes. With 300-d text vectors the layouts are
/// 335 = 300+3+9+23 (hybrid, fine technique counts),
/// 318 = 300+3+9+6  (hybrid_lite, coarse counts), and
/// 300 (text_only).
enum class FeatureMode { kHybrid, kHybridLite, kTextOnly };

FeatureMode feature_mode_from_string(const std::string& name);
std::string to_string(FeatureMode mode);

/// Named slices of a fused vector: text | genre | topic | persuasion.
struct FeatureLayout {
  int text_offset = 0;
  int text_len = 0;
  int genre_offset = 0;
  int genre_len = 0;
  int topic_offset = 0;
  int topic_len = 0;
  int persuasion_offset = 0;
  int persuasion_len = 0;  // 0 in text_only mode (and genre/topic too)

  int total() const {
    return text_len + genre_len + topic_len + persuasion_len;
  }
};

FeatureLayout layout_for(FeatureMode mode, int text_dim,
                         const TechniqueRegistry& registry);

struct FeatureVector {
  Eigen::VectorXd values;
  FeatureMode mode = FeatureMode::kHybrid;
};

/// Concatenates text vector, one-hot genre, one-hot topic, and raw
/// persuasion counts (fine or coarse per mode). Hybrid modes require an
/// annotation.
FeatureVector fuse(const Eigen::VectorXd& text_vec,
                   const ConceptAnnotation* annotation, FeatureMode mode,
                   const TechniqueRegistry& registry);

/// A fused matrix (row per article) plus the provenance needed to detect
/// silent feature drift.
struct FeatureMatrix {
  FeatureMode mode = FeatureMode::kHybrid;
  std::vector<std::string> ids;
  std::vector<int> labels;
  Eigen::MatrixXd rows;
  std::string registry_version;
  std::uint64_t embedding_checksum = 0;

  std::size_t size() const { return ids.size(); }
  int dim() const { return static_cast<int>(rows.cols()); }

  // Content hash over ids, labels, and values; feeds run fingerprints.
  std::uint64_t content_fingerprint() const;
};

FeatureMatrix featurize_corpus(const Corpus& corpus,
                               const EmbeddingTable& table, FeatureMode mode,
                               const TechniqueRegistry& registry);

// Versioned little-endian binary: magic, mode tag, registry version,
// embedding checksum, ids, labels, row-major float64 values.
void save_feature_matrix(const FeatureMatrix& matrix,
                         const std::string& path);
FeatureMatrix load_feature_matrix(const std::string& path);

void write_feature_matrix_csv(const FeatureMatrix& matrix,
                              const std::string& path);

}  // namespace propdetect
