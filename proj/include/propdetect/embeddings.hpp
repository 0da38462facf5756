#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace propdetect {

enum class OovPolicy { kSkip, kZero, kSubwordHash };

OovPolicy oov_policy_from_string(const std::string& name);
std::string to_string(OovPolicy policy);

/// Immutable word-vector table loaded from the text format
/// ("V D" header, then one "token f1 .. fD" line per word).
class EmbeddingTable {
 public:
  /// Rejects malformed headers, rows whose width disagrees with the
  /// header, non-finite components, and files whose dimension differs
  /// from `expected_dim`.
  static EmbeddingTable load(const std::string& path, OovPolicy policy,
                             int expected_dim = 300);

  int dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  OovPolicy policy() const { return policy_; }
  std::uint64_t checksum() const { return checksum_; }

  bool contains(const std::string& token) const;
  // In-vocabulary lookup only; throws for unknown tokens.
  Eigen::VectorXd lookup(const std::string& token) const;

  /// Mean of the vectors of the text's tokens under the OOV policy:
  /// kSkip drops unknown tokens, kZero averages in a zero vector,
  /// kSubwordHash composes character n-gram (3..6) bucket vectors.
  /// An empty hit set yields the zero vector.
  Eigen::VectorXd embed_text(const std::string& text) const;

 private:
  EmbeddingTable() = default;

  bool resolve(const std::string& token, Eigen::VectorXd& out) const;
  void build_subword_buckets(int bucket_count);

  int dim_ = 0;
  OovPolicy policy_ = OovPolicy::kSkip;
  std::uint64_t checksum_ = 0;
  std::unordered_map<std::string, int> vocab_;
  Eigen::MatrixXd vectors_;  // row per word
  Eigen::MatrixXd buckets_;  // row per n-gram bucket (subword policy only)
  std::vector<int> bucket_fill_;
};

/// Lowercases and splits on runs of non-alphanumeric characters.
/// ASCII letters are case-folded; codepoints >= U+0080 count as word
/// characters except the Latin-1 symbol block and general punctuation,
/// and invalid UTF-8 bytes split tokens.
std::vector<std::string> tokenize(const std::string& text);

}  // namespace propdetect
