#include "propdetect/embeddings.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"

namespace propdetect {

namespace {

constexpr int kSubwordBuckets = 4096;
constexpr int kNgramMin = 3;
constexpr int kNgramMax = 6;

bool is_word_codepoint(std::uint32_t cp) {
  if (cp < 0x80) {
    return std::isalnum(static_cast<int>(cp)) != 0;
  }
  // Latin-1 punctuation/symbols and general punctuation split tokens;
  // other non-ASCII codepoints count as word characters.
  if (cp >= 0x00A0 && cp <= 0x00BF) return false;
  if (cp == 0x00D7 || cp == 0x00F7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  return true;
}

// Decodes one UTF-8 codepoint; invalid sequences yield 0xFFFD and
// consume a single byte.
std::uint32_t decode_utf8(const std::string& text, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(text[k]);
  };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  int len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    i += 1;
    return 0xFFFD;
  }
  if (i + len > text.size()) {
    i += 1;
    return 0xFFFD;
  }
  for (int k = 1; k < len; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) {
      i += 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (byte(i + k) & 0x3F);
  }
  i += len;
  return cp;
}

void append_codepoint_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::uint32_t cp = decode_utf8(text, i);
    if (cp != 0xFFFD && is_word_codepoint(cp)) {
      const std::uint32_t folded =
          (cp < 0x80) ? static_cast<std::uint32_t>(
                            std::tolower(static_cast<int>(cp)))
                      : cp;
      append_codepoint_utf8(current, folded);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

OovPolicy oov_policy_from_string(const std::string& name) {
  if (name == "skip") return OovPolicy::kSkip;
  if (name == "zero") return OovPolicy::kZero;
  if (name == "subword_hash" || name == "subword-hash") {
    return OovPolicy::kSubwordHash;
  }
  throw ParseError("unknown oov policy '" + name + "'");
}

std::string to_string(OovPolicy policy) {
  switch (policy) {
    case OovPolicy::kZero: return "zero";
    case OovPolicy::kSubwordHash: return "subword_hash";
    default: return "skip";
  }
}

EmbeddingTable EmbeddingTable::load(const std::string& path, OovPolicy policy,
                                    int expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  EmbeddingTable table;
  table.policy_ = policy;

  std::string header;
  if (!std::getline(in, header)) {
    throw ParseError(path + ": missing header line");
  }
  long vocab_count = 0;
  long dim = 0;
  {
    std::istringstream hs(header);
    std::string extra;
    if (!(hs >> vocab_count >> dim) || (hs >> extra) || vocab_count <= 0 ||
        dim <= 0) {
      throw ParseError(path + ": malformed header '" + header + "'");
    }
  }
  if (dim != expected_dim) {
    throw ValidationError(path + ": dimension mismatch: file has " +
                          std::to_string(dim) + ", configuration expects " +
                          std::to_string(expected_dim));
  }
  table.dim_ = static_cast<int>(dim);
  table.vectors_.resize(vocab_count, dim);

  std::uint64_t checksum = fnv1a64(header);
  std::string line;
  long row = 0;
  for (long lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    checksum = fnv1a64(line, checksum);
    if (row >= vocab_count) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": more rows than the header declares");
    }
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty row");
    }
    for (long d = 0; d < dim; ++d) {
      double value = 0.0;
      if (!(ls >> value)) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected " + std::to_string(dim) +
                         " components for token '" + token + "'");
      }
      if (!std::isfinite(value)) {
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": non-finite component for token '" + token +
                              "'");
      }
      table.vectors_(row, d) = value;
    }
    double trailing = 0.0;
    if (ls >> trailing) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": too many components for token '" + token + "'");
    }
    table.vocab_.emplace(std::move(token), static_cast<int>(row));
    ++row;
  }
  if (row != vocab_count) {
    throw ParseError(path + ": header declares " +
                     std::to_string(vocab_count) + " rows, found " +
                     std::to_string(row));
  }
  table.checksum_ = checksum;
  if (policy == OovPolicy::kSubwordHash) {
    table.build_subword_buckets(kSubwordBuckets);
  }
  return table;
}

bool EmbeddingTable::contains(const std::string& token) const {
  return vocab_.count(token) != 0;
}

Eigen::VectorXd EmbeddingTable::lookup(const std::string& token) const {
  const auto it = vocab_.find(token);
  if (it == vocab_.end()) {
    throw ValidationError("token '" + token + "' not in vocabulary");
  }
  return vectors_.row(it->second).transpose();
}

void EmbeddingTable::build_subword_buckets(int bucket_count) {
  buckets_ = Eigen::MatrixXd::Zero(bucket_count, dim_);
  bucket_fill_.assign(bucket_count, 0);
  for (const auto& [token, row] : vocab_) {
    const std::string padded = "<" + token + ">";
    for (int n = kNgramMin; n <= kNgramMax; ++n) {
      if (static_cast<int>(padded.size()) < n) break;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        const std::size_t bucket =
            fnv1a64(std::string_view(padded).substr(i, n)) % bucket_count;
        buckets_.row(bucket) += vectors_.row(row);
        bucket_fill_[bucket] += 1;
      }
    }
  }
  for (int b = 0; b < bucket_count; ++b) {
    if (bucket_fill_[b] > 0) buckets_.row(b) /= bucket_fill_[b];
  }
}

bool EmbeddingTable::resolve(const std::string& token,
                             Eigen::VectorXd& out) const {
  const auto it = vocab_.find(token);
  if (it != vocab_.end()) {
    out = vectors_.row(it->second).transpose();
    return true;
  }
  switch (policy_) {
    case OovPolicy::kSkip:
      return false;
    case OovPolicy::kZero:
      out = Eigen::VectorXd::Zero(dim_);
      return true;
    case OovPolicy::kSubwordHash: {
      const std::string padded = "<" + token + ">";
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
      int hits = 0;
      for (int n = kNgramMin; n <= kNgramMax; ++n) {
        if (static_cast<int>(padded.size()) < n) break;
        for (std::size_t i = 0; i + n <= padded.size(); ++i) {
          const std::size_t bucket =
              fnv1a64(std::string_view(padded).substr(i, n)) %
              buckets_.rows();
          if (bucket_fill_[bucket] > 0) {
            sum += buckets_.row(bucket).transpose();
            ++hits;
          }
        }
      }
      if (hits == 0) return false;
      out = sum / hits;
      return true;
    }
  }
  return false;
}

Eigen::VectorXd EmbeddingTable::embed_text(const std::string& text) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
  long count = 0;
  Eigen::VectorXd vec(dim_);
  for (const auto& token : tokenize(text)) {
    if (resolve(token, vec)) {
      sum += vec;
      ++count;
    }
  }
  if (count == 0) return Eigen::VectorXd::Zero(dim_);
  return sum / static_cast<double>(count);
}

}  // namespace propdetect
