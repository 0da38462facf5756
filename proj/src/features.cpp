#include "propdetect/features.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "propdetect/error.hpp"
#include "propdetect/hash.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

namespace {

constexpr char kMagic[8] = {'P', 'D', 'F', 'M', 'A', 'T', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError(path + ": truncated file");
  return value;
}

void write_string(std::ostream& out, const std::string& s) {
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in, const std::string& path) {
  const auto len = read_pod<std::uint32_t>(in, path);
  if (len > (1u << 20)) throw ParseError(path + ": unreasonable string size");
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw IoError(path + ": truncated file");
  return s;
}

}  // namespace

FeatureMode feature_mode_from_string(const std::string& name) {
  if (name == "hybrid") return FeatureMode::kHybrid;
  if (name == "hybrid_lite" || name == "lite") return FeatureMode::kHybridLite;
  if (name == "text_only" || name == "text") return FeatureMode::kTextOnly;
  throw ParseError("unknown feature mode '" + name + "'");
}

std::string to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::kHybrid: return "hybrid";
    case FeatureMode::kHybridLite: return "hybrid_lite";
    default: return "text_only";
  }
}

FeatureLayout layout_for(FeatureMode mode, int text_dim,
                         const TechniqueRegistry& registry) {
  FeatureLayout layout;
  layout.text_offset = 0;
  layout.text_len = text_dim;
  if (mode == FeatureMode::kTextOnly) return layout;
  layout.genre_offset = text_dim;
  layout.genre_len = registry.genre_count();
  layout.topic_offset = layout.genre_offset + layout.genre_len;
  layout.topic_len = registry.topic_count();
  layout.persuasion_offset = layout.topic_offset + layout.topic_len;
  layout.persuasion_len = mode == FeatureMode::kHybrid
                              ? registry.fine_count()
                              : registry.coarse_count();
  return layout;
}

FeatureVector fuse(const Eigen::VectorXd& text_vec,
                   const ConceptAnnotation* annotation, FeatureMode mode,
                   const TechniqueRegistry& registry) {
  const FeatureLayout layout =
      layout_for(mode, static_cast<int>(text_vec.size()), registry);
  FeatureVector fv;
  fv.mode = mode;
  fv.values = Eigen::VectorXd::Zero(layout.total());
  fv.values.segment(layout.text_offset, layout.text_len) = text_vec;
  if (mode == FeatureMode::kTextOnly) return fv;

  if (annotation == nullptr) {
    throw ValidationError("mode " + to_string(mode) +
                          " requires an annotation");
  }
  if (annotation->genre < 0 || annotation->genre >= layout.genre_len ||
      annotation->topic < 0 || annotation->topic >= layout.topic_len) {
    throw ValidationError("annotation genre/topic id out of range");
  }
  fv.values(layout.genre_offset + annotation->genre) = 1.0;
  fv.values(layout.topic_offset + annotation->topic) = 1.0;

  if (mode == FeatureMode::kHybrid) {
    if (static_cast<int>(annotation->persuasion_fine.size()) !=
        layout.persuasion_len) {
      throw ValidationError("fine count vector has wrong length");
    }
    for (int i = 0; i < layout.persuasion_len; ++i) {
      fv.values(layout.persuasion_offset + i) =
          static_cast<double>(annotation->persuasion_fine[i]);
    }
  } else {
    const auto coarse = coarse_counts(*annotation, registry);
    for (int i = 0; i < layout.persuasion_len; ++i) {
      fv.values(layout.persuasion_offset + i) = static_cast<double>(coarse[i]);
    }
  }
  return fv;
}

FeatureMatrix featurize_corpus(const Corpus& corpus,
                               const EmbeddingTable& table, FeatureMode mode,
                               const TechniqueRegistry& registry) {
  const FeatureLayout layout = layout_for(mode, table.dim(), registry);
  FeatureMatrix matrix;
  matrix.mode = mode;
  matrix.registry_version = registry.version;
  matrix.embedding_checksum = table.checksum();
  matrix.rows.resize(static_cast<long>(corpus.articles.size()),
                     layout.total());
  matrix.ids.reserve(corpus.articles.size());
  matrix.labels.reserve(corpus.articles.size());
  for (std::size_t i = 0; i < corpus.articles.size(); ++i) {
    const Article& article = corpus.articles[i];
    const ConceptAnnotation* annotation =
        article.annotation ? &*article.annotation : nullptr;
    if (mode != FeatureMode::kTextOnly && annotation == nullptr) {
      throw ValidationError("article '" + article.id +
                            "' lacks the annotation required by mode " +
                            to_string(mode));
    }
    const FeatureVector fv =
        fuse(table.embed_text(article.text), annotation, mode, registry);
    matrix.rows.row(static_cast<long>(i)) = fv.values.transpose();
    matrix.ids.push_back(article.id);
    matrix.labels.push_back(article.label);
  }
  return matrix;
}

std::uint64_t FeatureMatrix::content_fingerprint() const {
  std::uint64_t h = fnv1a64(to_string(mode));
  h = fnv1a64(registry_version, h);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    h = fnv1a64(ids[i], h);
    const char label = static_cast<char>('0' + labels[i]);
    h = fnv1a64(std::string_view(&label, 1), h);
  }
  for (long r = 0; r < rows.rows(); ++r) {
    for (long c = 0; c < rows.cols(); ++c) {
      const double v = rows(r, c);
      h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&v),
                                   sizeof(v)),
                  h);
    }
  }
  return h;
}

void save_feature_matrix(const FeatureMatrix& matrix,
                         const std::string& path) {
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.mode));
  write_string(out, matrix.registry_version);
  write_pod<std::uint64_t>(out, matrix.embedding_checksum);
  write_pod<std::uint64_t>(out, matrix.ids.size());
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.rows.cols()));
  for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
    write_string(out, matrix.ids[i]);
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(matrix.labels[i]));
  }
  for (long r = 0; r < matrix.rows.rows(); ++r) {
    for (long c = 0; c < matrix.rows.cols(); ++c) {
      write_pod<double>(out, matrix.rows(r, c));
    }
  }
  write_file_atomic(path, out.str());
}

FeatureMatrix load_feature_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError(path + ": not a feature matrix file");
  }
  FeatureMatrix matrix;
  const auto mode = read_pod<std::uint32_t>(in, path);
  if (mode > 2) throw ParseError(path + ": unknown mode tag");
  matrix.mode = static_cast<FeatureMode>(mode);
  matrix.registry_version = read_string(in, path);
  matrix.embedding_checksum = read_pod<std::uint64_t>(in, path);
  const auto rows = read_pod<std::uint64_t>(in, path);
  const auto cols = read_pod<std::uint64_t>(in, path);
  if (rows > (1ull << 32) || cols > (1ull << 20)) {
    throw ParseError(path + ": unreasonable matrix shape");
  }
  matrix.ids.reserve(rows);
  matrix.labels.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) {
    matrix.ids.push_back(read_string(in, path));
    matrix.labels.push_back(read_pod<std::uint8_t>(in, path));
  }
  matrix.rows.resize(static_cast<long>(rows), static_cast<long>(cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      matrix.rows(static_cast<long>(r), static_cast<long>(c)) =
          read_pod<double>(in, path);
    }
  }
  return matrix;
}

void write_feature_matrix_csv(const FeatureMatrix& matrix,
                              const std::string& path) {
  std::ostringstream out;
  out << "id,label";
  for (long c = 0; c < matrix.rows.cols(); ++c) out << ",f" << c;
  out << "\n";
  for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
    out << matrix.ids[i] << ',' << matrix.labels[i];
    for (long c = 0; c < matrix.rows.cols(); ++c) {
      out << ',' << format_double(matrix.rows(static_cast<long>(i), c), 9);
    }
    out << "\n";
  }
  write_file_atomic(path, out.str());
}

}  // namespace propdetect
