#include "propdetect/corpus.hpp"

#include <json.hpp>
#include <set>
#include <sstream>
#include <unordered_set>

#include "propdetect/annotation_json.hpp"
#include "propdetect/error.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

using nlohmann::json;

std::string to_string(CorpusSide side) {
  return side == CorpusSide::kPpn ? "PPN" : "MAINSTREAM";
}

std::string to_string(Leaning leaning) {
  switch (leaning) {
    case Leaning::kLeft: return "left";
    case Leaning::kRight: return "right";
    default: return "unrated";
  }
}

std::string to_string(Credibility credibility) {
  return credibility == Credibility::kHigh ? "high" : "low";
}

CorpusSide corpus_side_from_string(const std::string& name) {
  if (name == "PPN") return CorpusSide::kPpn;
  if (name == "MAINSTREAM") return CorpusSide::kMainstream;
  throw ParseError("unknown corpus side '" + name + "'");
}

Leaning leaning_from_string(const std::string& name) {
  if (name == "left") return Leaning::kLeft;
  if (name == "right") return Leaning::kRight;
  if (name == "unrated") return Leaning::kUnrated;
  throw ParseError("unknown leaning '" + name + "'");
}

Credibility credibility_from_string(const std::string& name) {
  if (name == "high") return Credibility::kHigh;
  if (name == "low") return Credibility::kLow;
  throw ParseError("unknown credibility '" + name + "'");
}

namespace {

bool whitespace_only(const std::string& text) {
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

const SourceMeta& Corpus::meta_for(const std::string& source) const {
  for (const auto& meta : sources) {
    if (meta.source == source) return meta;
  }
  throw ValidationError("unknown source '" + source + "'");
}

std::pair<long, long> Corpus::class_counts() const {
  long mainstream = 0;
  long propaganda = 0;
  for (const auto& article : articles) {
    (article.label == 1 ? propaganda : mainstream) += 1;
  }
  return {mainstream, propaganda};
}

std::string article_to_json_line(const Article& article,
                                 const TechniqueRegistry& registry) {
  json j;
  j["id"] = article.id;
  j["text"] = article.text;
  j["source"] = article.source;
  j["label"] = article.label;
  j["language"] = article.language;
  if (article.annotation) {
    j["annotation"] = annotation_to_json(*article.annotation, registry);
  }
  return j.dump();
}

Article article_from_json_line(const std::string& line,
                               const TechniqueRegistry& registry) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  Article article;
  try {
    article.id = j.at("id").get<std::string>();
    article.text = j.at("text").get<std::string>();
    article.source = j.at("source").get<std::string>();
    if (!j.at("label").is_number_integer()) {
      throw ValidationError("label must be an integer");
    }
    article.label = j.at("label").get<int>();
    article.language = j.value("language", std::string("en"));
    if (j.contains("annotation") && !j.at("annotation").is_null()) {
      article.annotation =
          annotation_from_json(j.at("annotation"), registry, article.id);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("missing or mistyped field: ") + e.what());
  }
  if (article.label != 0 && article.label != 1) {
    throw ValidationError("article '" + article.id +
                          "': label must be 0 or 1");
  }
  if (whitespace_only(article.text)) {
    throw ValidationError("article '" + article.id + "': empty text");
  }
  return article;
}

Corpus load_corpus(const std::string& articles_path,
                   const std::string& meta_path,
                   const TechniqueRegistry& registry) {
  Corpus corpus;

  const auto meta_lines = read_lines(meta_path);
  std::unordered_set<std::string> seen_sources;
  for (std::size_t i = 0; i < meta_lines.size(); ++i) {
    if (meta_lines[i].empty()) continue;
    const std::string where = meta_path + ":" + std::to_string(i + 1);
    json j;
    try {
      j = json::parse(meta_lines[i]);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    SourceMeta meta;
    try {
      meta.source = j.at("source").get<std::string>();
      meta.corpus = corpus_side_from_string(j.at("corpus").get<std::string>());
      meta.leaning = leaning_from_string(j.at("leaning").get<std::string>());
      meta.credibility =
          credibility_from_string(j.at("credibility").get<std::string>());
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!seen_sources.insert(meta.source).second) {
      throw ValidationError(where + ": duplicate source '" + meta.source +
                            "'");
    }
    corpus.sources.push_back(std::move(meta));
  }

  const auto lines = read_lines(articles_path);
  std::unordered_set<std::string> seen_ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = articles_path + ":" + std::to_string(i + 1);
    Article article;
    try {
      article = article_from_json_line(lines[i], registry);
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!seen_ids.insert(article.id).second) {
      throw ValidationError(where + ": duplicate article id '" + article.id +
                            "'");
    }
    if (!seen_sources.count(article.source)) {
      throw ValidationError(where + ": unknown source '" + article.source +
                            "'");
    }
    corpus.articles.push_back(std::move(article));
  }

  if (corpus.articles.empty()) {
    throw ValidationError(articles_path + ": empty corpus");
  }
  validate_corpus(corpus);
  return corpus;
}

void validate_corpus(const Corpus& corpus) {
  std::unordered_set<std::string> sources;
  for (const auto& meta : corpus.sources) {
    if (!sources.insert(meta.source).second) {
      throw ValidationError("duplicate source '" + meta.source + "'");
    }
    if (meta.corpus == CorpusSide::kPpn &&
        meta.credibility != Credibility::kLow) {
      throw ValidationError("PPN source '" + meta.source +
                            "' must have low credibility");
    }
  }
  std::unordered_set<std::string> ids;
  for (const auto& article : corpus.articles) {
    if (!ids.insert(article.id).second) {
      throw ValidationError("duplicate article id '" + article.id + "'");
    }
    if (article.label != 0 && article.label != 1) {
      throw ValidationError("article '" + article.id +
                            "': label must be 0 or 1");
    }
    if (whitespace_only(article.text)) {
      throw ValidationError("article '" + article.id + "': empty text");
    }
    if (!sources.count(article.source)) {
      throw ValidationError("article '" + article.id + "': unknown source '" +
                            article.source + "'");
    }
  }
}

void save_corpus(const Corpus& corpus, const std::string& articles_path,
                 const std::string& meta_path,
                 const TechniqueRegistry& registry) {
  std::ostringstream articles;
  for (const auto& article : corpus.articles) {
    articles << article_to_json_line(article, registry) << "\n";
  }
  std::ostringstream meta;
  for (const auto& source : corpus.sources) {
    json j;
    j["source"] = source.source;
    j["corpus"] = to_string(source.corpus);
    j["leaning"] = to_string(source.leaning);
    j["credibility"] = to_string(source.credibility);
    meta << j.dump() << "\n";
  }
  write_file_atomic(articles_path, articles.str());
  write_file_atomic(meta_path, meta.str());
}

std::unordered_map<std::string, const Article*> index_by_id(
    const Corpus& corpus) {
  std::unordered_map<std::string, const Article*> index;
  index.reserve(corpus.articles.size());
  for (const auto& article : corpus.articles) {
    index.emplace(article.id, &article);
  }
  return index;
}

}  // namespace propdetect
