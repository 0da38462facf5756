#include "propdetect/registry.hpp"

#include <json.hpp>
#include <set>

#include "propdetect/annotation_json.hpp"
#include "propdetect/error.hpp"
#include "propdetect/io_util.hpp"

namespace propdetect {

namespace {

std::optional<int> index_of(const std::vector<std::string>& names,
                            const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> TechniqueRegistry::genre_id(const std::string& name) const {
  return index_of(genre_names, name);
}

std::optional<int> TechniqueRegistry::topic_id(const std::string& name) const {
  return index_of(topic_names, name);
}

std::optional<int> TechniqueRegistry::fine_id(const std::string& name) const {
  return index_of(fine_names, name);
}

void TechniqueRegistry::validate() const {
  if (version.empty()) throw ValidationError("registry: empty version");
  if (genre_names.empty() || topic_names.empty() || fine_names.empty() ||
      coarse_names.empty()) {
    throw ValidationError("registry: empty label list");
  }
  if (fine_to_coarse.size() != fine_names.size()) {
    throw ValidationError("registry: fine_to_coarse must map every fine id");
  }
  std::set<int> hit;
  for (int coarse : fine_to_coarse) {
    if (coarse < 0 || coarse >= coarse_count()) {
      throw ValidationError("registry: fine_to_coarse target out of range");
    }
    hit.insert(coarse);
  }
  if (static_cast<int>(hit.size()) != coarse_count()) {
    throw ValidationError("registry: fine_to_coarse is not surjective");
  }
  for (const auto* names : {&genre_names, &topic_names, &fine_names,
                            &coarse_names}) {
    std::set<std::string> unique(names->begin(), names->end());
    if (unique.size() != names->size()) {
      throw ValidationError("registry: duplicate label name");
    }
  }
}

TechniqueRegistry TechniqueRegistry::builtin() {
  TechniqueRegistry reg;
  reg.version = "st3-2023.1";
  reg.genre_names = {"Reporting", "Opinion", "Satire"};
  reg.topic_names = {"Politics",  "Economy",           "Military",
                     "Society",   "Science_Technology", "Health",
                     "Culture",   "Sports",            "Environment"};
  reg.coarse_names = {"Attack_on_Reputation", "Justification", "Distraction",
                      "Simplification",       "Call",          "Manipulative_Wording"};
  // name, coarse group
  const std::vector<std::pair<std::string, int>> fine = {
      {"Name_Calling-Labeling", 0},
      {"Guilt_by_Association", 0},
      {"Doubt", 0},
      {"Appeal_to_Hypocrisy", 0},
      {"Questioning_the_Reputation", 0},
      {"Flag_Waving", 1},
      {"Appeal_to_Authority", 1},
      {"Appeal_to_Popularity", 1},
      {"Appeal_to_Values", 1},
      {"Appeal_to_Fear-Prejudice", 1},
      {"Straw_Man", 2},
      {"Red_Herring", 2},
      {"Whataboutism", 2},
      {"Causal_Oversimplification", 3},
      {"False_Dilemma-No_Choice", 3},
      {"Consequential_Oversimplification", 3},
      {"Slogans", 4},
      {"Conversation_Killer", 4},
      {"Appeal_to_Time", 4},
      {"Loaded_Language", 5},
      {"Obfuscation-Vagueness-Confusion", 5},
      {"Exaggeration-Minimisation", 5},
      {"Repetition", 5},
  };
  for (const auto& [name, coarse] : fine) {
    reg.fine_names.push_back(name);
    reg.fine_to_coarse.push_back(coarse);
  }
  reg.validate();
  return reg;
}

TechniqueRegistry TechniqueRegistry::load(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  TechniqueRegistry reg;
  try {
    reg.version = doc.at("version").get<std::string>();
    reg.genre_names = doc.at("genres").get<std::vector<std::string>>();
    reg.topic_names = doc.at("topics").get<std::vector<std::string>>();
    reg.coarse_names = doc.at("coarse").get<std::vector<std::string>>();
    for (const auto& item : doc.at("fine")) {
      reg.fine_names.push_back(item.at("name").get<std::string>());
      const std::string coarse = item.at("coarse").get<std::string>();
      auto id = index_of(reg.coarse_names, coarse);
      if (!id) {
        throw ValidationError(path + ": fine technique '" +
                              reg.fine_names.back() +
                              "' maps to unknown coarse group '" + coarse +
                              "'");
      }
      reg.fine_to_coarse.push_back(*id);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  reg.validate();
  return reg;
}

void TechniqueRegistry::save(const std::string& path) const {
  nlohmann::json doc;
  doc["version"] = version;
  doc["genres"] = genre_names;
  doc["topics"] = topic_names;
  doc["coarse"] = coarse_names;
  nlohmann::json fine = nlohmann::json::array();
  for (std::size_t i = 0; i < fine_names.size(); ++i) {
    fine.push_back({{"name", fine_names[i]},
                    {"coarse", coarse_names[fine_to_coarse[i]]}});
  }
  doc["fine"] = fine;
  write_file_atomic(path, doc.dump(2) + "\n");
}

nlohmann::json annotation_to_json(const ConceptAnnotation& annotation,
                                  const TechniqueRegistry& registry) {
  if (annotation.genre < 0 || annotation.genre >= registry.genre_count() ||
      annotation.topic < 0 || annotation.topic >= registry.topic_count()) {
    throw ValidationError("annotation: genre/topic id out of range");
  }
  nlohmann::json a;
  a["genre"] = registry.genre_names[annotation.genre];
  a["topic"] = registry.topic_names[annotation.topic];
  a["persuasion_fine"] = annotation.persuasion_fine;
  return a;
}

ConceptAnnotation annotation_from_json(const nlohmann::json& a,
                                       const TechniqueRegistry& registry,
                                       const std::string& where) {
  ConceptAnnotation annotation;
  const std::string genre = a.at("genre").get<std::string>();
  const std::string topic = a.at("topic").get<std::string>();
  auto genre_id = registry.genre_id(genre);
  if (!genre_id) throw TaxonomyError(where + ": unknown genre '" + genre + "'");
  auto topic_id = registry.topic_id(topic);
  if (!topic_id) throw TaxonomyError(where + ": unknown topic '" + topic + "'");
  annotation.genre = *genre_id;
  annotation.topic = *topic_id;
  annotation.persuasion_fine = a.at("persuasion_fine").get<std::vector<int>>();
  if (static_cast<int>(annotation.persuasion_fine.size()) !=
      registry.fine_count()) {
    throw ValidationError(where + ": persuasion_fine must have " +
                          std::to_string(registry.fine_count()) + " entries");
  }
  for (int count : annotation.persuasion_fine) {
    if (count < 0) throw ValidationError(where + ": negative technique count");
  }
  return annotation;
}

std::vector<int> coarse_counts(const ConceptAnnotation& annotation,
                               const TechniqueRegistry& registry) {
  if (static_cast<int>(annotation.persuasion_fine.size()) !=
      registry.fine_count()) {
    throw ValidationError("annotation: fine count vector has wrong length");
  }
  std::vector<int> coarse(registry.coarse_count(), 0);
  for (int i = 0; i < registry.fine_count(); ++i) {
    coarse[registry.fine_to_coarse[i]] += annotation.persuasion_fine[i];
  }
  return coarse;
}

}  // namespace propdetect
