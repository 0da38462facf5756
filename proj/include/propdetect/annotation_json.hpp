#pragma once

#include <json.hpp>
#include <string>

#include "propdetect/registry.hpp"

namespace propdetect {

nlohmann::json annotation_to_json(const ConceptAnnotation& annotation,
                                  const TechniqueRegistry& registry);

ConceptAnnotation annotation_from_json(const nlohmann::json& j,
                                       const TechniqueRegistry& registry,
                                       const std::string& where);

}  // namespace propdetect
