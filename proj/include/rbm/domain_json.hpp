#pragma once

#include "json.hpp"
#include "rbm/geometry.hpp"

namespace rbm {

nlohmann::ordered_json domain_to_json(const DomainSpec& d);
DomainSpec domain_from_json(const nlohmann::json& j);  // throws InvalidConfig

}  // namespace rbm
