#pragma once

#include <json.hpp>

#include "usvswarm/nn.hpp"

namespace usvswarm {

void to_json(nlohmann::json& j, const MlpParams& p);
void from_json(const nlohmann::json& j, MlpParams& p);

void to_json(nlohmann::json& j, const AdamState& s);
AdamState adam_state_from_json(const nlohmann::json& j, const MlpParams& params);

}  // namespace usvswarm
