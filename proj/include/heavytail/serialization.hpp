#pragma once

#include <string>

#include <json.hpp>

#include "heavytail/counterexample.hpp"
#include "heavytail/levy.hpp"
#include "heavytail/limits.hpp"
#include "heavytail/rare_event.hpp"
#include "heavytail/step_path.hpp"
#include "heavytail/tail_model.hpp"

namespace heavytail {

using json = nlohmann::json;

json to_json(const TailParams& p);
TailParams tail_params_from_json(const json& j);

json to_json(const LevyConfig& cfg);
LevyConfig levy_config_from_json(const json& j);

json to_json(const StepPath& p);
StepPath step_path_from_json(const json& j);

json to_json(const EstimateResult& r);
json to_json(const LdpReport& r);
json to_json(const LimitCheckReport& r);
json to_json(const OneBigJumpReport& r);
json to_json(const TruncatedSumReport& r);
json to_json(const Lemma31Report& r);
json to_json(const Lemma32Report& r);

std::string limit_report_csv(const LimitCheckReport& r);
std::string ldp_report_csv(const LdpReport& r);
std::string path_csv(const StepPath& p, int grid_points);

// Write via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

// FNV-1a of the byte content; used for the config hash in run manifests.
std::string content_hash(const std::string& content);

} // namespace heavytail
