#pragma once

#include <map>
#include <string>
#include <vector>

#include "resgas/eval.hpp"

namespace resgas {

// Flat "key = value" config with [section] headers; keys are stored as
// "section.key". '#' and ';' start comments.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

std::vector<double> parse_double_list(const std::string& text);

// Builds an experiment spec, rejecting unknown keys. The [grid] section's
// value lists become grid axes.
ExperimentSpec spec_from_config(const ConfigMap& config);

// Round-trip emission used for the effective-config echo.
std::string config_text_from_spec(const ExperimentSpec& spec);

}  // namespace resgas
