#ifndef DIRAC_GAP_SPEC_JSON_HPP
#define DIRAC_GAP_SPEC_JSON_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dirac_gap/potential.hpp"

namespace dirac_gap {

ScalarField field_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const ScalarField& f);

/// Throws Error(InvalidSpec) with a path-like location on malformed input.
PotentialSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const PotentialSpec& spec);

PotentialSpec parse_spec_string(const std::string& text);
PotentialSpec load_spec_file(const std::filesystem::path& path);

}  // namespace dirac_gap

#endif  // DIRAC_GAP_SPEC_JSON_HPP
