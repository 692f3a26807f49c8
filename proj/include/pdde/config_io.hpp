#pragma once

#include <string>

#include "vendor_json.hpp"

#include "pdde/system.hpp"

namespace pdde {

/// Parses and validates a system description; throws ModelError with the
/// violated hypothesis tag on bad input. Field names are documented in
/// docs/config_schema.md; load -> save -> load is the identity.
SystemSpec load_system(const json& j);
SystemSpec load_system_file(const std::string& path);

json save_system(const SystemSpec& spec);

/// FNV-1a hash of the canonical serialization, as a hex string.
std::string spec_digest(const SystemSpec& spec);

} // namespace pdde
