#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "linksim/harness.hpp"

// JSON config file mirroring SimConfig. Every field is optional and defaults
// to the built-in value; unknown keys are rejected.

namespace linksim::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

harness::SimConfig from_json_text(const std::string& text);
harness::SimConfig load(const std::filesystem::path& path);

}  // namespace linksim::config
