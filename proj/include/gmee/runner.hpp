#pragma once

#include <filesystem>
#include <vector>

#include "gmee/config.hpp"

namespace gmee {

/// Runs the experiment and writes its CSV tables and metadata.json into
/// config.output_dir. All results are computed before the first file is
/// written and every file is replaced atomically, so a failed run leaves no
/// partial tables behind. Returns the written paths, metadata last.
std::vector<std::filesystem::path> execute(const ExperimentConfig& config);

}  // namespace gmee
