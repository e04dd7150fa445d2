#pragma once

#include <filesystem>
#include <string_view>

namespace visfactor {

/// Bundled data file. VISFACTOR_DATA_DIR in the environment wins over the
/// build-time location.
std::filesystem::path data_path(std::string_view name);

}  // namespace visfactor
