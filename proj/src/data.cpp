#include "visfactor/data.hpp"

#include <cstdlib>

namespace visfactor {

std::filesystem::path data_path(std::string_view name) {
  if (const char* env = std::getenv("VISFACTOR_DATA_DIR"); env && *env) return std::filesystem::path(env) / name;
  return std::filesystem::path(VISFACTOR_DATA_DIR) / name;
}

}  // namespace visfactor
