#include "dialkit/paths.hpp"

#include <cstdlib>

namespace dialkit {

std::string_view version() { return DIALKIT_VERSION; }

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("DIALKIT_DATA_DIR"); env && *env) return env;
  std::error_code ec;
  const std::filesystem::path source(DIALKIT_SOURCE_DATA_DIR);
  if (std::filesystem::is_directory(source, ec)) return source;
  return DIALKIT_INSTALL_DATA_DIR;
}

}  // namespace dialkit
