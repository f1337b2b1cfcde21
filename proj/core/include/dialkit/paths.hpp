#pragma once

#include <filesystem>
#include <string_view>

namespace dialkit {

std::string_view version();

// Directory holding the shipped tables (buckwalter.tsv, punctuation.tsv,
// dialects.tsv, geo.tsv, domains.tsv): $DIALKIT_DATA_DIR if set, else the
// source tree's core/data when present, else the installed share/dialkit.
std::filesystem::path default_data_dir();

}  // namespace dialkit
