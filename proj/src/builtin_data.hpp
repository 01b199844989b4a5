#pragma once

// Data files compiled into the library (generated at configure time from
// data/). Keys are file names without directory, e.g. "zigzag.d0lec".

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace numwall::detail {

std::optional<std::string_view> builtin_data(std::string_view file_name);
const std::vector<std::pair<std::string_view, std::string_view>>& builtin_data_files();

}  // namespace numwall::detail
