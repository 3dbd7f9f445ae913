#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace condense {

/// Names of the built-in figure presets, in display order.
std::vector<std::string> preset_names();

/// Config text of a built-in preset; configs/<name>.cfg holds the same bytes.
std::optional<std::string_view> preset_text(std::string_view name);

}  // namespace condense
