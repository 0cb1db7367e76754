#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdftrack/scene_field.hpp"

namespace sdftrack {

/// Parsed scene description.
///
/// One primitive per line, `#` starts a comment:
///
///     sphere cx cy cz r            <color>
///     box    cx cy cz hx hy hz     <color>
///     plane  nx ny nz offset       <color>
///     grid   x0 y0 z0 x1 y1 z1 nx ny nz     # optional: bake the union
///
/// where `<color>` is one of
///
///     color   r g b
///     checker r g b  r g b  period
///     wave    r g b  r g b  dx dy dz  period
struct SceneDescription {
  std::vector<std::shared_ptr<const Primitive>> primitives;
  std::optional<GridBounds> grid_bounds;
  std::array<int, 3> grid_resolution{0, 0, 0};

  /// The union of all primitives, baked into a GridField when a `grid` line is present.
  FieldPtr build_field() const;
};

/// `source_name` is used in error messages. Throws ParseError with line numbers.
SceneDescription parse_scene(std::istream& in, const std::string& source_name);
SceneDescription load_scene(const std::filesystem::path& path);

}  // namespace sdftrack
