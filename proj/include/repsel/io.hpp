#pragma once

#include "repsel/matrix.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace repsel {

/// Reads { "n": int, "labels": [string]?, "rows": [[rational]] }. Rationals
/// are "p/q" strings or JSON numbers; numbers are converted exactly from their
/// literal text, so 0.1 means 1/10.
RepresentationMatrix parse_matrix_json(std::string_view text);
RepresentationMatrix read_matrix_file(const std::filesystem::path& path);

/// Writes entries as "p/q" strings.
nlohmann::ordered_json matrix_to_json(const RepresentationMatrix& gamma);
void write_matrix_file(const RepresentationMatrix& gamma, const std::filesystem::path& path);

}  // namespace repsel
