// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fnd Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fnd/pipeline.hpp"

namespace fnd {

/// Binary container for one trained pipeline. The byte layout is documented
/// in docs/model_format.md.
inline constexpr std::array<char, 8> kModelMagic = {'F', 'N', 'D', 'M', 'O', 'D', 'E', 'L'};
inline constexpr std::uint32_t kModelFormatVersion = 1;
/// Byte offset and width of the creation timestamp inside the header.
inline constexpr std::size_t kTimestampOffset = 16;
inline constexpr std::size_t kTimestampWidth = 8;
inline constexpr std::size_t kHeaderSize = 40;

std::vector<std::uint8_t> encode_model(const Pipeline& pipeline);
Pipeline decode_model(const std::vector<std::uint8_t>& bytes);

/// Writes to a sibling temporary file and renames it into place.
void save_model(const Pipeline& pipeline, const std::filesystem::path& path);
Pipeline load_model(const std::filesystem::path& path);

/// Atomic text write used for reports (temp file + rename).
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace fnd
