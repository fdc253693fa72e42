// On-disk formats:
//  - SpatialField binary: magic "TFLD", version u16, n1 u32, n2 u32, then
//    n1*n2 little-endian float64 row-major (grid geometry travels in the JSON
//    sidecar);
//  - PGM: 8-bit binary P5, min-max scaled, with the scaling recorded in the
//    sidecar;
//  - CSV: one row per grid row.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "travelfield/core.hpp"

#include "json.hpp"

namespace tfld {

inline constexpr std::uint16_t kFieldFormatVersion = 1;

void write_field_binary(const std::filesystem::path& path, const SpatialField& field);
SpatialField read_field_binary(const std::filesystem::path& path);

struct PgmScale {
    double min = 0.0;
    double max = 0.0;
};
PgmScale write_field_pgm(const std::filesystem::path& path, const SpatialField& field);

void write_field_csv(const std::filesystem::path& path, const SpatialField& field);

// Structural check of a run sidecar against the shipped schema
// (docs/schemas/sidecar.schema.json); throws ConfigError on violations.
void validate_sidecar(const nlohmann::json& sidecar);

// FNV-1a 64-bit, used to stamp configs into sidecars.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace tfld
