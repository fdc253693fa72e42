#include "travelfield/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace tfld {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field binary I/O assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

}  // namespace

void write_field_binary(const std::filesystem::path& path, const SpatialField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write("TFLD", 4);
    put<std::uint16_t>(out, kFieldFormatVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid.n1));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid.n2));
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

SpatialField read_field_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "TFLD", 4) != 0)
        throw std::runtime_error(path.string() + ": bad magic, not a field binary");
    const auto version = get<std::uint16_t>(in);
    if (version != kFieldFormatVersion)
        throw std::runtime_error(path.string() + ": unsupported field format version");
    const auto n1 = get<std::uint32_t>(in);
    const auto n2 = get<std::uint32_t>(in);
    if (!in || n1 == 0 || n2 == 0) throw std::runtime_error(path.string() + ": corrupt header");
    SpatialField field(Grid2D(static_cast<int>(n1), static_cast<int>(n2)));
    in.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path.string() + ": truncated payload");
    return field;
}

PgmScale write_field_pgm(const std::filesystem::path& path, const SpatialField& field) {
    PgmScale scale;
    scale.min = *std::min_element(field.values.begin(), field.values.end());
    scale.max = *std::max_element(field.values.begin(), field.values.end());
    const double span = scale.max - scale.min;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "P5\n" << field.grid.n2 << " " << field.grid.n1 << "\n255\n";
    std::vector<unsigned char> row(field.grid.n2);
    for (int i = 0; i < field.grid.n1; ++i) {
        for (int j = 0; j < field.grid.n2; ++j) {
            const double t = span > 0.0 ? (field.at(i, j) - scale.min) / span : 0.0;
            row[j] = static_cast<unsigned char>(std::lround(t * 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
    return scale;
}

void write_field_csv(const std::filesystem::path& path, const SpatialField& field) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.precision(17);
    for (int i = 0; i < field.grid.n1; ++i) {
        for (int j = 0; j < field.grid.n2; ++j) {
            if (j) out << ',';
            out << field.at(i, j);
        }
        out << '\n';
    }
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("sidecar schema violation: " + what);
}

}  // namespace

void validate_sidecar(const nlohmann::json& sidecar) {
    require(sidecar.is_object(), "root must be an object");
    require(sidecar.contains("grid") && sidecar["grid"].is_object(), "grid object required");
    for (const char* key : {"n1", "n2"})
        require(sidecar["grid"].contains(key) && sidecar["grid"][key].is_number_integer(),
                std::string("grid.") + key + " integer required");
    require(sidecar["grid"].contains("spacing") && sidecar["grid"]["spacing"].is_number(),
            "grid.spacing number required");
    require(sidecar.contains("dt") && sidecar["dt"].is_number(), "dt number required");
    require(sidecar.contains("epochs") && sidecar["epochs"].is_number_integer(), "epochs required");
    require(sidecar.contains("seed") && sidecar["seed"].is_number_unsigned(), "seed u64 required");
    require(sidecar.contains("scenario_hash") && sidecar["scenario_hash"].is_string(),
            "scenario_hash string required");
    require(sidecar.contains("frames") && sidecar["frames"].is_array(), "frames array required");
    const auto epochs = sidecar["epochs"].get<std::int64_t>();
    require(static_cast<std::int64_t>(sidecar["frames"].size()) == epochs + 1,
            "frames array must hold epochs+1 entries");
    for (const auto& frame : sidecar["frames"]) {
        require(frame.is_object() && frame.contains("t") && frame.contains("file"),
                "each frame needs t and file");
        if (frame.contains("pgm_scale")) {
            require(frame["pgm_scale"].is_object() && frame["pgm_scale"].contains("min") &&
                        frame["pgm_scale"].contains("max"),
                    "pgm_scale needs min and max");
        }
        if (frame.contains("rotation_center"))
            require(frame["rotation_center"].is_array() && frame["rotation_center"].size() == 2,
                    "rotation_center must be a pair");
    }
    require(sidecar.contains("plan") && sidecar["plan"].is_object(), "plan object required");
    for (const char* key : {"n_required", "margin_cells"})
        require(sidecar["plan"].contains(key) && sidecar["plan"][key].is_number_integer(),
                std::string("plan.") + key + " integer required");
    require(sidecar["plan"].contains("v_max") && sidecar["plan"]["v_max"].is_number(),
            "plan.v_max number required");
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace tfld
