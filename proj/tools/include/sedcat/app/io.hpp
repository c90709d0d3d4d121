#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sedcat::app {

// Missing, unreadable or inconsistent input or output files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvColumn {
    std::string name;
    std::string unit;  // SI unit, "1" for dimensionless
    std::vector<double> values;
};

// Header "name [unit],..." then one row per sample, %.17g. All columns must
// have the same length.
void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);

// Reads a file written by write_csv.
std::vector<CsvColumn> read_csv(const std::filesystem::path& path);

const CsvColumn& column(const std::vector<CsvColumn>& table, const std::string& name);

// Row-major array of little-endian IEEE-754 doubles with a JSON sidecar
// (path + ".json") holding shape, axis names, origins, spacings and units.
// Axes with non-uniform coordinates list them under "coordinates".
struct F64Array {
    std::vector<std::size_t> shape;
    std::vector<std::string> axes;
    std::vector<double> origin;
    std::vector<double> spacing;
    std::vector<std::string> units;  // per axis
    std::string value_unit;
    nlohmann::json extra = nlohmann::json::object();
    std::vector<double> data;

    std::size_t size() const noexcept;
};

// Writes the data file and its sidecar; returns the sidecar path.
std::filesystem::path write_f64(const std::filesystem::path& path, const F64Array& array);
F64Array read_f64(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// "%.17g" rendering, shared by every numeric text output.
std::string format_double(double v);

}  // namespace sedcat::app
