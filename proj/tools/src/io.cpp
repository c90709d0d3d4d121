#include "sedcat/app/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

namespace sedcat::app {

namespace fs = std::filesystem;

namespace {

std::uint64_t to_little(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::big) {
        return __builtin_bswap64(v);
    }
    return v;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream in(path, mode);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return in;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t row)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [end, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || end != last) {
        if (s == "nan") {
            return std::numeric_limits<double>::quiet_NaN();
        }
        throw IoError(path.string() + ": row " + std::to_string(row) + ": bad number '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const fs::path& path, const std::vector<CsvColumn>& columns)
{
    if (columns.empty()) {
        throw IoError(path.string() + ": no columns");
    }
    const std::size_t rows = columns.front().values.size();
    for (const auto& c : columns) {
        if (c.values.size() != rows) {
            throw IoError(path.string() + ": column " + c.name + " has a different length");
        }
        if (c.name.find_first_of(",[]\n") != std::string::npos) {
            throw IoError(path.string() + ": bad column name " + c.name);
        }
    }
    auto out = open_out(path);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        out << (j ? "," : "") << columns[j].name << " [" << columns[j].unit << "]";
    }
    out << "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out << (j ? "," : "") << format_double(columns[j].values[i]);
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::vector<CsvColumn> read_csv(const fs::path& path)
{
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(path.string() + ": empty file");
    }
    std::vector<CsvColumn> cols;
    for (const auto& h : split(line)) {
        const auto open = h.rfind(" [");
        if (open == std::string::npos || h.back() != ']') {
            throw IoError(path.string() + ": header cell '" + h + "' lacks a unit");
        }
        cols.push_back({h.substr(0, open), h.substr(open + 2, h.size() - open - 3), {}});
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const auto cells = split(line);
        if (cells.size() != cols.size()) {
            throw IoError(path.string() + ": row " + std::to_string(row) + " has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(cols.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            cols[j].values.push_back(parse_double(cells[j], path, row));
        }
    }
    return cols;
}

const CsvColumn& column(const std::vector<CsvColumn>& table, const std::string& name)
{
    for (const auto& c : table) {
        if (c.name == name) {
            return c;
        }
    }
    throw IoError("no column named " + name);
}

std::size_t F64Array::size() const noexcept
{
    std::size_t n = shape.empty() ? 0 : 1;
    for (auto s : shape) {
        n *= s;
    }
    return n;
}

fs::path sidecar_path(const fs::path& path)
{
    return fs::path(path.string() + ".json");
}

fs::path write_f64(const fs::path& path, const F64Array& a)
{
    const std::size_t rank = a.shape.size();
    if (rank == 0 || a.axes.size() != rank || a.origin.size() != rank ||
        a.spacing.size() != rank || a.units.size() != rank) {
        throw IoError(path.string() + ": array metadata does not match its rank");
    }
    if (a.data.size() != a.size()) {
        throw IoError(path.string() + ": data length does not match the shape");
    }
    {
        auto out = open_out(path, std::ios::out | std::ios::binary);
        std::vector<std::uint64_t> buf(a.data.size());
        for (std::size_t i = 0; i < a.data.size(); ++i) {
            buf[i] = to_little(std::bit_cast<std::uint64_t>(a.data[i]));
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
        if (!out) {
            throw IoError("write failed: " + path.string());
        }
    }
    nlohmann::json j;
    j["format"] = "f64-le";
    j["data"] = path.filename().string();
    j["shape"] = a.shape;
    j["axes"] = a.axes;
    j["origin"] = a.origin;
    j["spacing"] = a.spacing;
    j["units"] = a.units;
    j["value_unit"] = a.value_unit;
    j["order"] = "row-major";
    for (const auto& [k, v] : a.extra.items()) {
        j[k] = v;
    }
    const fs::path side = sidecar_path(path);
    write_text(side, j.dump(2) + "\n");
    return side;
}

F64Array read_f64(const fs::path& path)
{
    F64Array a;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(sidecar_path(path)));
        if (j.at("format") != "f64-le") {
            throw IoError(path.string() + ": unsupported array format");
        }
        a.shape = j.at("shape").get<std::vector<std::size_t>>();
        a.axes = j.at("axes").get<std::vector<std::string>>();
        a.origin = j.at("origin").get<std::vector<double>>();
        a.spacing = j.at("spacing").get<std::vector<double>>();
        a.units = j.at("units").get<std::vector<std::string>>();
        a.value_unit = j.at("value_unit").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(sidecar_path(path).string() + ": " + e.what());
    }
    for (const auto& [k, v] : j.items()) {
        static const std::vector<std::string> known = {"format", "data",  "shape", "axes",
                                                       "origin", "spacing", "units", "value_unit",
                                                       "order"};
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            a.extra[k] = v;
        }
    }
    auto in = open_in(path, std::ios::in | std::ios::binary);
    std::vector<std::uint64_t> buf(a.size());
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)) ||
        in.peek() != std::char_traits<char>::eof()) {
        throw IoError(path.string() + ": size does not match the sidecar shape");
    }
    a.data.resize(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        a.data[i] = std::bit_cast<double>(to_little(buf[i]));
    }
    return a;
}

std::string sha256_file(const fs::path& path)
{
    auto in = open_in(path, std::ios::in | std::ios::binary);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("SHA-256 initialisation failed");
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

void write_text(const fs::path& path, const std::string& text)
{
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << text;
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::string read_text(const fs::path& path)
{
    auto in = open_in(path, std::ios::in | std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace sedcat::app
