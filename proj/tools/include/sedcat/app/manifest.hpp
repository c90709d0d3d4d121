#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sedcat/app/config.hpp"
#include "sedcat/app/io.hpp"

namespace sedcat::app {

const char* artifact_version() noexcept;

// Outcome of one acceptance criterion evaluated by a scenario.
struct Check {
    int id = 0;
    std::string name;
    double value = 0.0;
    std::string limit;  // human-readable bound, e.g. "< 1e-4"
    bool pass = false;
    std::string detail;
};

nlohmann::json to_json(const Check& c);
Check check_from_json(const nlohmann::json& j);

// manifest.json of one scenario directory. The constructor writes it with
// status "running"; finalize() or fail() rewrites it with the file
// inventory, checksums and timing. Every file a scenario emits goes
// through this class so that it is listed exactly once.
class ManifestWriter {
public:
    ManifestWriter(std::filesystem::path dir, std::string scenario, const ExperimentConfig& config);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path path() const { return dir_ / "manifest.json"; }

    void csv(const std::string& name, const std::string& role, const std::vector<CsvColumn>& columns);
    void f64(const std::string& name, const std::string& role, const F64Array& array);
    void json(const std::string& name, const std::string& role, const nlohmann::json& doc);
    void text(const std::string& name, const std::string& role, const std::string& body);
    // Registers a file written by someone else under dir().
    void add(const std::string& name, const std::string& role);

    void set_seeds(nlohmann::json seeds);
    void set_summary(const std::string& key, nlohmann::json value);
    // Records an upstream manifest this run read, with its checksum.
    void add_input(const std::filesystem::path& manifest);
    void add_check(const Check& check);

    const std::vector<Check>& checks() const noexcept { return checks_; }

    void finalize();
    void fail(const std::string& error);

private:
    void write(const std::string& status, const std::string& error);

    std::filesystem::path dir_;
    nlohmann::json doc_;
    std::vector<std::pair<std::string, std::string>> files_;  // name, role
    std::vector<Check> checks_;
    std::chrono::steady_clock::time_point start_;
};

// A finalized manifest read back from disk.
class ManifestReader {
public:
    // Throws IoError unless the manifest exists and its status is "complete".
    explicit ManifestReader(const std::filesystem::path& manifest);

    const std::filesystem::path& path() const noexcept { return path_; }
    const nlohmann::json& doc() const noexcept { return doc_; }
    std::string scenario() const;
    ExperimentConfig config() const;
    std::vector<Check> checks() const;

    // Absolute path of the file with this role after verifying its checksum.
    std::filesystem::path file(const std::string& role) const;

    // Names of listed files whose size or checksum no longer matches.
    std::vector<std::string> verify() const;

private:
    std::filesystem::path path_;
    nlohmann::json doc_;
};

}  // namespace sedcat::app
