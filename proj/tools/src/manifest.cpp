#include "sedcat/app/manifest.hpp"

#include <ctime>

#include "sedcat/app/io.hpp"

#ifndef SEDCAT_VERSION
#define SEDCAT_VERSION "0.0.0"
#endif

namespace sedcat::app {

namespace fs = std::filesystem;

namespace {

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

const char* artifact_version() noexcept { return SEDCAT_VERSION; }

nlohmann::json to_json(const Check& c)
{
    return {{"id", c.id},       {"name", c.name}, {"value", c.value},
            {"limit", c.limit}, {"pass", c.pass}, {"detail", c.detail}};
}

Check check_from_json(const nlohmann::json& j)
{
    Check c;
    c.id = j.at("id").get<int>();
    c.name = j.at("name").get<std::string>();
    c.value = j.at("value").is_number() ? j.at("value").get<double>() : 0.0;
    c.limit = j.at("limit").get<std::string>();
    c.pass = j.at("pass").get<bool>();
    c.detail = j.at("detail").get<std::string>();
    return c;
}

ManifestWriter::ManifestWriter(fs::path dir, std::string scenario, const ExperimentConfig& config)
    : dir_(std::move(dir)), start_(std::chrono::steady_clock::now())
{
    fs::create_directories(dir_);
    doc_["format"] = "sedcat-manifest";
    doc_["artifact_version"] = artifact_version();
    doc_["scenario"] = std::move(scenario);
    doc_["config"] = serialize_config(config);
    doc_["started_utc"] = utc_now();
    doc_["seeds"] = {{"master", config.run.seed}};
    doc_["inputs"] = nlohmann::json::array();
    doc_["summary"] = nlohmann::json::object();
    write("running", "");
}

void ManifestWriter::add(const std::string& name, const std::string& role)
{
    for (const auto& [n, r] : files_) {
        if (n == name || r == role) {
            throw IoError("manifest already lists " + (n == name ? name : role));
        }
    }
    files_.emplace_back(name, role);
}

void ManifestWriter::csv(const std::string& name, const std::string& role,
                         const std::vector<CsvColumn>& columns)
{
    write_csv(dir_ / name, columns);
    add(name, role);
}

void ManifestWriter::f64(const std::string& name, const std::string& role, const F64Array& array)
{
    const fs::path side = write_f64(dir_ / name, array);
    add(name, role);
    add(side.filename().string(), role + ".meta");
}

void ManifestWriter::json(const std::string& name, const std::string& role,
                          const nlohmann::json& doc)
{
    write_text(dir_ / name, doc.dump(2) + "\n");
    add(name, role);
}

void ManifestWriter::text(const std::string& name, const std::string& role, const std::string& body)
{
    write_text(dir_ / name, body);
    add(name, role);
}

void ManifestWriter::set_seeds(nlohmann::json seeds)
{
    seeds["master"] = doc_["seeds"]["master"];
    doc_["seeds"] = std::move(seeds);
}

void ManifestWriter::set_summary(const std::string& key, nlohmann::json value)
{
    doc_["summary"][key] = std::move(value);
}

void ManifestWriter::add_input(const fs::path& manifest)
{
    doc_["inputs"].push_back({{"manifest", fs::relative(manifest, dir_).generic_string()},
                              {"sha256", sha256_file(manifest)}});
}

void ManifestWriter::add_check(const Check& check)
{
    checks_.push_back(check);
}

void ManifestWriter::write(const std::string& status, const std::string& error)
{
    doc_["status"] = status;
    if (!error.empty()) {
        doc_["error"] = error;
    }
    nlohmann::json files = nlohmann::json::array();
    for (const auto& [name, role] : files_) {
        nlohmann::json f = {{"path", name}, {"role", role}};
        if (status != "running") {
            f["bytes"] = fs::file_size(dir_ / name);
            f["sha256"] = sha256_file(dir_ / name);
        }
        files.push_back(std::move(f));
    }
    doc_["files"] = std::move(files);
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : checks_) {
        checks.push_back(to_json(c));
    }
    doc_["checks"] = std::move(checks);
    if (status != "running") {
        doc_["finished_utc"] = utc_now();
        doc_["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    write_text(path(), doc_.dump(2) + "\n");
}

void ManifestWriter::finalize()
{
    write("complete", "");
}

void ManifestWriter::fail(const std::string& error)
{
    write("failed", error);
}

ManifestReader::ManifestReader(const fs::path& manifest) : path_(fs::absolute(manifest))
{
    if (!fs::exists(path_)) {
        throw IoError("missing manifest " + path_.string());
    }
    try {
        doc_ = nlohmann::json::parse(read_text(path_));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path_.string() + ": " + e.what());
    }
    if (doc_.value("format", "") != "sedcat-manifest") {
        throw IoError(path_.string() + ": not a sedcat manifest");
    }
    if (doc_.value("status", "") != "complete") {
        throw IoError(path_.string() + ": run status is '" + doc_.value("status", "") + "'");
    }
}

std::string ManifestReader::scenario() const
{
    return doc_.at("scenario").get<std::string>();
}

ExperimentConfig ManifestReader::config() const
{
    return parse_config(doc_.at("config").get<std::string>());
}

std::vector<Check> ManifestReader::checks() const
{
    std::vector<Check> out;
    for (const auto& c : doc_.at("checks")) {
        out.push_back(check_from_json(c));
    }
    return out;
}

fs::path ManifestReader::file(const std::string& role) const
{
    for (const auto& f : doc_.at("files")) {
        if (f.at("role") == role) {
            const fs::path p = path_.parent_path() / f.at("path").get<std::string>();
            if (!fs::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>()) {
                throw IoError(p.string() + ": checksum does not match " + path_.string());
            }
            return p;
        }
    }
    throw IoError(path_.string() + ": no file with role " + role);
}

std::vector<std::string> ManifestReader::verify() const
{
    std::vector<std::string> bad;
    for (const auto& f : doc_.at("files")) {
        const std::string name = f.at("path").get<std::string>();
        const fs::path p = path_.parent_path() / name;
        if (!fs::exists(p) || fs::file_size(p) != f.at("bytes").get<std::uintmax_t>() ||
            sha256_file(p) != f.at("sha256").get<std::string>()) {
            bad.push_back(name);
        }
    }
    return bad;
}

}  // namespace sedcat::app
