#include "romflux/romf.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace romflux {

namespace {

constexpr char kMagic[4] = {'R', 'O', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kHeaderBytes = 8;

// Payloads are little-endian f64 on disk; this codebase targets
// little-endian hosts and memcpy is used directly.
static_assert(sizeof(double) == 8);

void write_header(std::ofstream& out) {
    out.write(kMagic, 4);
    std::uint32_t v = kVersion;
    out.write(reinterpret_cast<const char*>(&v), 4);
}

}  // namespace

SnapshotSet::SnapshotSet(const std::filesystem::path& dir) : dir_(dir) {
    std::filesystem::create_directories(dir_);
    std::ifstream manifest(manifest_path());
    std::string line;
    int lineno = 0;
    while (std::getline(manifest, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("manifest " + manifest_path().string() + " line " +
                                  std::to_string(lineno) + ": " + e.what());
        }
        SnapshotRecord r;
        r.name = j.at("name").get<std::string>();
        r.kind = j.at("kind").get<std::string>();
        r.time = j.at("time").get<double>();
        r.offset = j.at("offset").get<std::uint64_t>();
        r.length = j.at("length").get<std::uint64_t>();
        r.rows = j.value("rows", 0);
        r.cols = j.value("cols", 0);
        records_.push_back(r);
        last_time_[r.name] = r.time;
        auto& sz = payload_size_[r.name];
        sz = std::max(sz, r.offset + r.length);
    }
}

std::filesystem::path SnapshotSet::payload_path(const std::string& name) const {
    return dir_ / (name + ".romf");
}

std::filesystem::path SnapshotSet::manifest_path() const {
    return dir_ / "manifest.jsonl";
}

void SnapshotSet::write(const std::string& name, const std::string& kind,
                        double time, std::span<const double> data) {
    require(!name.empty(), "SnapshotSet::write: empty field name");
    for (double x : data)
        require(std::isfinite(x), "SnapshotSet::write: non-finite entry in '" + name + "'");
    auto it = last_time_.find(name);
    if (it != last_time_.end() && kind != "matrix")
        require(time > it->second,
                "SnapshotSet::write: non-monotone time for '" + name + "' (" +
                    std::to_string(time) + " after " + std::to_string(it->second) + ")");

    const auto path = payload_path(name);
    std::uint64_t offset;
    std::ofstream out;
    if (!std::filesystem::exists(path)) {
        out.open(path, std::ios::binary);
        if (!out) throw NumericalError("cannot open " + path.string());
        write_header(out);
        offset = kHeaderBytes;
    } else {
        out.open(path, std::ios::binary | std::ios::app);
        if (!out) throw NumericalError("cannot open " + path.string());
        offset = payload_size_.count(name) ? payload_size_[name]
                                           : std::filesystem::file_size(path);
        if (offset < kHeaderBytes) offset = kHeaderBytes;
    }
    const std::uint64_t bytes = data.size() * sizeof(double);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(bytes));
    out.flush();
    if (!out) throw NumericalError("write failed for " + path.string());

    SnapshotRecord r{name, kind, time, offset, bytes, pending_rows_, pending_cols_};
    nlohmann::json j = {{"name", name}, {"kind", kind}, {"time", time},
                        {"offset", offset}, {"length", bytes}};
    if (pending_rows_ > 0) {
        j["rows"] = pending_rows_;
        j["cols"] = pending_cols_;
    }
    std::ofstream manifest(manifest_path(), std::ios::app);
    manifest << j.dump() << "\n";
    manifest.flush();
    if (!manifest) throw NumericalError("manifest write failed for " + manifest_path().string());

    records_.push_back(r);
    last_time_[name] = time;
    payload_size_[name] = offset + bytes;
}

void SnapshotSet::write_matrix(const std::string& name, int rows, int cols,
                               std::span<const double> data) {
    require(static_cast<std::uint64_t>(rows) * cols == data.size(),
            "SnapshotSet::write_matrix: shape mismatch for '" + name + "'");
    pending_rows_ = rows;
    pending_cols_ = cols;
    write(name, "matrix", 0.0, data);
    pending_rows_ = pending_cols_ = 0;
}

FieldSeries SnapshotSet::read_series(const std::string& name) const {
    FieldSeries s;
    for (const SnapshotRecord& r : records_) {
        if (r.name != name || r.kind == "matrix") continue;
        s.times.push_back(r.time);
        s.columns.push_back(read_record(r));
    }
    require(!s.times.empty(), "SnapshotSet: no records for field '" + name + "'");
    return s;
}

std::vector<double> SnapshotSet::read_record(const SnapshotRecord& rec) const {
    std::ifstream in(payload_path(rec.name), std::ios::binary);
    if (!in) throw NumericalError("cannot open " + payload_path(rec.name).string());
    char magic[4];
    std::uint32_t version = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    require(std::memcmp(magic, kMagic, 4) == 0, "bad magic in " + payload_path(rec.name).string());
    require(version == kVersion, "unsupported format version in " + payload_path(rec.name).string());
    std::vector<double> data(rec.length / sizeof(double));
    in.seekg(static_cast<std::streamoff>(rec.offset));
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(rec.length));
    if (!in) throw NumericalError("short read in " + payload_path(rec.name).string());
    return data;
}

const SnapshotRecord& SnapshotSet::find_matrix(const std::string& name) const {
    for (auto it = records_.rbegin(); it != records_.rend(); ++it)
        if (it->name == name && it->rows > 0) return *it;
    throw ValidationError("SnapshotSet: no matrix record for '" + name + "'");
}

bool SnapshotSet::has(const std::string& name) const {
    for (const SnapshotRecord& r : records_)
        if (r.name == name) return true;
    return false;
}

}  // namespace romflux
