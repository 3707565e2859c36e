#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "romflux/core.hpp"

namespace romflux {

/// One manifest entry. `offset`/`length` are byte positions inside the
/// field's payload file `<dir>/<name>.romf`.
struct SnapshotRecord {
    std::string name;
    std::string kind;  // cell-scalar | cell-vector | face-vector | matrix
    double time = 0.0;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;  // bytes
    int rows = 0, cols = 0;    // set for kind == "matrix"
};

struct FieldSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> columns;
};

/// Append-only container of time-ordered field records.
///
/// Payload files start with magic "ROMF" and a little-endian u32 format
/// version (1), followed by contiguous little-endian f64 records. The
/// JSON-lines manifest is the single source of record ordering; both files
/// are flushed after every record so a crash loses at most the last one.
class SnapshotSet {
  public:
    explicit SnapshotSet(const std::filesystem::path& dir);

    void write(const std::string& name, const std::string& kind, double time,
               std::span<const double> data);

    /// Store a dense matrix (row-major payload) under `name`.
    void write_matrix(const std::string& name, int rows, int cols,
                      std::span<const double> data);

    /// Columns are the records of `name` in manifest time order.
    FieldSeries read_series(const std::string& name) const;

    std::vector<double> read_record(const SnapshotRecord& rec) const;
    const SnapshotRecord& find_matrix(const std::string& name) const;

    const std::vector<SnapshotRecord>& records() const { return records_; }
    bool has(const std::string& name) const;
    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
    std::vector<SnapshotRecord> records_;
    std::map<std::string, double> last_time_;
    std::map<std::string, std::uint64_t> payload_size_;
    int pending_rows_ = 0, pending_cols_ = 0;

    std::filesystem::path payload_path(const std::string& name) const;
    std::filesystem::path manifest_path() const;
};

}  // namespace romflux
