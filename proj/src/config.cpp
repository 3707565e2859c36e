#include "romflux/config.hpp"

#include <fstream>
#include <map>
#include <set>

namespace romflux {

namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& msg) {
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

Sections parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    Sections sections;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                fail(path, lineno, "malformed section header '" + t + "'");
            section = t.substr(1, t.size() - 2);
            sections[section];  // remember even if empty
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail(path, lineno, "expected 'key = value', got '" + t + "'");
        if (section.empty()) fail(path, lineno, "key before any [section]");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            fail(path, lineno, "expected 'key = value', got '" + t + "'");
        auto [it, inserted] = sections[section].emplace(key, Entry{value, lineno});
        if (!inserted)
            fail(path, lineno, "duplicate key '" + key + "' in [" + section + "], first at line " +
                                   std::to_string(it->second.line));
    }
    return sections;
}

/// Typed access with presence tracking so leftovers can be reported.
class Reader {
  public:
    Reader(const std::filesystem::path& path, const Sections& sections)
        : path_(path), sections_(sections) {}

    const Entry* find(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    template <typename T, typename Parse>
    void get(const std::string& section, const std::string& key, T& out, Parse parse,
             bool required) const {
        const Entry* e = find(section, key);
        if (!e) {
            if (required)
                throw ValidationError(path_.string() + ": missing required key '" + key +
                                      "' in [" + section + "]");
            return;
        }
        try {
            size_t used = 0;
            out = parse(e->value, used);
            if (used != e->value.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            fail(path_, e->line, "invalid value '" + e->value + "' for '" + key + "'");
        }
    }

    void get_int(const std::string& s, const std::string& k, int& out, bool req = false) const {
        get(s, k, out,
            [](const std::string& v, size_t& used) { return std::stoi(v, &used); }, req);
    }
    void get_u64(const std::string& s, const std::string& k, std::uint64_t& out) const {
        get(s, k, out,
            [](const std::string& v, size_t& used) {
                return static_cast<std::uint64_t>(std::stoull(v, &used));
            },
            false);
    }
    void get_double(const std::string& s, const std::string& k, double& out,
                    bool req = false) const {
        get(s, k, out,
            [](const std::string& v, size_t& used) { return std::stod(v, &used); }, req);
    }
    void get_string(const std::string& s, const std::string& k, std::string& out) const {
        const Entry* e = find(s, k);
        if (e) out = e->value;
    }

    void check_consumed(const std::set<std::string>& known_sections) const {
        for (const auto& [section, keys] : sections_) {
            if (!known_sections.count(section))
                throw ValidationError(path_.string() + ": unknown section [" + section + "]");
            for (const auto& [key, entry] : keys)
                if (!entry.used)
                    fail(path_, entry.line,
                         "unknown key '" + key + "' in [" + section + "]");
        }
    }

  private:
    const std::filesystem::path& path_;
    const Sections& sections_;
};

}  // namespace

CaseConfig load_case_config(const std::filesystem::path& path) {
    const Sections sections = parse_file(path);
    const Reader r(path, sections);
    CaseConfig c;

    r.get_int("mesh", "nx", c.nx, true);
    r.get_int("mesh", "ny", c.ny, true);
    r.get_int("mesh", "nz", c.nz, true);
    r.get_double("mesh", "lx", c.lx);
    r.get_double("mesh", "ly", c.ly);
    r.get_double("mesh", "lz", c.lz);

    r.get_double("physics", "nu", c.nu, true);
    r.get_double("physics", "c_s", c.c_s);
    r.get_double("physics", "lid_u", c.lid_velocity.x);
    r.get_double("physics", "lid_v", c.lid_velocity.y);
    r.get_double("physics", "lid_w", c.lid_velocity.z);

    r.get_double("time", "dt", c.dt, true);
    r.get_int("time", "n_steps", c.n_steps, true);
    r.get_int("time", "spinup_steps", c.spinup_steps);
    r.get_int("time", "snapshot_stride", c.snapshot_stride);

    r.get_int("rom", "modes_u", c.modes_u);
    r.get_int("rom", "modes_p", c.modes_p);
    r.get_int("rom", "modes_f", c.modes_f);
    r.get_int("rom", "modes_nut", c.modes_nut);
    r.get_double("rom", "ppe_tol", c.ppe_tol);
    r.get_int("rom", "ref_cell", c.ref_cell);
    r.get_double("rom", "p_ref", c.p_ref);

    r.get_string("closure", "model", c.closure_model);
    r.get_int("closure", "lookback", c.lookback);
    r.get_int("closure", "epochs", c.epochs);
    r.get_int("closure", "batch_size", c.batch_size);
    r.get_double("closure", "learning_rate", c.learning_rate);
    r.get_double("closure", "dropout", c.dropout);
    r.get_double("closure", "val_fraction", c.val_fraction);
    r.get_u64("closure", "seed", c.seed);

    std::string dir;
    r.get_string("paths", "case_dir", dir);
    c.case_dir = dir.empty() ? path.parent_path() : std::filesystem::path(dir);
    if (c.case_dir.empty()) c.case_dir = ".";

    r.check_consumed({"mesh", "physics", "time", "rom", "closure", "paths"});

    require(c.closure_model == "mlp" || c.closure_model == "lstm",
            path.string() + ": closure model must be 'mlp' or 'lstm'");
    return c;
}

}  // namespace romflux
