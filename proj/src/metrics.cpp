#include "romflux/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "romflux/fom.hpp"

namespace romflux {

ErrorSeries relative_error_series(const std::vector<double>& times,
                                  const std::vector<std::vector<double>>& reference,
                                  const std::vector<std::vector<double>>& approx,
                                  const std::vector<double>& weights) {
    require(reference.size() == approx.size() && reference.size() == times.size(),
            "relative_error_series: series length mismatch");
    ErrorSeries out;
    out.times = times;
    out.values.reserve(times.size());
    out.defined.reserve(times.size());
    for (size_t k = 0; k < reference.size(); ++k) {
        const std::vector<double>& r = reference[k];
        const std::vector<double>& a = approx[k];
        require(r.size() == weights.size() && a.size() == weights.size(),
                "relative_error_series: field length mismatch");
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < r.size(); ++i) {
            num += weights[i] * std::abs(r[i] - a[i]);
            den += weights[i] * std::abs(r[i]);
        }
        out.values.push_back(den > 0.0 ? num / den : 0.0);
        out.defined.push_back(den > 0.0 ? 1 : 0);
    }
    return out;
}

double relative_error_spacetime(const std::vector<std::vector<double>>& reference,
                                const std::vector<std::vector<double>>& approx,
                                const std::vector<double>& weights) {
    require(reference.size() == approx.size(),
            "relative_error_spacetime: series length mismatch");
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < reference.size(); ++k) {
        const std::vector<double>& r = reference[k];
        const std::vector<double>& a = approx[k];
        require(r.size() == weights.size() && a.size() == weights.size(),
                "relative_error_spacetime: field length mismatch");
        for (size_t i = 0; i < r.size(); ++i) {
            num += weights[i] * std::abs(r[i] - a[i]);
            den += weights[i] * std::abs(r[i]);
        }
    }
    return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

double time_mean(const ErrorSeries& series) {
    double s = 0.0;
    int n = 0;
    for (size_t k = 0; k < series.values.size(); ++k)
        if (series.defined[k]) {
            s += series.values[k];
            ++n;
        }
    return n > 0 ? s / n : std::numeric_limits<double>::quiet_NaN();
}

void remove_weighted_mean(std::vector<double>& v, const std::vector<double>& weights) {
    require(v.size() == weights.size(), "remove_weighted_mean: length mismatch");
    double s = 0.0, w = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        s += weights[i] * v[i];
        w += weights[i];
    }
    require(w > 0.0, "remove_weighted_mean: non-positive total weight");
    const double mean = s / w;
    for (double& x : v) x -= mean;
}

std::vector<double> cell_vorticity(const StructuredMesh& mesh, const CellVectorField& u_p,
                                   const FaceVectorField& u_b) {
    const auto grad = cell_velocity_gradient(mesh, u_p, u_b);
    std::vector<double> w(3 * static_cast<size_t>(mesh.n_cells()));
    for (int k = 0; k < mesh.n_cells(); ++k) {
        w[3 * k + 0] = grad[k][1][2] - grad[k][2][1];
        w[3 * k + 1] = grad[k][2][0] - grad[k][0][2];
        w[3 * k + 2] = grad[k][0][1] - grad[k][1][0];
    }
    return w;
}

double kinetic_energy(const StructuredMesh& mesh, const CellVectorField& u_p) {
    double e = 0.0;
    for (int k = 0; k < mesh.n_cells(); ++k)
        e += 0.5 * mesh.cell_volumes[k] * u_p.at(k).dot(u_p.at(k));
    return e;
}

double enstrophy(const StructuredMesh& mesh, const CellVectorField& u_p,
                 const FaceVectorField& u_b) {
    const std::vector<double> w = cell_vorticity(mesh, u_p, u_b);
    double z = 0.0;
    for (int k = 0; k < mesh.n_cells(); ++k) {
        const double wx = w[3 * k], wy = w[3 * k + 1], wz = w[3 * k + 2];
        z += 0.5 * mesh.cell_volumes[k] * (wx * wx + wy * wy + wz * wz);
    }
    return z;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    require(header.size() == columns.size(), "write_csv: header/column count mismatch");
    require(!columns.empty(), "write_csv: no columns");
    const size_t n = columns[0].size();
    for (const auto& c : columns)
        require(c.size() == n, "write_csv: ragged columns");
    std::ofstream out(path);
    if (!out) throw ValidationError("write_csv: cannot open " + path.string());
    for (size_t j = 0; j < header.size(); ++j)
        out << header[j] << (j + 1 == header.size() ? "\n" : ",");
    char buf[32];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < columns.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", columns[j][i]);
            out << buf << (j + 1 == columns.size() ? "\n" : ",");
        }
    if (!out) throw ValidationError("write_csv: write failed for " + path.string());
}

}  // namespace romflux
