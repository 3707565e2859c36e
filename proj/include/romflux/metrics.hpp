#pragma once

#include <filesystem>
#include <string>

#include "romflux/fields.hpp"
#include "romflux/mesh.hpp"

namespace romflux {

struct ErrorSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<char> defined;  // 0 where the reference integral vanishes
};

/// Relative error per time instant with absolute values inside the discrete
/// integrals: (sum_k w_k |ref_k - approx_k|) / (sum_k w_k |ref_k|). Points
/// with a vanishing denominator are flagged undefined, value 0.
ErrorSeries relative_error_series(const std::vector<double>& times,
                                  const std::vector<std::vector<double>>& reference,
                                  const std::vector<std::vector<double>>& approx,
                                  const std::vector<double>& weights);

/// Space-time integrated relative error: ratio of the summed numerator and
/// denominator integrals over all instants. NaN if the reference vanishes
/// everywhere.
double relative_error_spacetime(const std::vector<std::vector<double>>& reference,
                                const std::vector<std::vector<double>>& approx,
                                const std::vector<double>& weights);

/// Mean over the defined entries of an error series; NaN when none are.
double time_mean(const ErrorSeries& series);

/// Subtract the weighted mean in place (pressure comparisons are made in the
/// zero-mean gauge because each field carries an arbitrary constant).
void remove_weighted_mean(std::vector<double>& v, const std::vector<double>& weights);

/// Cell vorticity (3h) from the antisymmetric part of the Gauss gradient.
std::vector<double> cell_vorticity(const StructuredMesh& mesh, const CellVectorField& u_p,
                                   const FaceVectorField& u_b);

double kinetic_energy(const StructuredMesh& mesh, const CellVectorField& u_p);
double enstrophy(const StructuredMesh& mesh, const CellVectorField& u_p,
                 const FaceVectorField& u_b);

/// Column-oriented CSV with one header row. All columns must share a length.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace romflux
