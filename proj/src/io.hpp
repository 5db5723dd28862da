#pragma once

#include <string>
#include <vector>

#include "covariance.hpp"
#include "hilbert.hpp"
#include "innovations.hpp"
#include "linalg.hpp"

namespace flip {

/// Shortest round-trippable decimal (17 significant digits).
std::string format_full(double x);

enum class OutputFormat { csv, table };
OutputFormat output_format_from_string(const std::string& s);

/// Plain comma-separated rows, one line per matrix row, full precision.
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Reads comma-separated numeric rows; lines starting with '#' are skipped.
Matrix read_matrix_csv(const std::string& path);

void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path, Grid grid);

/// One basis function per row under a `# basis kind=.. D=.. resolution=..`
/// header. Reading re-orthonormalizes user-supplied families.
void write_basis_file(const std::string& path, const OrthonormalBasis& basis);
OrthonormalBasis read_basis_file(const std::string& path);

/// `# lagcov D=.. H=..` header, then one `# lag h` block per lag.
void write_lagcov_file(const std::string& path, const LagCovSet& covs);
LagCovSet read_lagcov_file(const std::string& path);

/// Plot-ready rows (omega, eigenvalue_1, ..., eigenvalue_D), eigenvalues
/// descending per frequency.
void write_spectral_csv(const std::string& path, const SpectralDensity& sd);

void dump_state(const std::string& path, const InnovationsStateFixedD& state);
void dump_state(const std::string& path,
                const InnovationsStateIncreasing& state);

/// Report rendering shared by the CLI: csv writes comma rows, table aligns
/// columns with spaces. The first row holds the column names.
void write_report(const std::string& path, OutputFormat format,
                  const std::vector<std::vector<std::string>>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace flip
