#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace flip {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "table") return OutputFormat::table;
  throw config_error("format: expected 'csv' or 'table', got '" + s + "'");
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open '" + path + "' for reading");
  return in;
}

void write_rows(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_full(m(r, c));
    }
    out << '\n';
  }
}

std::vector<double> parse_row(const std::string& line, const std::string& path) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      row.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw config_error("'" + path + "': cannot parse value '" + cell + "'");
    }
  }
  return row;
}

// "key=value" fields on a '#' header line.
std::string header_field(const std::string& header, const std::string& key,
                         const std::string& path) {
  const std::string needle = key + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos)
    throw config_error("'" + path + "': header missing field '" + key + "'");
  const auto start = pos + needle.size();
  const auto end = header.find(' ', start);
  return header.substr(start, end == std::string::npos ? end : end - start);
}

}  // namespace

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  write_rows(out, m);
}

Matrix read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_row(line, path));
    if (rows.size() > 1 && rows.back().size() != rows.front().size())
      throw config_error("'" + path + "': ragged rows");
  }
  if (rows.empty()) throw config_error("'" + path + "': no data rows");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_grid_function(const std::string& path, const GridFunction& f) {
  write_matrix_csv(path, f.values.transpose());
}

GridFunction read_grid_function(const std::string& path, Grid grid) {
  const Matrix m = read_matrix_csv(path);
  if (m.rows() != 1)
    throw config_error("'" + path + "': expected a single CSV row");
  return GridFunction(grid, m.row(0).transpose());
}

void write_basis_file(const std::string& path, const OrthonormalBasis& basis) {
  auto out = open_out(path);
  out << "# basis kind=" << to_string(basis.kind) << " D=" << basis.dimension()
      << " resolution=" << basis.grid.resolution << '\n';
  write_rows(out, basis.values.transpose());
}

OrthonormalBasis read_basis_file(const std::string& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# basis", 0) != 0)
    throw config_error("'" + path + "': missing '# basis' header");
  const BasisKind kind =
      basis_kind_from_string(header_field(header, "kind", path));
  const int dim = std::stoi(header_field(header, "D", path));
  const int resolution = std::stoi(header_field(header, "resolution", path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_row(line, path));
  }
  if (static_cast<int>(rows.size()) != dim)
    throw config_error("'" + path + "': expected " + std::to_string(dim) +
                       " basis functions");
  Matrix values(resolution, dim);
  for (int j = 0; j < dim; ++j) {
    if (static_cast<int>(rows[j].size()) != resolution)
      throw config_error("'" + path + "': row " + std::to_string(j + 1) +
                         " has wrong sample count");
    for (int k = 0; k < resolution; ++k) values(k, j) = rows[j][k];
  }
  // User files may be only approximately orthonormal.
  return orthonormalize(Grid(resolution), values, kind);
}

void write_lagcov_file(const std::string& path, const LagCovSet& covs) {
  auto out = open_out(path);
  out << "# lagcov D=" << covs.dim << " H=" << covs.max_lag() << '\n';
  for (int h = 0; h <= covs.max_lag(); ++h) {
    out << "# lag " << h << '\n';
    write_rows(out, covs.lags[h]);
  }
}

LagCovSet read_lagcov_file(const std::string& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# lagcov", 0) != 0)
    throw config_error("'" + path + "': missing '# lagcov' header");
  const int dim = std::stoi(header_field(header, "D", path));
  const int max_lag = std::stoi(header_field(header, "H", path));
  LagCovSet covs;
  covs.dim = dim;
  std::string line;
  Matrix current;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# lag", 0) == 0) {
      if (current.size() > 0) covs.lags.push_back(current);
      current = Matrix::Zero(dim, dim);
      row = 0;
      continue;
    }
    if (line[0] == '#') continue;
    const auto vals = parse_row(line, path);
    if (static_cast<int>(vals.size()) != dim || row >= dim)
      throw config_error("'" + path + "': malformed lag block");
    for (int c = 0; c < dim; ++c) current(row, c) = vals[c];
    ++row;
  }
  if (current.size() > 0) covs.lags.push_back(current);
  if (covs.max_lag() != max_lag)
    throw config_error("'" + path + "': expected " + std::to_string(max_lag + 1) +
                       " lag blocks, found " +
                       std::to_string(covs.lags.size()));
  return covs;
}

void write_spectral_csv(const std::string& path, const SpectralDensity& sd) {
  auto out = open_out(path);
  for (int k = 0; k < sd.grid_size(); ++k) {
    out << format_full(sd.omegas(k));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sd.values[k],
                                                    Eigen::EigenvaluesOnly);
    for (Eigen::Index j = es.eigenvalues().size(); j-- > 0;)
      out << ',' << format_full(es.eigenvalues()(j));
    out << '\n';
  }
}

namespace {

void dump_blocks(std::ostream& out, const std::vector<std::vector<Matrix>>& theta,
                 const std::vector<Matrix>& v) {
  out << "V 0\n";
  write_rows(out, v[0]);
  for (std::size_t n = 1; n < v.size(); ++n) {
    for (std::size_t i = 1; i <= theta[n - 1].size(); ++i) {
      out << "theta " << n << ' ' << i << '\n';
      write_rows(out, theta[n - 1][i - 1]);
    }
    out << "V " << n << '\n';
    write_rows(out, v[n]);
  }
}

}  // namespace

void dump_state(const std::string& path, const InnovationsStateFixedD& state) {
  auto out = open_out(path);
  out << "# innovations state kind=fixed D=" << state.dim
      << " n_max=" << state.n_max << " sparse_order=" << state.sparse_order
      << '\n';
  dump_blocks(out, state.theta, state.V);
}

void dump_state(const std::string& path,
                const InnovationsStateIncreasing& state) {
  auto out = open_out(path);
  out << "# innovations state kind=increasing n_max=" << state.n_max
      << " schedule=";
  for (std::size_t i = 0; i < state.schedule.size(); ++i) {
    if (i) out << ',';
    out << state.schedule[i];
  }
  out << '\n';
  dump_blocks(out, state.theta, state.V);
}

void write_report(const std::string& path, OutputFormat format,
                  const std::vector<std::vector<std::string>>& rows) {
  auto out = open_out(path);
  if (format == OutputFormat::csv) {
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        out << row[c];
      }
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      out << row[c];
      if (c + 1 < row.size())
        for (std::size_t pad = row[c].size(); pad < width[c]; ++pad) out << ' ';
    }
    out << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

}  // namespace flip
