#include "hilbert.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace flip {

namespace {
constexpr double kOrthoTol = 1e-8;
}

Grid::Grid(int resolution_) : resolution(resolution_) {
  if (resolution < 2)
    throw config_error("grid resolution must be at least 2, got " +
                       std::to_string(resolution));
}

GridFunction::GridFunction(Grid grid_, Vector values_)
    : grid(grid_), values(std::move(values_)) {
  if (values.size() != grid.resolution)
    throw config_error("grid function has " + std::to_string(values.size()) +
                       " samples for resolution " +
                       std::to_string(grid.resolution));
  if (!values.allFinite())
    throw config_error("grid function contains non-finite values");
}

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::fourier: return "fourier";
    case BasisKind::covariance_eigenbasis: return "covariance-eigenbasis";
    case BasisKind::user_supplied: return "user-supplied";
  }
  return "?";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "fourier") return BasisKind::fourier;
  if (s == "covariance-eigenbasis") return BasisKind::covariance_eigenbasis;
  if (s == "user-supplied") return BasisKind::user_supplied;
  throw config_error("unknown basis kind '" + s + "'");
}

OrthonormalBasis::OrthonormalBasis(Grid grid_, Matrix values_, BasisKind kind_)
    : grid(grid_), values(std::move(values_)), kind(kind_) {
  if (values.rows() != grid.resolution)
    throw config_error("basis sample count does not match grid resolution");
  if (values.cols() > grid.resolution)
    throw config_error("basis dimension " + std::to_string(values.cols()) +
                       " exceeds grid resolution " +
                       std::to_string(grid.resolution));
  const double defect = orthonormality_defect();
  if (defect > kOrthoTol)
    throw config_error("basis fails orthonormality check, defect " +
                       std::to_string(defect));
}

GridFunction OrthonormalBasis::function(int i) const {
  if (i < 0 || i >= dimension())
    throw config_error("basis function index out of range");
  return GridFunction(grid, values.col(i));
}

Matrix OrthonormalBasis::gram() const {
  return (values.transpose() * values) * grid.spacing();
}

double OrthonormalBasis::orthonormality_defect() const {
  Matrix g = gram();
  g.diagonal().array() -= 1.0;
  return max_abs(g);
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid))
    throw config_error("inner product of functions on different grids");
  return f.values.dot(g.values) * f.grid.spacing();
}

double norm(const GridFunction& f) {
  return std::sqrt(inner_product(f, f));
}

OrthonormalBasis fourier_basis(Grid grid, int dim) {
  if (dim < 1 || dim > grid.resolution)
    throw config_error("fourier basis dimension " + std::to_string(dim) +
                       " not in [1, " + std::to_string(grid.resolution) + "]");
  Matrix values(grid.resolution, dim);
  const double root2 = std::numbers::sqrt2;
  for (int k = 0; k < grid.resolution; ++k) {
    const double t = grid.point(k);
    for (int j = 0; j < dim; ++j) {
      if (j == 0) {
        values(k, j) = 1.0;
      } else {
        const int freq = (j + 1) / 2;
        const double phase = 2.0 * std::numbers::pi * freq * t;
        values(k, j) = (j % 2 == 1) ? root2 * std::cos(phase)
                                    : root2 * std::sin(phase);
      }
    }
  }
  return OrthonormalBasis(grid, std::move(values), BasisKind::fourier);
}

OrthonormalBasis orthonormalize(Grid grid, const Matrix& raw, BasisKind kind) {
  if (raw.rows() != grid.resolution)
    throw config_error("basis sample count does not match grid resolution");
  Matrix q = raw;
  const double h = grid.spacing();
  for (int j = 0; j < q.cols(); ++j) {
    // Modified Gram-Schmidt, twice against each earlier column.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i)
        q.col(j) -= (q.col(i).dot(q.col(j)) * h) * q.col(i);
    const double nrm = std::sqrt(q.col(j).squaredNorm() * h);
    if (nrm < 1e-12)
      throw config_error("basis column " + std::to_string(j + 1) +
                         " is linearly dependent");
    q.col(j) /= nrm;
  }
  return OrthonormalBasis(grid, std::move(q), kind);
}

Vector project(const GridFunction& x, const OrthonormalBasis& basis, int dim) {
  if (!(x.grid == basis.grid))
    throw config_error("projection of a function on a different grid");
  if (dim < 0 || dim > basis.dimension())
    throw config_error("projection dimension " + std::to_string(dim) +
                       " exceeds basis size " +
                       std::to_string(basis.dimension()));
  return basis.values.leftCols(dim).transpose() * x.values *
         basis.grid.spacing();
}

GridFunction reconstruct(const Vector& coords, const OrthonormalBasis& basis) {
  if (coords.size() > basis.dimension())
    throw config_error("coordinate vector longer than basis");
  return GridFunction(basis.grid,
                      basis.values.leftCols(coords.size()) * coords);
}

OrthonormalBasis rotate_basis(const OrthonormalBasis& basis,
                              const Matrix& rotation, BasisKind kind) {
  if (rotation.rows() != basis.dimension())
    throw config_error("rotation does not match basis dimension");
  return OrthonormalBasis(basis.grid, basis.values * rotation, kind);
}

}  // namespace flip
