#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"

namespace flip {

// Grid-sampled representation of L^2([0,1]). Functions are sampled at the
// left endpoints t_k = k/resolution and integrals use the rectangle rule,
// which makes the coordinate map an exact isometry at the discrete level.

struct Grid {
  int resolution = 0;

  explicit Grid(int resolution);
  double spacing() const { return 1.0 / resolution; }
  double point(int k) const { return static_cast<double>(k) / resolution; }
  bool operator==(const Grid& other) const = default;
};

struct GridFunction {
  Grid grid;
  Vector values;

  GridFunction(Grid grid, Vector values);
};

enum class BasisKind { fourier, covariance_eigenbasis, user_supplied };

const char* to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

/// Ordered orthonormal family (nu_1, ..., nu_D); column j of `values` holds
/// the samples of nu_{j+1}.
struct OrthonormalBasis {
  Grid grid;
  Matrix values;  // resolution x D
  BasisKind kind = BasisKind::user_supplied;

  OrthonormalBasis(Grid grid, Matrix values, BasisKind kind);
  int dimension() const { return static_cast<int>(values.cols()); }
  GridFunction function(int i) const;  // 0-based

  /// Gram matrix under the grid quadrature; identity for a valid basis.
  Matrix gram() const;
  /// Largest deviation of gram() from the identity.
  double orthonormality_defect() const;
};

/// Rectangle-rule inner product; the grids must match.
double inner_product(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);

/// nu_1 = 1, nu_{2k} = sqrt(2) cos(2 pi k t), nu_{2k+1} = sqrt(2) sin(2 pi k t).
OrthonormalBasis fourier_basis(Grid grid, int dim);

/// Re-orthonormalizes a raw family by modified Gram-Schmidt and checks the
/// result against the 1e-8 orthonormality tolerance.
OrthonormalBasis orthonormalize(Grid grid, const Matrix& raw, BasisKind kind);

/// First `dim` coordinates <x, nu_i> of x.
Vector project(const GridFunction& x, const OrthonormalBasis& basis, int dim);

/// Element of span(nu_1..nu_dim) with the given coordinates.
GridFunction reconstruct(const Vector& coords, const OrthonormalBasis& basis);

/// Basis whose functions are nu'_j = sum_i rotation(i,j) nu_i. Used to pass
/// from an ambient basis to the covariance eigenbasis.
OrthonormalBasis rotate_basis(const OrthonormalBasis& basis,
                              const Matrix& rotation, BasisKind kind);

}  // namespace flip
