#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "gffexc/lattice.hpp"

namespace gffexc {

/// Discrete surrogate of the H^{-s} norm through the Dirichlet eigenbasis of
/// an embedding square.
struct SobolevSpec {
  double exponent = 1.1;
  Rectangle square{-1.0, -1.0, 1.0, 1.0};
  std::size_t max_frequency = 0;  // per axis; 0 = all frequencies the mesh resolves
};

/// Precomputed sine tables for one (domain, spec) pair.
///
/// The field is zero-extended to the square's grid and expanded in the
/// L^2-normalised basis (2/side) sin(j pi x/side) sin(k pi y/side) with
/// coefficients computed by h^2-weighted vertex quadrature. The squared norm
/// is sum_{j,k <= K} (pi^2 (j^2 + k^2) / side^2)^{-s} |c_jk|^2.
class SobolevNorm {
 public:
  SobolevNorm(const LatticeDomain& domain, const SobolevSpec& spec);

  /// Squared norm of a field on the domain this evaluator was built for.
  double squared(const Field& field) const;
  double squared(std::span<const double> values) const;

  std::size_t max_frequency() const { return frequencies_; }

 private:
  const LatticeDomain* domain_;
  std::size_t frequencies_ = 0;
  double scale_ = 1.0;
  Eigen::MatrixXd sin_x_;   // (domain i range) x K
  Eigen::MatrixXd sin_y_;   // (domain j range) x K
  Eigen::MatrixXd weight_;  // K x K eigenvalue weights
};

/// sobolev_norm(field, spec) = SobolevNorm(field.domain(), spec).squared(field).
/// Throws std::invalid_argument if the square does not contain the domain or
/// is not aligned with its lattice.
double sobolev_norm(const Field& field, const SobolevSpec& spec);

}  // namespace gffexc
