#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stiffkit {

/// Base class for all numerical / model failures raised by the library.
class StiffnessError : public std::runtime_error {
public:
  explicit StiffnessError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A pivot block of a partitioned matrix is rank-deficient.
class SingularBlock : public StiffnessError {
public:
  explicit SingularBlock(const std::string& msg) : StiffnessError(msg) {}
};

/// Input matrix fails the symmetry tolerance of an eigendecomposition.
class NotSymmetric : public StiffnessError {
public:
  explicit NotSymmetric(const std::string& msg) : StiffnessError(msg) {}
};

/// The virtual springs of a chain span fewer than 6 independent directions;
/// the unconstrained stiffness is not invertible and the saddle-point route
/// must be used instead.
class DeficientSprings : public StiffnessError {
public:
  explicit DeficientSprings(const std::string& msg) : StiffnessError(msg) {}
};

/// The assembled saddle-point system is numerically singular (redundant
/// passive joints or an under-spanned chain).
class SingularSystem : public StiffnessError {
public:
  explicit SingularSystem(const std::string& msg) : StiffnessError(msg) {}
};

/// A group pivot J_q^T K J_q went singular: some passive direction in the
/// group is already compliance-free.
class RedundantPassiveJoints : public StiffnessError {
public:
  RedundantPassiveJoints(const std::string& msg, std::vector<int> columns = {})
      : StiffnessError(msg), columns_(std::move(columns)) {}
  const std::vector<int>& columns() const { return columns_; }

private:
  std::vector<int> columns_;
};

/// Scalar pivot mu <= tolerance in a single-joint update.
class RedundantPassiveJoint : public StiffnessError {
public:
  RedundantPassiveJoint(const std::string& msg, int column = -1)
      : StiffnessError(msg), column_(column) {}
  int column() const { return column_; }

private:
  int column_;
};

/// Geometry of a manipulator fixture is degenerate (coincident attachment
/// points, non-positive leg length, ...).
class DegenerateGeometry : public StiffnessError {
public:
  explicit DegenerateGeometry(const std::string& msg) : StiffnessError(msg) {}
};

/// Model-file schema or semantic validation failure.
class ModelError : public StiffnessError {
public:
  explicit ModelError(const std::string& msg) : StiffnessError(msg) {}
};

}  // namespace stiffkit
