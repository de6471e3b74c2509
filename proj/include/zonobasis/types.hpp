#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zonobasis {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  InfeasibleFiber,
  RankDeficient,
  Singular,
  GridMismatch,
  GridMisaligned,
  SupportViolation,
  EtaGaveUp,
  SolverBreakdown,
  EmptyWindow,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Input-side problems (malformed files, bad dimensions, misaligned grids).
inline bool is_input_error(ErrorKind k) {
  return k == ErrorKind::InvalidInput || k == ErrorKind::DimensionMismatch ||
         k == ErrorKind::GridMismatch || k == ErrorKind::GridMisaligned;
}

} // namespace zonobasis
