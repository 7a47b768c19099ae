#pragma once

#include <stdexcept>
#include <string>

namespace surfstate {

/// Base of every library error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A legitimate physics verdict: the requested state or root does not exist.
/// The CLI maps these to exit code 2.
class NoSolution : public Error {
 public:
  using Error::Error;
};

class NotInExactFamily : public NoSolution {
 public:
  explicit NotInExactFamily(double residual)
      : NoSolution("parameters are not in the exact family (relative residual " +
                   std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class NoRealRoot : public NoSolution {
 public:
  using NoSolution::NoSolution;
};

class NoState : public NoSolution {
 public:
  using NoSolution::NoSolution;
};

class ConditionUnsatisfied : public NoState {
 public:
  ConditionUnsatisfied(const std::string& what, double mismatch)
      : NoState(what), mismatch_(mismatch) {}
  double mismatch() const noexcept { return mismatch_; }

 private:
  double mismatch_;
};

class NoSolutionInRange : public NoSolution {
 public:
  using NoSolution::NoSolution;
};

class NoRootInBracket : public NoSolution {
 public:
  NoRootInBracket(const std::string& what, double lo, double hi)
      : NoSolution(what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

/// The state has a node where a logarithmic derivative was requested.
class NodeAtX : public Error {
 public:
  NodeAtX(double x, double value)
      : Error("state vanishes at x = " + std::to_string(x)), x_(x), value_(value) {}
  double x() const noexcept { return x_; }
  double value() const noexcept { return value_; }

 private:
  double x_, value_;
};

/// psi vanishes on the integration path of the second solution; use the
/// Wronskian-anchored convention instead.
class NodeOnPath : public Error {
 public:
  using Error::Error;
};

class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

class BoundaryContamination : public Error {
 public:
  BoundaryContamination(double edge_ratio, double z)
      : Error("field reached the domain edge (edge/peak = " + std::to_string(edge_ratio) +
              " at z = " + std::to_string(z) + ")"),
        edge_ratio_(edge_ratio) {}
  double edge_ratio() const noexcept { return edge_ratio_; }

 private:
  double edge_ratio_;
};

}  // namespace surfstate
