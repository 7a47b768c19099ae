#pragma once

// Surface states built by C^1 matching of in-gap states across interfaces:
//
//   SemiInfinite    V0 for x <= x0 | V(eta, Delta) for x > x0
//   LatticePair     V(-eta, -Delta) for x <= x0 | V(eta, Delta) for x > x0
//   FiniteSandwich  V0 | V(eta, Delta) on (x0, x1) | V1
//   GapGuide        V(eta, -Delta) | V0 on (x0, x1) | V(eta, Delta)

#include <optional>
#include <string>
#include <vector>

#include "surfstate/ingap.hpp"
#include "surfstate/second_solution.hpp"

namespace surfstate {

enum class Geometry { SemiInfinite, LatticePair, FiniteSandwich, GapGuide };

const char* to_string(Geometry g);
/// Accepts "semi", "pair", "sandwich", "guide" and the to_string() names.
Geometry parse_geometry(const std::string& name);

/// Amplitude ratio of the two independent solutions in a middle region.
struct Ratio {
  enum class Kind { Finite, Infinite };
  Kind kind = Kind::Finite;
  double value = 0.0;

  static Ratio finite(double v) { return {Kind::Finite, v}; }
  static Ratio infinite() { return {Kind::Infinite, 0.0}; }
  bool is_infinite() const { return kind == Kind::Infinite; }
};

struct InterfaceSpec {
  Geometry geometry = Geometry::SemiInfinite;
  double x0 = 0.0;
  std::optional<double> x1;
  std::optional<double> V0;
  std::optional<double> V1;
  std::optional<Ratio> R;

  /// Throws std::invalid_argument when x1 is missing for a two-interface
  /// geometry or x1 <= x0.
  void validate() const;
};

struct Region {
  double lo = 0.0;  // may be -infinity
  double hi = 0.0;  // may be +infinity
  std::string label;
  bool periodic = false;  // lattice region (else constant index)
  PotentialFn potential;
  Evaluator eval;  // includes the matching coefficient
  /// Expected decay rate of |psi| away from the structure, outer regions only.
  std::optional<double> tail_rate;
};

struct MatchCoefficients {
  std::optional<double> C1, C2, C2_tilde, C2_minus, C2_plus, C3;
};

class PiecewiseState {
 public:
  PiecewiseState(Geometry geometry, double beta, std::vector<Region> regions,
                 MatchCoefficients coeffs);

  Geometry geometry() const noexcept { return geometry_; }
  double beta() const noexcept { return beta_; }
  const std::vector<Region>& regions() const noexcept { return regions_; }
  /// Coefficients after normalization to unit peak amplitude.
  const MatchCoefficients& coefficients() const noexcept { return coeffs_; }
  std::vector<double> interfaces() const;

  /// Normalized state; x on an interface belongs to the left region.
  StateSample eval(double x) const;
  double potential(double x) const;
  const Region& region_at(double x) const;
  Evaluator evaluator() const;
  PotentialFn potential_fn() const;

  /// Factor applied to the raw region evaluators.
  double normalization() const noexcept { return norm_; }

 private:
  Geometry geometry_;
  double beta_;
  std::vector<Region> regions_;
  MatchCoefficients coeffs_;
  double norm_ = 1.0;
};

struct SurfaceSolution {
  InterfaceSpec spec;  // with the solved V0, V1, R filled in
  LatticeParams params;
  int branch = 1;
  double beta = 0.0;
  PiecewiseState state;
  std::optional<Convention> convention;  // second-solution convention, if one was used
  std::optional<double> x_ref;
  std::vector<std::string> warnings;
};

// ---- assembly with explicit interface parameters (C^0 by construction) ----

/// The lattice side uses psi for Delta > 0 and, for Delta < 0, the decaying
/// partner psi~_{|Delta|}(-x) of the mirrored lattice.
PiecewiseState assemble_semi_infinite(const LatticeParams& params, int branch, double x0,
                                      double V0);
PiecewiseState assemble_lattice_pair(const LatticeParams& params, int branch, double x0);
PiecewiseState assemble_finite_sandwich(const InGapState& state, const SecondSolution* second,
                                        double x0, double x1, double V0, double V1, Ratio R);
PiecewiseState assemble_gap_guide(const LatticeParams& params, int branch, double x0, double x1,
                                  double V0);

// ---- solvers ----

/// V0 = beta + W(x0)^2 when W(x0) > 0; throws NoState otherwise.
SurfaceSolution solve_semi_infinite(const LatticeParams& params, int branch, double x0);

/// Checks W(-eta, -Delta, x0) = W(eta, Delta, x0). Throws ConditionUnsatisfied
/// when the mismatch exceeds tol, NoState when no interface position can work.
SurfaceSolution solve_lattice_pair(const LatticeParams& params, int branch, double x0,
                                   double tol = 1e-9);

/// Delta solving the lattice-pair condition at x0: 4 eta sin x0 for N = 0,
/// bracketed bisection on (0, 4 eta] otherwise.
double find_delta_for_pair(double eta, int order, int branch, double x0);

struct SandwichMode {
  enum class Kind { GivenR, GivenV0, PureFirst, PureSecond };
  Kind kind = Kind::PureFirst;
  double value = 0.0;

  static SandwichMode given_r(double r) { return {Kind::GivenR, r}; }
  static SandwichMode given_v0(double v0) { return {Kind::GivenV0, v0}; }
  static SandwichMode pure_first() { return {Kind::PureFirst, 0.0}; }
  static SandwichMode pure_second() { return {Kind::PureSecond, 0.0}; }
};

struct SecondSolutionChoice {
  std::optional<Convention> convention;  // default: integral for N = 0, anchored otherwise
  std::optional<double> x_ref;           // anchored convention; default x0
};

SurfaceSolution solve_finite_sandwich(const LatticeParams& params, int branch, double x0,
                                      double x1, SandwichMode mode,
                                      const SecondSolutionChoice& choice = {});

/// Solves the two-interface condition for V0 by bracketing over
/// (beta + 1e-9, beta + 16 eta^2 + 1]; picks the root nearest seed_v0, or the
/// lowest one. Throws NoRootInBracket.
SurfaceSolution solve_gap_guide(const LatticeParams& params, int branch, double x0, double x1,
                                std::optional<double> seed_v0 = std::nullopt);

// ---- verification ----

struct InterfaceMismatch {
  double x = 0.0;
  double value = 0.0;       // |psi_L - psi_R|, state normalized to unit peak
  double derivative = 0.0;  // |psi'_L - psi'_R|
};

struct DecayCheck {
  std::string region;
  double fitted = 0.0;
  double expected = 0.0;
};

struct ProfileReport {
  std::vector<StateSample> samples;
  std::vector<double> potential;
  std::vector<InterfaceMismatch> interfaces;
  std::vector<DecayCheck> decay;
  double max_value_mismatch() const;
  double max_derivative_mismatch() const;
};

struct ProfileOptions {
  double padding = 6.0 * 3.14159265358979323846;
  int points = 2001;
};

ProfileReport assemble_and_verify(const PiecewiseState& state, const ProfileOptions& opts = {});

}  // namespace surfstate
