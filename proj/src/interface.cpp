#include "surfstate/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "surfstate/errors.hpp"

namespace surfstate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

PotentialFn lattice_potential(const LatticeParams& p) {
  return [p](double x) { return potential(p, x); };
}

PotentialFn constant_potential(double v) {
  return [v](double) { return v; };
}

Evaluator state_evaluator(std::shared_ptr<const InGapState> s, double coeff) {
  return [s, coeff](double x) {
    auto r = s->eval(x);
    r.psi *= coeff;
    r.dpsi *= coeff;
    return r;
  };
}

/// amplitude * exp(rate * (x - x_anchor))
Evaluator exponential(double amplitude, double rate, double x_anchor) {
  return [=](double x) {
    const double e = amplitude * std::exp(rate * (x - x_anchor));
    return StateSample{x, e, rate * e};
  };
}

void require_positive_delta(const LatticeParams& p, const char* geometry) {
  if (!(p.delta() > 0.0))
    throw std::invalid_argument(std::string(geometry) + " geometry is constructed for Delta > 0");
}

void require_ordered(double x0, double x1) {
  if (!(x1 > x0)) throw std::invalid_argument("interfaces require x1 > x0");
}

double sqrt_gap(double V, double beta) {
  if (!(V > beta)) throw NoState("V = " + std::to_string(V) + " is not above beta = " + std::to_string(beta));
  return std::sqrt(V - beta);
}

// Lattice state for the decaying side x > x0 of a semi-infinite structure.
struct LatticeSide {
  double beta;
  Evaluator eval;
};

LatticeSide semi_infinite_lattice_side(const LatticeParams& params, int branch, double x0) {
  if (params.delta() > 0.0) {
    auto s = std::make_shared<const InGapState>(InGapState::build(params, branch));
    return {s->beta(), state_evaluator(s, 1.0)};
  }
  if (params.delta() == 0.0)
    throw std::invalid_argument("Delta = 0 gives bounded Bloch waves; no surface state can be built");
  // psi(eta, Delta, x) = psi(eta, |Delta|, -x) grows to the right, so the decaying
  // solution is the partner psi~ of the mirrored lattice, reflected back.
  const auto mirrored = InGapState::build(params.mirrored(), branch);
  auto second = std::make_shared<const SecondSolution>(
      SecondSolution::integral(mirrored, -x0 - 120.0 * kPi, -x0 + kPi));
  return {mirrored.beta(), [second](double x) {
            const auto s = second->eval(-x);
            return StateSample{x, s.psi, -s.dpsi};
          }};
}

double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

const char* to_string(Geometry g) {
  switch (g) {
    case Geometry::SemiInfinite:
      return "semi_infinite";
    case Geometry::LatticePair:
      return "lattice_pair";
    case Geometry::FiniteSandwich:
      return "finite_sandwich";
    case Geometry::GapGuide:
      return "gap_guide";
  }
  return "?";
}

Geometry parse_geometry(const std::string& name) {
  if (name == "semi" || name == "semi_infinite") return Geometry::SemiInfinite;
  if (name == "pair" || name == "lattice_pair") return Geometry::LatticePair;
  if (name == "sandwich" || name == "finite_sandwich") return Geometry::FiniteSandwich;
  if (name == "guide" || name == "gap_guide") return Geometry::GapGuide;
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

void InterfaceSpec::validate() const {
  const bool two = geometry == Geometry::FiniteSandwich || geometry == Geometry::GapGuide;
  if (two && !x1) throw std::invalid_argument("geometry needs a second interface x1");
  if (x1) require_ordered(x0, *x1);
}

PiecewiseState::PiecewiseState(Geometry geometry, double beta, std::vector<Region> regions,
                               MatchCoefficients coeffs)
    : geometry_(geometry), beta_(beta), regions_(std::move(regions)), coeffs_(coeffs) {
  const auto ifaces = interfaces();
  const double lo = ifaces.front() - 8.0 * kPi, hi = ifaces.back() + 8.0 * kPi;
  double peak = 0.0;
  for (double x : linspace(lo, hi, 4001)) peak = std::max(peak, std::abs(region_at(x).eval(x).psi));
  for (double x : ifaces) peak = std::max(peak, std::abs(region_at(x).eval(x).psi));
  if (!(peak > 0.0) || !std::isfinite(peak)) throw std::runtime_error("state has no finite peak");
  norm_ = 1.0 / peak;
  for (auto* c : {&coeffs_.C1, &coeffs_.C2, &coeffs_.C2_tilde, &coeffs_.C2_minus,
                  &coeffs_.C2_plus, &coeffs_.C3})
    if (*c) **c *= norm_;
}

std::vector<double> PiecewiseState::interfaces() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < regions_.size(); ++i) out.push_back(regions_[i].hi);
  return out;
}

const Region& PiecewiseState::region_at(double x) const {
  for (const auto& r : regions_)
    if (x <= r.hi) return r;
  return regions_.back();
}

StateSample PiecewiseState::eval(double x) const {
  auto s = region_at(x).eval(x);
  s.psi *= norm_;
  s.dpsi *= norm_;
  return s;
}

double PiecewiseState::potential(double x) const { return region_at(x).potential(x); }

Evaluator PiecewiseState::evaluator() const {
  return [self = std::make_shared<const PiecewiseState>(*this)](double x) { return self->eval(x); };
}

PotentialFn PiecewiseState::potential_fn() const {
  return [self = std::make_shared<const PiecewiseState>(*this)](double x) {
    return self->potential(x);
  };
}

// ---------------------------------------------------------------- assembly

PiecewiseState assemble_semi_infinite(const LatticeParams& params, int branch, double x0,
                                      double V0) {
  auto side = semi_infinite_lattice_side(params, branch, x0);
  const double q = sqrt_gap(V0, side.beta);
  const double at_x0 = side.eval(x0).psi;

  std::vector<Region> regions(2);
  regions[0] = {-kInf, x0, "I", false, constant_potential(V0), exponential(at_x0, q, x0), q};
  regions[1] = {x0, kInf, "II", true, lattice_potential(params), side.eval,
                0.5 * std::abs(params.delta())};
  MatchCoefficients c;
  c.C1 = at_x0 * std::exp(-q * x0);
  c.C2 = 1.0;
  return PiecewiseState(Geometry::SemiInfinite, side.beta, std::move(regions), c);
}

PiecewiseState assemble_lattice_pair(const LatticeParams& params, int branch, double x0) {
  require_positive_delta(params, "lattice-pair");
  auto right = std::make_shared<const InGapState>(InGapState::build(params, branch));
  auto left = std::make_shared<const InGapState>(
      InGapState::at_beta(params.negated(), right->beta(), branch, right->multiplicity()));
  const double c1 = right->eval(x0).psi / left->eval(x0).psi;

  std::vector<Region> regions(2);
  regions[0] = {-kInf, x0, "I", true, lattice_potential(params.negated()), state_evaluator(left, c1),
                0.5 * params.delta()};
  regions[1] = {x0, kInf, "II", true, lattice_potential(params), state_evaluator(right, 1.0),
                0.5 * params.delta()};
  MatchCoefficients c;
  c.C1 = c1;
  c.C2 = 1.0;
  return PiecewiseState(Geometry::LatticePair, right->beta(), std::move(regions), c);
}

PiecewiseState assemble_finite_sandwich(const InGapState& state, const SecondSolution* second,
                                        double x0, double x1, double V0, double V1, Ratio R) {
  require_ordered(x0, x1);
  const double beta = state.beta();
  const double q0 = sqrt_gap(V0, beta), q1 = sqrt_gap(V1, beta);
  double c2 = 1.0, c2t = 0.0;
  if (R.is_infinite()) {
    c2 = 0.0;
    c2t = 1.0;
  } else {
    c2t = R.value;
  }
  if (c2t != 0.0 && second == nullptr)
    throw std::invalid_argument("a second solution is required when R != 0");

  auto base = std::make_shared<const InGapState>(state);
  std::shared_ptr<const SecondSolution> partner;
  if (second) partner = std::make_shared<const SecondSolution>(*second);
  Evaluator middle = [base, partner, c2, c2t](double x) {
    auto s = base->eval(x);
    StateSample r{x, c2 * s.psi, c2 * s.dpsi};
    if (c2t != 0.0) {
      const auto t = partner->eval(x);
      r.psi += c2t * t.psi;
      r.dpsi += c2t * t.dpsi;
    }
    return r;
  };
  const double at_x0 = middle(x0).psi, at_x1 = middle(x1).psi;

  std::vector<Region> regions(3);
  regions[0] = {-kInf, x0, "I", false, constant_potential(V0), exponential(at_x0, q0, x0), q0};
  regions[1] = {x0, x1, "II", true, lattice_potential(state.params()), middle, std::nullopt};
  regions[2] = {x1, kInf, "III", false, constant_potential(V1), exponential(at_x1, -q1, x1), q1};
  MatchCoefficients c;
  c.C1 = at_x0 * std::exp(-q0 * x0);
  c.C2 = c2;
  c.C2_tilde = c2t;
  c.C3 = at_x1 * std::exp(q1 * x1);
  return PiecewiseState(Geometry::FiniteSandwich, beta, std::move(regions), c);
}

PiecewiseState assemble_gap_guide(const LatticeParams& params, int branch, double x0, double x1,
                                  double V0) {
  require_positive_delta(params, "gap-guide");
  require_ordered(x0, x1);
  auto right = std::make_shared<const InGapState>(InGapState::build(params, branch));
  auto left = std::make_shared<const InGapState>(
      InGapState::at_beta(params.mirrored(), right->beta(), branch, right->multiplicity()));
  const double q = sqrt_gap(V0, right->beta());

  // Middle region alpha exp(-q (x - x0)) + gamma exp(q (x - x0)), matched to region I.
  const auto l0 = left->eval(x0);
  const double alpha = 0.5 * (l0.psi - l0.dpsi / q);
  const double gamma = 0.5 * (l0.psi + l0.dpsi / q);
  Evaluator middle = [=](double x) {
    const double em = alpha * std::exp(-q * (x - x0)), ep = gamma * std::exp(q * (x - x0));
    return StateSample{x, em + ep, q * (ep - em)};
  };
  const double c3 = middle(x1).psi / right->eval(x1).psi;

  std::vector<Region> regions(3);
  regions[0] = {-kInf, x0, "I", true, lattice_potential(params.mirrored()),
                state_evaluator(left, 1.0), 0.5 * params.delta()};
  regions[1] = {x0, x1, "II", false, constant_potential(V0), middle, std::nullopt};
  regions[2] = {x1, kInf, "III", true, lattice_potential(params), state_evaluator(right, c3),
                0.5 * params.delta()};
  MatchCoefficients c;
  c.C1 = 1.0;
  c.C2_minus = alpha * std::exp(q * x0);
  c.C2_plus = gamma * std::exp(-q * x0);
  c.C3 = c3;
  return PiecewiseState(Geometry::GapGuide, right->beta(), std::move(regions), c);
}

// ---------------------------------------------------------------- solvers

SurfaceSolution solve_semi_infinite(const LatticeParams& params, int branch, double x0) {
  auto side = semi_infinite_lattice_side(params, branch, x0);
  const double W = log_derivative(side.eval, x0);
  if (!(W > 0.0))
    throw NoState("semi-infinite surface state needs W(x0) > 0, got " + std::to_string(W));
  const double V0 = side.beta + W * W;
  SurfaceSolution sol{{Geometry::SemiInfinite, x0, std::nullopt, V0, std::nullopt, std::nullopt},
                      params,
                      branch,
                      side.beta,
                      assemble_semi_infinite(params, branch, x0, V0),
                      std::nullopt,
                      std::nullopt,
                      {}};
  if (params.delta() < 0.0) sol.convention = Convention::IntegralFromMinusInfinity;
  return sol;
}

SurfaceSolution solve_lattice_pair(const LatticeParams& params, int branch, double x0,
                                   double tol) {
  require_positive_delta(params, "lattice-pair");
  if (params.order() == 0 && params.delta() > 4.0 * std::abs(params.eta()))
    throw NoState("lattice-pair state needs |Delta / 4 eta| <= 1");
  const auto right = InGapState::build(params, branch);
  const auto left = InGapState::at_beta(params.negated(), right.beta(), branch);
  const double w_left = log_derivative(left, x0);
  const double w_right = log_derivative(right, x0);
  const double mismatch = std::abs(w_left - w_right);
  if (mismatch > tol * std::max(1.0, std::abs(w_right)))
    throw ConditionUnsatisfied("W(-eta,-Delta,x0) != W(eta,Delta,x0); mismatch " +
                                   std::to_string(mismatch),
                               mismatch);
  return {{Geometry::LatticePair, x0, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
          params,
          branch,
          right.beta(),
          assemble_lattice_pair(params, branch, x0),
          std::nullopt,
          std::nullopt,
          {}};
}

double find_delta_for_pair(double eta, int order, int branch, double x0) {
  if (!(eta > 0.0)) throw std::invalid_argument("find_delta_for_pair needs eta > 0");
  if (order == 0) {
    const double s = std::sin(x0);
    if (!(s > 0.0 && s <= 1.0))
      throw NoSolutionInRange("4 eta sin x0 = Delta has no positive solution for this x0");
    return 4.0 * eta * s;
  }

  // Bounded form of W_I - W_II without poles at nodes of either state.
  const auto mismatch = [&](double delta) -> double {
    try {
      const LatticeParams p(eta, delta, order);
      const auto right = InGapState::build(p, branch);
      const auto left = InGapState::at_beta(p.negated(), right.beta(), branch);
      const auto l = left.eval(x0), r = right.eval(x0);
      return (l.dpsi * r.psi - l.psi * r.dpsi) /
             std::sqrt((l.psi * l.psi + l.dpsi * l.dpsi) * (r.psi * r.psi + r.dpsi * r.dpsi));
    } catch (const NoRealRoot&) {
      return std::numeric_limits<double>::quiet_NaN();
    } catch (const std::out_of_range&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  constexpr int scan = 400;
  const double hi = 4.0 * eta;
  double prev_d = hi * 1e-6, prev_f = mismatch(prev_d);
  for (int i = 1; i <= scan; ++i) {
    const double d = hi * i / scan;
    const double f = mismatch(d);
    if (std::isfinite(f) && std::isfinite(prev_f) && (f == 0.0 || (f < 0) != (prev_f < 0))) {
      const double root = f == 0.0 ? d : bisect(mismatch, prev_d, d, prev_f);
      const LatticeParams p(eta, root, order);
      const auto right = InGapState::build(p, branch);
      const auto left = InGapState::at_beta(p.negated(), right.beta(), branch);
      try {
        if (std::abs(log_derivative(left, x0) - log_derivative(right, x0)) < 1e-8) return root;
      } catch (const NodeAtX&) {
      }
    }
    prev_d = d;
    prev_f = f;
  }
  throw NoSolutionInRange("no Delta in (0, 4 eta] satisfies the lattice-pair condition");
}

SurfaceSolution solve_finite_sandwich(const LatticeParams& params, int branch, double x0,
                                      double x1, SandwichMode mode,
                                      const SecondSolutionChoice& choice) {
  require_positive_delta(params, "finite-sandwich");
  require_ordered(x0, x1);
  const auto state = InGapState::build(params, branch);
  const double beta = state.beta();
  const double W0 = log_derivative(state, x0), W1 = log_derivative(state, x1);

  SurfaceSolution sol{{Geometry::FiniteSandwich, x0, x1, std::nullopt, std::nullopt, std::nullopt},
                      params,
                      branch,
                      beta,
                      PiecewiseState(Geometry::FiniteSandwich, beta,
                                     {{-kInf, x0, "I", false, constant_potential(0.0),
                                       exponential(1.0, 0.0, x0), std::nullopt},
                                      {x0, kInf, "II", false, constant_potential(0.0),
                                       exponential(1.0, 0.0, x0), std::nullopt}},
                                     {}),
                      std::nullopt,
                      std::nullopt,
                      {}};

  std::optional<SecondSolution> second;
  if (mode.kind != SandwichMode::Kind::PureFirst) {
    const double lo = x0 - 1.0, hi = x1 + 1.0;
    const Convention conv = choice.convention.value_or(
        params.order() == 0 ? Convention::IntegralFromMinusInfinity : Convention::WronskianAnchored);
    if (conv == Convention::IntegralFromMinusInfinity) {
      second = SecondSolution::integral(state, lo, hi);
    } else {
      const double ref = choice.x_ref.value_or(x0);
      second = SecondSolution::anchored(state, ref, std::min(lo, ref), std::max(hi, ref));
      sol.x_ref = ref;
    }
    sol.convention = conv;
    if (mode.kind == SandwichMode::Kind::GivenR && conv != Convention::IntegralFromMinusInfinity)
      sol.warnings.push_back(
          "BasisConventionMismatch: R depends on the normalization of the second solution; "
          "values differ from the integral-from-minus-infinity convention");
  }

  double q0 = 0.0, q1 = 0.0;
  Ratio R = Ratio::finite(0.0);
  const auto partner_terms = [&](double x) {
    const auto s = state.eval(x);
    const auto t = second->eval(x);
    return std::pair{t.dpsi / s.psi, t.psi / s.psi};  // K, F
  };
  const auto far_side = [&](Ratio r) {
    if (r.is_infinite()) {
      const auto t = second->eval(x1);
      return -t.dpsi / t.psi;
    }
    if (r.value == 0.0) return -W1;
    const auto [K1, F1] = partner_terms(x1);
    return -(W1 + r.value * K1) / (1.0 + r.value * F1);
  };

  switch (mode.kind) {
    case SandwichMode::Kind::PureFirst:
      q0 = W0;
      q1 = -W1;
      break;
    case SandwichMode::Kind::PureSecond: {
      const auto t = second->eval(x0);
      q0 = t.dpsi / t.psi;
      R = Ratio::infinite();
      q1 = far_side(R);
      break;
    }
    case SandwichMode::Kind::GivenR: {
      R = Ratio::finite(mode.value);
      const auto [K0, F0] = partner_terms(x0);
      q0 = (W0 + R.value * K0) / (1.0 + R.value * F0);
      q1 = far_side(R);
      break;
    }
    case SandwichMode::Kind::GivenV0: {
      q0 = sqrt_gap(mode.value, beta);
      const auto [K0, F0] = partner_terms(x0);
      const double den = K0 - q0 * F0;
      R = den == 0.0 ? Ratio::infinite() : Ratio::finite((q0 - W0) / den);
      q1 = far_side(R);
      break;
    }
  }
  if (!(q0 > 0.0) || !(q1 > 0.0))
    throw NoState("finite-sandwich matching needs sqrt(V0 - beta) > 0 and sqrt(V1 - beta) > 0 "
                  "(got " + std::to_string(q0) + ", " + std::to_string(q1) + ")");

  const double V0 = beta + q0 * q0, V1 = beta + q1 * q1;
  sol.spec.V0 = V0;
  sol.spec.V1 = V1;
  sol.spec.R = R;
  sol.state = assemble_finite_sandwich(state, second ? &*second : nullptr, x0, x1, V0, V1, R);
  return sol;
}

SurfaceSolution solve_gap_guide(const LatticeParams& params, int branch, double x0, double x1,
                                std::optional<double> seed_v0) {
  require_positive_delta(params, "gap-guide");
  require_ordered(x0, x1);
  const auto right = InGapState::build(params, branch);
  const auto left = InGapState::at_beta(params.mirrored(), right.beta(), branch);
  const double beta = right.beta();
  const double w_left = log_derivative(left, x0);
  const double w_right = log_derivative(right, x1);
  const double L = x1 - x0;

  // W_III / q = (E - 1)/(E + 1), E = R exp(2 q x1), cross-multiplied and scaled by
  // exp(-q L) so it stays finite and pole-free.
  const auto condition = [&](double V0) {
    const double q = std::sqrt(V0 - beta);
    const double A = (q + w_left) * std::exp(q * L), B = (q - w_left) * std::exp(-q * L);
    return (w_right * (A + B) - q * (A - B)) / (std::abs(A) + std::abs(B) + 1.0);
  };

  const double lo = beta + 1e-9;
  const double hi = beta + 16.0 * params.eta() * params.eta() + 1.0;
  constexpr int scan = 4000;
  std::vector<double> roots;
  double prev_v = lo, prev_f = condition(lo);
  for (int i = 1; i <= scan; ++i) {
    const double v = lo + (hi - lo) * i / scan;
    const double f = condition(v);
    if (f == 0.0) {
      roots.push_back(v);
    } else if ((f < 0) != (prev_f < 0) && prev_f != 0.0) {
      double r = bisect(condition, prev_v, v, prev_f);
      // One secant step on the converged bracket.
      const double h = 1e-7 * std::max(1.0, std::abs(r));
      const double fr = condition(r), fh = condition(r + h);
      if (fh != fr) {
        const double polished = r - fr * h / (fh - fr);
        if (polished > prev_v && polished < v && std::abs(condition(polished)) <= std::abs(fr))
          r = polished;
      }
      roots.push_back(r);
    }
    prev_v = v;
    prev_f = f;
  }
  if (roots.empty())
    throw NoRootInBracket("gap-guide condition has no root for V0 in (" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]",
                          lo, hi);
  double V0 = roots.front();
  if (seed_v0)
    V0 = *std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
      return std::abs(a - *seed_v0) < std::abs(b - *seed_v0);
    });

  const double q = std::sqrt(V0 - beta);
  const double den = q - w_left;
  const Ratio R = den == 0.0 ? Ratio::infinite()
                             : Ratio::finite((q + w_left) / den * std::exp(-2.0 * q * x0));
  return {{Geometry::GapGuide, x0, x1, V0, std::nullopt, R},
          params,
          branch,
          beta,
          assemble_gap_guide(params, branch, x0, x1, V0),
          std::nullopt,
          std::nullopt,
          {}};
}

// ---------------------------------------------------------------- verification

double ProfileReport::max_value_mismatch() const {
  double m = 0.0;
  for (const auto& i : interfaces) m = std::max(m, i.value);
  return m;
}

double ProfileReport::max_derivative_mismatch() const {
  double m = 0.0;
  for (const auto& i : interfaces) m = std::max(m, i.derivative);
  return m;
}

ProfileReport assemble_and_verify(const PiecewiseState& state, const ProfileOptions& opts) {
  ProfileReport rep;
  const auto ifaces = state.interfaces();
  for (double x : linspace(ifaces.front() - opts.padding, ifaces.back() + opts.padding, opts.points)) {
    rep.samples.push_back(state.eval(x));
    rep.potential.push_back(state.potential(x));
  }

  const auto& regions = state.regions();
  const double norm = state.normalization();
  for (std::size_t i = 0; i + 1 < regions.size(); ++i) {
    const double x = regions[i].hi;
    const auto l = regions[i].eval(x), r = regions[i + 1].eval(x);
    rep.interfaces.push_back(
        {x, norm * std::abs(l.psi - r.psi), norm * std::abs(l.dpsi - r.dpsi)});
  }

  // Outer tails: least-squares slope of log|psi| over ten e-foldings for constant
  // regions, whole-period amplitude ratios for lattice regions.
  for (std::size_t idx : {std::size_t{0}, regions.size() - 1}) {
    const auto& reg = regions[idx];
    if (!reg.tail_rate || !(*reg.tail_rate > 0.0)) continue;
    const double dir = idx == 0 ? -1.0 : 1.0;
    const double start = idx == 0 ? reg.hi : reg.lo;
    double fitted = 0.0;
    if (!reg.periodic) {
      const double span = 10.0 / *reg.tail_rate;
      const int n = 50;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (int j = 0; j < n; ++j) {
        const double t = span * j / (n - 1);
        const double y = std::log(std::abs(reg.eval(start + dir * t).psi));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
      }
      fitted = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
      const double x = start + dir * 0.5;
      const int periods = 5;
      const double a = std::abs(reg.eval(x).psi);
      const double b = std::abs(reg.eval(x + dir * 2.0 * kPi * periods).psi);
      fitted = -std::log(b / a) / (2.0 * kPi * periods);
    }
    rep.decay.push_back({reg.label, fitted, *reg.tail_rate});
  }
  return rep;
}

}  // namespace surfstate
