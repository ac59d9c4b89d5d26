#pragma once

#include <stdexcept>
#include <string>

namespace fractower {

enum class Direction { forward, ancient };

// Validation failures (bad inputs, violated preconditions).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A lemma's hypothesis does not hold for the requested case parameters.
struct HypothesisViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures detected at run time.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrthogonalityViolated : NumericalError {
  using NumericalError::NumericalError;
};
struct SingularSystem : NumericalError {
  using NumericalError::NumericalError;
};
struct NoPositiveEigenvalue : NumericalError {
  using NumericalError::NumericalError;
};
struct IntegralDivergence : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateFit : NumericalError {
  using NumericalError::NumericalError;
};
struct DecayViolated : NumericalError {
  using NumericalError::NumericalError;
};
struct StepUnderflow : NumericalError {
  using NumericalError::NumericalError;
};
struct FitFailed : NumericalError {
  using NumericalError::NumericalError;
};
struct TailUnclosable : NumericalError {
  using NumericalError::NumericalError;
};

// Small-exponent configuration. alpha_w and a_inner default to values derived
// from s and n when left NaN.
struct SmallExponents {
  double sigma = 0.05;
  double delta = 0.01;
  double epsilon = 0.02;
  double alpha_w = -1.0;  // <0 means "use s/2"
  double a_inner = -1.0;  // <0 means "use midpoint of (2s, n-2s)"
  double nu = 1.0;
};

struct ModelParams {
  int n = 0;
  double s = 0.0;
  double p = 0.0;  // (n+2s)/(n-2s)
  int k = 1;
  double t0 = 1.0e3;
  Direction direction = Direction::forward;

  double sigma = 0.05;
  double delta = 0.01;
  double epsilon = 0.02;
  double alpha_w = 0.0;
  double a_inner = 0.0;
  double nu = 1.0;

  double n2s() const { return n - 2.0 * s; }      // n - 2s
  double half_n2s() const { return 0.5 * n2s(); }  // (n - 2s)/2
};

// Validates the tower hypotheses (n > 6s for k >= 2, n > 2s always, t0 > 1,
// small-exponent inequalities) and fills p = (n+2s)/(n-2s).
ModelParams make_params(int n, double s, int k, double t0,
                        Direction direction = Direction::forward,
                        SmallExponents smalls = {});

struct QuadratureConfig {
  int n_radial = 2048;      // radial sample count for grids
  int n_angular = 48;       // controls polar-angle node budget per shell
  double r_trunc = 1.0e4;   // outer truncation radius for grids/quadrature
  double pv_split = 0.25;   // offset fraction below which the symmetrized
                            // second-difference form handles the singularity
  double time_trunc_factor = 64.0;  // improper time integrals cut at factor*t
  double tol = 2.5e-4;              // relative tolerance target

  // One quadrature refinement step: denser panels and nodes everywhere.
  QuadratureConfig refined() const {
    QuadratureConfig c = *this;
    c.n_radial *= 2;
    c.n_angular *= 2;
    return c;
  }
};

void validate(const QuadratureConfig& cfg);

}  // namespace fractower
