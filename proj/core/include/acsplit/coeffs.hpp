#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace acsplit {

/// Substep fractions of a two-operator splitting
///
///   S = B^{b_p dt} A^{a_p dt} ... B^{b_1 dt} A^{a_1 dt},
///
/// i.e. A acts first within each pair. `a` and `b` always hold p entries;
/// schemes that end on an A-substep carry b_p = 0.
struct SplitCoefficients {
  std::vector<double> a;
  std::vector<double> b;
  int claimed_order = 1;
  std::string label;

  std::size_t stages() const noexcept { return a.size(); }
  double min_coefficient() const;
  double max_coefficient() const;
  /// max_j max(|a_j|, |b_j|).
  double max_abs_coefficient() const;
};

/// Residuals of the order conditions, in this order:
///   [0] sum a - 1                        [1] sum b - 1
///   [2] sum_{j>=2} a_j B_{j-1} - 1/2     [3] sum_j b_j A_j - 1/2
///   [4] sum_{j>=2} a_j B_{j-1}^2 - 1/3   [5] sum_j b_j A_j^2 - 1/3
/// with partial sums B_{j-1} = b_1 + ... + b_{j-1} and A_j = a_1 + ... + a_j.
using OrderResiduals = std::array<double, 6>;

OrderResiduals order_residuals(const SplitCoefficients& c);

/// Largest |residual| among the conditions needed for `order` (1: [0..1],
/// 2: [0..3], >= 3: all six).
double max_residual(const OrderResiduals& r, int order);

/// Throws InvalidArgument if `c` is malformed (size mismatch, empty,
/// non-finite) or misses the conditions its claimed order requires. The
/// tolerance is 1e-12 scaled by (1 + max|c|)^3 to absorb rounding in the
/// cubic residual terms for large coefficients.
void validate(const SplitCoefficients& c);

/// Second-order family with b_1 = omega:
/// a = (1 - 1/(2 omega), 1/(2 omega)), b = (omega, 1 - omega).
/// omega = 1 is A^{dt/2} B^{dt} A^{dt/2}. Throws InvalidOmega for omega = 0.
SplitCoefficients second_order_family(double omega);

enum class Branch { Positive, Negative };

const char* to_string(Branch branch) noexcept;

/// D(omega) = (omega-1)^2 (4 omega-1)^2 + 12 (4 omega-1)(omega-1/3)^2.
double discriminant(double omega) noexcept;

/// The real root of D(omega) / (4 omega - 1), approximately -1.217.
double omega_star();

/// Exclusion radius around the singular points 1/3 (both branches) and
/// 1 (positive branch).
inline constexpr double kSingularRadius = 1e-6;

struct BranchSolution {
  double omega = 0.0;
  Branch branch = Branch::Positive;
  SplitCoefficients coefficients;
  double discriminant = 0.0;
};

/// Closed-form third-order coefficients with b_3 = omega on one branch.
///
/// Real solutions exist for omega > 1/4 and omega <= omega_star(). Throws
/// InvalidOmega for D(omega) < 0, omega = 1/4, omega within kSingularRadius
/// of 1/3, and (positive branch) of 1. On the negative branch omega = 1 is a
/// removable singularity and returns the limit scheme
/// (7/24, 2/3, 3/4, -2/3, -1/24, 1) in (a1, b1, a2, b2, a3, b3) order.
BranchSolution third_order_family(double omega, Branch branch);

/// The three third-order schemes sitting at local minima of
/// max(|a_j|, |b_j|) inside the windows where all coefficients lie in [-1, 1]:
///   X: positive branch, a_1 = b_2,   omega in [0.26376, 0.29167]
///   Y: negative branch, b_1 = a_3,   omega in [0.26376, 0.27362]
///   Z: negative branch, a_2 = b_3,   omega in [1/2, 1]
/// Each omega is found by bisection to |d omega| < 1e-12 and checked to be a
/// local minimum at omega +- 1e-3. Throws ConvergenceFailure otherwise.
struct SpecialOmegas {
  BranchSolution x;
  BranchSolution y;
  BranchSolution z;
};

const SpecialOmegas& special_omegas();

/// Flattens T^{w_m dt} ... T^{w_1 dt} with T^{dt} = A^{dt/2} B^{dt} A^{dt/2},
/// merging neighbouring A-substeps, into p = m + 1 stages with b_p = 0.
SplitCoefficients compose_symmetric(std::span<const double> weights, int claimed_order,
                                    std::string label);

/// 1 / (2 - 2^{1/3}).
double omega_u() noexcept;
/// 1 / (4 - 4^{1/3}).
double omega_v() noexcept;

/// Fourth order, 7 evaluations: T^{w} T^{1-2w} T^{w} with w = omega_u().
SplitCoefficients fourth_order_u();
/// Fourth order, 11 evaluations: T^{w} T^{w} T^{1-4w} T^{w} T^{w} with w = omega_v().
SplitCoefficients fourth_order_v();

/// Identifies a scheme: S1, S2(omega), S3X, S3Y, S3Z, S3(omega,+/-), S4U, S4V.
struct SchemeId {
  enum class Kind { S1, S2, S3X, S3Y, S3Z, S3, S4U, S4V };

  Kind kind = Kind::S1;
  double omega = 1.0;
  Branch branch = Branch::Positive;

  /// Accepts "S1", "S2" (omega = 1), "S2(0.7)", "S3X", "S3Y", "S3Z",
  /// "S3(0.3,+)", "S3(0.3,-)", "S4U", "S4V". Throws InvalidArgument.
  static SchemeId parse(const std::string& text);

  std::string to_string() const;
  int order() const noexcept;
};

SplitCoefficients named_scheme(const SchemeId& id);

}  // namespace acsplit
