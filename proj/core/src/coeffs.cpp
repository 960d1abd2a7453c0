#include "acsplit/coeffs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "acsplit/errors.hpp"

namespace acsplit {

double SplitCoefficients::min_coefficient() const {
  return std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
}

double SplitCoefficients::max_coefficient() const {
  return std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
}

double SplitCoefficients::max_abs_coefficient() const {
  return std::max(std::abs(min_coefficient()), std::abs(max_coefficient()));
}

OrderResiduals order_residuals(const SplitCoefficients& c) {
  double sum_a = 0.0;
  double sum_b = 0.0;
  double b_before = 0.0;  // B_{j-1}
  double a_upto = 0.0;    // A_j
  double second_a = 0.0, second_b = 0.0, third_a = 0.0, third_b = 0.0;
  for (std::size_t j = 0; j < c.a.size(); ++j) {
    a_upto += c.a[j];
    // The j = 1 term of the a-sums vanishes since B_0 = 0.
    second_a += c.a[j] * b_before;
    third_a += c.a[j] * b_before * b_before;
    second_b += c.b[j] * a_upto;
    third_b += c.b[j] * a_upto * a_upto;
    sum_a += c.a[j];
    sum_b += c.b[j];
    b_before += c.b[j];
  }
  return {sum_a - 1.0,        sum_b - 1.0,        second_a - 0.5,
          second_b - 0.5,     third_a - 1.0 / 3.0, third_b - 1.0 / 3.0};
}

double max_residual(const OrderResiduals& r, int order) {
  const std::size_t n = order <= 1 ? 2 : order == 2 ? 4 : 6;
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(r[i]));
  return m;
}

void validate(const SplitCoefficients& c) {
  if (c.a.empty() || c.a.size() != c.b.size()) {
    throw InvalidArgument("split coefficients need p >= 1 entries in both a and b");
  }
  if (c.claimed_order < 1 || c.claimed_order > 4) {
    throw InvalidArgument("claimed order must be between 1 and 4");
  }
  for (std::size_t j = 0; j < c.a.size(); ++j) {
    if (!std::isfinite(c.a[j]) || !std::isfinite(c.b[j])) {
      throw InvalidArgument("split coefficients must be finite");
    }
  }
  const double scale = 1.0 + c.max_abs_coefficient();
  const double tol = 1e-12 * scale * scale * scale;
  const double worst = max_residual(order_residuals(c), c.claimed_order);
  if (worst > tol) {
    std::ostringstream os;
    os << "scheme '" << c.label << "' misses its order-" << c.claimed_order
       << " conditions (max residual " << worst << ")";
    throw InvalidArgument(os.str());
  }
}

SplitCoefficients second_order_family(double omega) {
  if (omega == 0.0 || !std::isfinite(omega)) throw InvalidOmega(omega, "second-order family needs omega != 0");
  const double half_inv = 1.0 / (2.0 * omega);
  std::ostringstream label;
  label << "S2(" << omega << ")";
  return SplitCoefficients{{1.0 - half_inv, half_inv}, {omega, 1.0 - omega}, 2, label.str()};
}

const char* to_string(Branch branch) noexcept { return branch == Branch::Positive ? "+" : "-"; }

double discriminant(double omega) noexcept {
  const double d = 4.0 * omega - 1.0;
  const double u = omega - 1.0;
  const double v = omega - 1.0 / 3.0;
  return u * u * d * d + 12.0 * d * v * v;
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "root not bracketed on [" << lo << ", " << hi << "]";
    throw ConvergenceFailure(os.str());
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string branch_label(double omega, Branch branch) {
  std::ostringstream os;
  os << "S3(" << omega << "," << to_string(branch) << ")";
  return os.str();
}

}  // namespace

double omega_star() {
  // D / (4 omega - 1) = (12 omega^3 + 9 omega^2 - 6 omega + 1) / 3.
  static const double root = bisect(
      [](double w) { return ((12.0 * w + 9.0) * w - 6.0) * w + 1.0; }, -2.0, -1.0, 1e-15);
  return root;
}

BranchSolution third_order_family(double omega, Branch branch) {
  if (!std::isfinite(omega)) throw InvalidOmega(omega, "omega must be finite");
  if (omega == 0.25) throw InvalidOmega(omega, "1/4: a_2 = 0 and b_1 diverges");
  if (std::abs(omega - 1.0 / 3.0) < kSingularRadius) {
    throw InvalidOmega(omega, "1/3: a_2 = (4w-1)/(2(3w-1)) is singular");
  }
  const double disc = discriminant(omega);
  if (disc < 0.0) throw InvalidOmega(omega, "D(omega) < 0: no real solution");
  if (branch == Branch::Positive && std::abs(omega - 1.0) < kSingularRadius) {
    throw InvalidOmega(omega, "1: positive branch a_3 diverges");
  }

  BranchSolution out;
  out.omega = omega;
  out.branch = branch;
  out.discriminant = disc;
  auto& c = out.coefficients;
  c.claimed_order = 3;
  c.label = branch_label(omega, branch);

  if (branch == Branch::Negative && omega == 1.0) {
    c.a = {7.0 / 24.0, 3.0 / 4.0, -1.0 / 24.0};
    c.b = {2.0 / 3.0, -2.0 / 3.0, 1.0};
    return out;
  }

  const double root = std::sqrt(disc);
  const double d = 4.0 * omega - 1.0;
  const double n = (4.0 * omega + 1.0) * omega - 1.0;
  const double sign = branch == Branch::Positive ? -1.0 : 1.0;
  const double b1 = 0.5 * (1.0 - omega) + sign * root / (2.0 * d);
  const double a2 = d / (2.0 * (3.0 * omega - 1.0));
  // a_3 = (1/2 - b_1 a_2) / (1 - omega), rewritten with N^2 - D = (4/3)(w-1)(3w-1)
  // so that the negative branch has no 0/0 at omega = 1.
  const double a3 = branch == Branch::Positive
                        ? (n + root) / (4.0 * (3.0 * omega - 1.0) * (1.0 - omega))
                        : -1.0 / (3.0 * (n + root));
  c.a = {1.0 - a2 - a3, a2, a3};
  c.b = {b1, 1.0 - b1 - omega, omega};
  return out;
}

namespace {

BranchSolution locate(Branch branch, double lo, double hi,
                      const std::function<double(const SplitCoefficients&)>& condition,
                      const char* name) {
  auto f = [&](double w) { return condition(third_order_family(w, branch).coefficients); };
  const double omega = bisect(f, lo, hi, 1e-12);
  BranchSolution sol = third_order_family(omega, branch);

  constexpr double kProbe = 1e-3;
  const double centre = sol.coefficients.max_abs_coefficient();
  for (double w : {omega - kProbe, omega + kProbe}) {
    if (third_order_family(w, branch).coefficients.max_abs_coefficient() < centre) {
      throw ConvergenceFailure(std::string("omega_") + name + " is not a local minimum of max|coefficient|");
    }
  }
  sol.coefficients.label = std::string("S3") + name;
  return sol;
}

SpecialOmegas compute_special_omegas() {
  SpecialOmegas s;
  s.x = locate(Branch::Positive, 0.26376, 0.29167,
               [](const SplitCoefficients& c) { return c.a[0] - c.b[1]; }, "X");
  s.y = locate(Branch::Negative, 0.26376, 0.27362,
               [](const SplitCoefficients& c) { return c.b[0] - c.a[2]; }, "Y");
  s.z = locate(Branch::Negative, 0.5, 1.0,
               [](const SplitCoefficients& c) { return c.a[1] - c.b[2]; }, "Z");
  return s;
}

}  // namespace

const SpecialOmegas& special_omegas() {
  static const SpecialOmegas cached = compute_special_omegas();
  return cached;
}

SplitCoefficients compose_symmetric(std::span<const double> weights, int claimed_order,
                                    std::string label) {
  if (weights.empty()) throw InvalidArgument("composition needs at least one weight");
  SplitCoefficients c;
  c.claimed_order = claimed_order;
  c.label = std::move(label);
  c.a.push_back(0.5 * weights[0]);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    c.b.push_back(weights[i]);
    const double next = i + 1 < weights.size() ? weights[i + 1] : 0.0;
    c.a.push_back(0.5 * (weights[i] + next));
  }
  c.b.push_back(0.0);
  return c;
}

double omega_u() noexcept { return 1.0 / (2.0 - std::cbrt(2.0)); }

double omega_v() noexcept { return 1.0 / (4.0 - std::cbrt(4.0)); }

SplitCoefficients fourth_order_u() {
  const double w = omega_u();
  return SplitCoefficients{{w / 2.0, (1.0 - w) / 2.0, (1.0 - w) / 2.0, w / 2.0},
                           {w, 1.0 - 2.0 * w, w, 0.0},
                           4,
                           "S4U"};
}

SplitCoefficients fourth_order_v() {
  const double w = omega_v();
  const double mid = (1.0 - 3.0 * w) / 2.0;
  return SplitCoefficients{{w / 2.0, w, mid, mid, w, w / 2.0},
                           {w, w, 1.0 - 4.0 * w, w, w, 0.0},
                           4,
                           "S4V"};
}

namespace {

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

double parse_number(const std::string& text, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidArgument("cannot parse omega in scheme id '" + whole + "'");
  }
  return v;
}

}  // namespace

SchemeId SchemeId::parse(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  const std::string head = upper(s.substr(0, s.find('(')));
  const bool has_args = s.find('(') != std::string::npos;
  std::string args;
  if (has_args) {
    if (s.back() != ')') throw InvalidArgument("unbalanced parentheses in scheme id '" + text + "'");
    args = s.substr(s.find('(') + 1, s.size() - s.find('(') - 2);
  }

  SchemeId id;
  auto no_args = [&](Kind kind) {
    if (has_args) throw InvalidArgument("scheme '" + head + "' takes no parameters");
    id.kind = kind;
    return id;
  };
  if (head == "S1") return no_args(Kind::S1);
  if (head == "S3X") return no_args(Kind::S3X);
  if (head == "S3Y") return no_args(Kind::S3Y);
  if (head == "S3Z") return no_args(Kind::S3Z);
  if (head == "S4U") return no_args(Kind::S4U);
  if (head == "S4V") return no_args(Kind::S4V);
  if (head == "S2") {
    id.kind = Kind::S2;
    id.omega = has_args ? parse_number(args, text) : 1.0;
    return id;
  }
  if (head == "S3") {
    const auto comma = args.find(',');
    if (!has_args || comma == std::string::npos) {
      throw InvalidArgument("S3 needs '(omega,+)' or '(omega,-)': '" + text + "'");
    }
    const std::string sign = args.substr(comma + 1);
    if (sign != "+" && sign != "-") throw InvalidArgument("S3 branch must be + or -: '" + text + "'");
    id.kind = Kind::S3;
    id.omega = parse_number(args.substr(0, comma), text);
    id.branch = sign == "+" ? Branch::Positive : Branch::Negative;
    return id;
  }
  throw InvalidArgument("unknown scheme id '" + text + "'");
}

std::string SchemeId::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::S1: return "S1";
    case Kind::S2:
      os << "S2(" << omega << ")";
      return os.str();
    case Kind::S3X: return "S3X";
    case Kind::S3Y: return "S3Y";
    case Kind::S3Z: return "S3Z";
    case Kind::S3:
      os << "S3(" << omega << "," << acsplit::to_string(branch) << ")";
      return os.str();
    case Kind::S4U: return "S4U";
    case Kind::S4V: return "S4V";
  }
  return "?";
}

int SchemeId::order() const noexcept {
  switch (kind) {
    case Kind::S1: return 1;
    case Kind::S2: return 2;
    case Kind::S3X:
    case Kind::S3Y:
    case Kind::S3Z:
    case Kind::S3: return 3;
    case Kind::S4U:
    case Kind::S4V: return 4;
  }
  return 0;
}

SplitCoefficients named_scheme(const SchemeId& id) {
  SplitCoefficients c;
  switch (id.kind) {
    case SchemeId::Kind::S1: c = SplitCoefficients{{1.0}, {1.0}, 1, "S1"}; break;
    case SchemeId::Kind::S2: c = second_order_family(id.omega); break;
    case SchemeId::Kind::S3X: c = special_omegas().x.coefficients; break;
    case SchemeId::Kind::S3Y: c = special_omegas().y.coefficients; break;
    case SchemeId::Kind::S3Z: c = special_omegas().z.coefficients; break;
    case SchemeId::Kind::S3: c = third_order_family(id.omega, id.branch).coefficients; break;
    case SchemeId::Kind::S4U: c = fourth_order_u(); break;
    case SchemeId::Kind::S4V: c = fourth_order_v(); break;
  }
  c.label = id.to_string();
  return c;
}

}  // namespace acsplit
