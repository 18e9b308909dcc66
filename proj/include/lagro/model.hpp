#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lagro/lp.hpp"
#include "lagro/matrix.hpp"

namespace lagro {

/// A value in R ∪ {-inf, +inf}. Minimisation over an empty set is +inf.
class ExtValue {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtValue() : ExtValue(Kind::PosInf) {}
  ExtValue(Scalar v) : kind_(Kind::Finite), value_(std::move(v)) {}  // NOLINT: implicit by design
  static ExtValue pos_inf() { return ExtValue(Kind::PosInf); }
  static ExtValue neg_inf() { return ExtValue(Kind::NegInf); }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
  [[nodiscard]] bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  [[nodiscard]] bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  /// Throws DomainError when infinite.
  [[nodiscard]] const Scalar& value() const;
  [[nodiscard]] std::string str() const;

  friend bool operator==(const ExtValue& a, const ExtValue& b);
  friend std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b);

 private:
  explicit ExtValue(Kind k) : kind_(k) {}
  Kind kind_;
  Scalar value_;
};

/// Optional boxes x^l <= x <= x^u, y^l <= y <= y^u (y ordered y_c then y_d).
struct BoxBounds {
  Vec x_lower, x_upper, y_lower, y_upper;
  friend bool operator==(const BoxBounds&, const BoxBounds&) = default;
};

/// Data shared by both problem families:
///   c(xi) = c0 + C xi,  d(xi) = d0 + D xi with D = [Dc; Dd],
///   constraint rows T x + Wc y_c + Wd y_d >= h0 (+ H xi for the general family),
///   y_c in [0, yc_upper] (nullopt entries are +inf), y_d integer in [yd_lower, yd_upper].
struct ProblemData {
  std::size_t n1 = 0, nc2 = 0, nd2 = 0, np = 0, m = 0;
  Vec c0;
  Mat C;
  Vec d0;
  Mat Dc, Dd;
  Mat T, Wc, Wd;
  Vec h0;
  std::vector<Vec> X;
  std::vector<Vec> Xi;
  /// Set when Xi came from {xi binary : sum xi <= budget}; kept for serialisation.
  std::optional<unsigned> xi_budget;
  std::vector<Bound> yc_upper;
  Vec yd_lower, yd_upper;
  std::optional<BoxBounds> bounds;

  [[nodiscard]] std::size_t n2() const { return nc2 + nd2; }
  [[nodiscard]] Vec c(const Vec& xi) const;
  [[nodiscard]] Vec dc(const Vec& xi) const;
  [[nodiscard]] Vec dd(const Vec& xi) const;
  /// W = [Wc Wd].
  [[nodiscard]] Mat W() const;
  /// Throws InputError describing the first violated invariant.
  void validate_common() const;
  /// Size of the integer box Y_d (1 when nd2 = 0).
  [[nodiscard]] std::size_t yd_count() const;

  friend bool operator==(const ProblemData&, const ProblemData&) = default;
};

struct GeneralInstance : ProblemData {
  Mat H;
  void validate() const;
  friend bool operator==(const GeneralInstance&, const GeneralInstance&) = default;
};

struct IndicatorInstance : ProblemData {
  /// I0[j], I1[j]: 0-based row indices switched to equality when xi_j = 0 (resp. 1).
  std::vector<std::vector<std::size_t>> I0, I1;
  void validate() const;
  friend bool operator==(const IndicatorInstance&, const IndicatorInstance&) = default;
};

using Instance = std::variant<GeneralInstance, IndicatorInstance>;

/// Largest number of explicit points any enumerated set may hold.
inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 16;

/// All binary vectors of length np with at most `budget` ones, lexicographic.
std::vector<Vec> expand_budget(std::size_t np, unsigned budget);

/// Every point of the integer box Y_d, lexicographic. Throws LimitExceeded
/// above kEnumerationCap.
std::vector<Vec> enumerate_yd(const ProblemData& data);

/// Returns a copy where every finite yc_upper entry is turned into an extra
/// constraint row -y_cj >= -u_j (zero in T, Wd and H) and all yc_upper become
/// +inf. The second-stage feasible sets are unchanged.
GeneralInstance fold_yc_bounds(const GeneralInstance& inst);
IndicatorInstance fold_yc_bounds(const IndicatorInstance& inst);

/// sum_j (xi_j = 0 ? z_j : 1 - z_j).
Scalar penalty_phi(const Vec& z, const Vec& xi);

/// sum_j sum_{i in I1_j} xi_j g_i(x,y) + sum_j sum_{i in I0_j} (1 - xi_j) g_i(x,y)
/// with g(x,y) = T x + W y - h0.
Scalar penalty_phi_indicator(const IndicatorInstance& inst, const Vec& x, const Vec& y, const Vec& xi);

/// Optimal value with an optimal point when one exists.
struct RecourseSolution {
  ExtValue value;
  Vec y;      // (y_c, y_d)
  Vec z;      // copy variables, empty when absent
  Vec sigma;  // slacks, empty when absent
};

/// Q(x, xi): MILP over y in Y.
RecourseSolution solve_Q(const GeneralInstance& inst, const Vec& x, const Vec& xi);
ExtValue eval_Q(const GeneralInstance& inst, const Vec& x, const Vec& xi);
/// Q(x, xi; y_d): LP over y_c with y_d fixed.
ExtValue eval_Q_restricted(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Vec& yd);

/// L(x, xi, lambda) = min c(xi)'x + d(xi)'y + lambda phi(z, xi)
///   s.t. T x + W y >= h0 + H z, y in Y, z in [0,1]^np.
/// Throws DomainError when lambda < 0.
RecourseSolution solve_L(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda);
ExtValue eval_L(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda);
ExtValue eval_L_restricted(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda,
                           const Vec& yd);

/// min e'sigma + phi(z, xi) s.t. T x + W y + sigma >= h0 + H z, y in Y,
/// z in [0,1]^np, sigma >= 0. Always finite; zero iff Q(x, xi) < +inf.
RecourseSolution solve_slack(const GeneralInstance& inst, const Vec& x, const Vec& xi);

/// Q_I(x, xi): indicator rows resolved to equalities for this xi.
RecourseSolution solve_QI(const IndicatorInstance& inst, const Vec& x, const Vec& xi);
ExtValue eval_QI(const IndicatorInstance& inst, const Vec& x, const Vec& xi);
/// L_I(x, xi, lambda) = min c(xi)'x + d(xi)'y + lambda phi_I(x, y, xi) s.t. g(x,y) >= 0, y in Y.
RecourseSolution solve_LI(const IndicatorInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda);
ExtValue eval_LI(const IndicatorInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda);

}  // namespace lagro
