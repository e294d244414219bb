#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tcplan/geometry.hpp"

namespace tcplan {

enum class TriState { Yes, No, Unknown };

std::string_view to_string(TriState s);
TriState tristate_from_string(std::string_view s);

struct Monomial {
  std::complex<double> coeff;
  std::vector<int> exponents;
};

struct GermFlags {
  TriState link_nonempty = TriState::Unknown;
  TriState pi_trivial = TriState::Unknown;
};

/// Weighted-homogeneous complex polynomial germ f: (C^k, 0) -> (C, 0) with tube
/// parameters. Points of C^k are stored realified as (Re z1, Im z1, Re z2, ...).
///
/// Every monomial satisfies sum_j w_j m_j = degree, so f(rho_theta z) = e^{i d theta} f(z)
/// for the circle action rho_theta(z)_j = e^{i w_j theta} z_j.
class Germ {
 public:
  using Flags = GermFlags;

  /// Validates the integer data exactly. `eta` defaults to epsilon^{d / min w} / 10, and an
  /// explicit eta above that bound is rejected unless `allow_large_eta` is set.
  Germ(std::string name, int complex_vars, std::vector<Monomial> monomials, std::vector<int> weights,
       int degree, double epsilon, std::optional<double> eta = std::nullopt, Flags flags = Flags{},
       bool allow_large_eta = false);

  static Germ from_json(const nlohmann::json& j);
  static Germ load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::string& name() const noexcept { return name_; }
  int complex_vars() const noexcept { return complex_vars_; }
  Eigen::Index real_dim() const noexcept { return 2 * complex_vars_; }
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
  const std::vector<int>& weights() const noexcept { return weights_; }
  int degree() const noexcept { return degree_; }
  double epsilon() const noexcept { return epsilon_; }
  double eta() const noexcept { return eta_; }
  const Flags& flags() const noexcept { return flags_; }
  bool allow_large_eta() const noexcept { return allow_large_eta_; }

  /// epsilon^{d / min_j w_j} / 10
  static double default_eta(double epsilon, int degree, const std::vector<int>& weights);

  std::complex<double> eval_complex(const Vec& x) const;
  /// f(x) as a point of R^2.
  Vec eval(const Vec& x) const;
  /// Realified 2 x 2k Jacobian.
  Mat jacobian(const Vec& x) const;
  /// rho_theta applied to a realified point.
  Vec act(const Vec& x, double theta) const;

 private:
  std::string name_;
  int complex_vars_;
  std::vector<Monomial> monomials_;
  std::vector<int> weights_;
  int degree_;
  double epsilon_;
  double eta_;
  Flags flags_;
  bool allow_large_eta_;
};

/// z1^d on C (weights (1)).
Germ power_germ(int d, double epsilon = 0.5, std::optional<double> eta = 1e-3);
/// Brieskorn-Pham z^a + w^b on C^2 (weights (b, a) / gcd, degree ab / gcd).
Germ brieskorn_germ(int a, int b, double epsilon = 0.5, std::optional<double> eta = 1e-3);

}  // namespace tcplan
