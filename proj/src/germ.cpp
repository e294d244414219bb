#include "tcplan/germ.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace tcplan {

namespace {

using cplx = std::complex<double>;

cplx ipow(cplx z, int k) {
  cplx out(1.0, 0.0);
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

cplx coord(const Vec& x, std::size_t j) {
  const auto re = static_cast<Eigen::Index>(2 * j);
  return {x[re], x[re + 1]};
}

}  // namespace

std::string_view to_string(TriState s) {
  switch (s) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Unknown: return "unknown";
  }
  return "unknown";
}

TriState tristate_from_string(std::string_view s) {
  if (s == "yes") return TriState::Yes;
  if (s == "no") return TriState::No;
  if (s == "unknown") return TriState::Unknown;
  throw Error(ErrorCode::Parse, "flag must be yes, no, or unknown");
}

double Germ::default_eta(double epsilon, int degree, const std::vector<int>& weights) {
  const int wmin = *std::min_element(weights.begin(), weights.end());
  return std::pow(epsilon, static_cast<double>(degree) / wmin) / 10.0;
}

Germ::Germ(std::string name, int complex_vars, std::vector<Monomial> monomials, std::vector<int> weights,
           int degree, double epsilon, std::optional<double> eta, Flags flags, bool allow_large_eta)
    : name_(std::move(name)),
      complex_vars_(complex_vars),
      monomials_(std::move(monomials)),
      weights_(std::move(weights)),
      degree_(degree),
      epsilon_(epsilon),
      eta_(0.0),
      flags_(flags),
      allow_large_eta_(allow_large_eta) {
  if (complex_vars_ < 1) throw Error(ErrorCode::InvalidGerm, "need at least one complex variable");
  if (static_cast<int>(weights_.size()) != complex_vars_) {
    throw Error(ErrorCode::InvalidGerm, "one weight per complex variable");
  }
  if (std::any_of(weights_.begin(), weights_.end(), [](int w) { return w <= 0; })) {
    throw Error(ErrorCode::InvalidGerm, "weights must be positive");
  }
  if (degree_ <= 0) throw Error(ErrorCode::InvalidGerm, "degree must be positive");
  if (monomials_.empty()) throw Error(ErrorCode::InvalidGerm, "germ has no monomials");
  for (const Monomial& mono : monomials_) {
    if (static_cast<int>(mono.exponents.size()) != complex_vars_) {
      throw Error(ErrorCode::InvalidGerm, "exponent vector length must equal complex_vars");
    }
    if (!std::isfinite(mono.coeff.real()) || !std::isfinite(mono.coeff.imag())) {
      throw Error(ErrorCode::InvalidGerm, "non-finite coefficient");
    }
    long long weighted = 0;
    for (int j = 0; j < complex_vars_; ++j) {
      if (mono.exponents[j] < 0) throw Error(ErrorCode::InvalidGerm, "exponents must be non-negative");
      weighted += static_cast<long long>(weights_[j]) * mono.exponents[j];
    }
    if (weighted != degree_) {
      throw Error(ErrorCode::InvalidGerm, "monomial has weighted degree " + std::to_string(weighted) +
                                              ", expected " + std::to_string(degree_));
    }
  }
  if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_)) {
    throw Error(ErrorCode::InvalidGerm, "epsilon must be positive");
  }
  const double bound = default_eta(epsilon_, degree_, weights_);
  eta_ = eta.value_or(bound);
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) throw Error(ErrorCode::InvalidGerm, "eta must be positive");
  if (eta_ > bound && !allow_large_eta_) {
    throw Error(ErrorCode::InvalidGerm, "eta exceeds epsilon^(d/min w)/10 = " + std::to_string(bound));
  }
}

Germ Germ::from_json(const nlohmann::json& j) {
  try {
    std::vector<Monomial> monos;
    for (const auto& m : j.at("monomials")) {
      const auto c = m.at("coeff").get<std::vector<double>>();
      if (c.size() != 2) throw Error(ErrorCode::Parse, "coeff must be [re, im]");
      monos.push_back({{c[0], c[1]}, m.at("exponents").get<std::vector<int>>()});
    }
    Flags flags;
    if (j.contains("flags")) {
      const auto& f = j.at("flags");
      if (f.contains("link_nonempty")) flags.link_nonempty = tristate_from_string(f.at("link_nonempty").get<std::string>());
      if (f.contains("pi_trivial")) flags.pi_trivial = tristate_from_string(f.at("pi_trivial").get<std::string>());
    }
    std::optional<double> eta;
    if (j.contains("eta") && !j.at("eta").is_null()) eta = j.at("eta").get<double>();
    const double epsilon = j.contains("epsilon") ? j.at("epsilon").get<double>() : 0.5;
    return Germ(j.at("name").get<std::string>(), j.at("complex_vars").get<int>(), std::move(monos),
                j.at("weights").get<std::vector<int>>(), j.at("degree").get<int>(), epsilon, eta, flags,
                j.value("allow_large_eta", false));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

Germ Germ::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open germ file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json Germ::to_json() const {
  nlohmann::json monos = nlohmann::json::array();
  for (const Monomial& m : monomials_) {
    monos.push_back({{"coeff", {m.coeff.real(), m.coeff.imag()}}, {"exponents", m.exponents}});
  }
  nlohmann::json j{{"name", name_},
                   {"complex_vars", complex_vars_},
                   {"monomials", monos},
                   {"weights", weights_},
                   {"degree", degree_},
                   {"epsilon", epsilon_},
                   {"eta", eta_},
                   {"flags",
                    {{"link_nonempty", std::string(to_string(flags_.link_nonempty))},
                     {"pi_trivial", std::string(to_string(flags_.pi_trivial))}}}};
  if (allow_large_eta_) j["allow_large_eta"] = true;
  return j;
}

std::complex<double> Germ::eval_complex(const Vec& x) const {
  if (x.size() != real_dim()) throw Error(ErrorCode::DimensionMismatch, "germ argument has wrong dimension");
  cplx sum(0.0, 0.0);
  for (const Monomial& m : monomials_) {
    cplx term = m.coeff;
    for (int j = 0; j < complex_vars_; ++j) term *= ipow(coord(x, j), m.exponents[j]);
    sum += term;
  }
  return sum;
}

Vec Germ::eval(const Vec& x) const {
  const cplx v = eval_complex(x);
  Vec out(2);
  out << v.real(), v.imag();
  return out;
}

Mat Germ::jacobian(const Vec& x) const {
  if (x.size() != real_dim()) throw Error(ErrorCode::DimensionMismatch, "germ argument has wrong dimension");
  Mat jac = Mat::Zero(2, real_dim());
  for (int k = 0; k < complex_vars_; ++k) {
    // Holomorphic partial df/dz_k, realified through the Cauchy-Riemann equations.
    cplx g(0.0, 0.0);
    for (const Monomial& m : monomials_) {
      if (m.exponents[k] == 0) continue;
      cplx term = m.coeff * static_cast<double>(m.exponents[k]);
      for (int j = 0; j < complex_vars_; ++j) {
        term *= ipow(coord(x, j), j == k ? m.exponents[j] - 1 : m.exponents[j]);
      }
      g += term;
    }
    jac(0, 2 * k) = g.real();
    jac(0, 2 * k + 1) = -g.imag();
    jac(1, 2 * k) = g.imag();
    jac(1, 2 * k + 1) = g.real();
  }
  return jac;
}

Vec Germ::act(const Vec& x, double theta) const {
  if (x.size() != real_dim()) throw Error(ErrorCode::DimensionMismatch, "germ argument has wrong dimension");
  Vec out(x.size());
  for (int j = 0; j < complex_vars_; ++j) {
    const cplx z = coord(x, j) * std::polar(1.0, weights_[j] * theta);
    out[2 * j] = z.real();
    out[2 * j + 1] = z.imag();
  }
  return out;
}

Germ power_germ(int d, double epsilon, std::optional<double> eta) {
  Germ::Flags flags;
  flags.link_nonempty = TriState::No;
  flags.pi_trivial = TriState::Unknown;
  return Germ("z^" + std::to_string(d), 1, {{{1.0, 0.0}, {d}}}, {1}, d, epsilon, eta, flags);
}

Germ brieskorn_germ(int a, int b, double epsilon, std::optional<double> eta) {
  const int g = std::gcd(a, b);
  Germ::Flags flags;
  flags.link_nonempty = TriState::Yes;
  return Germ("z^" + std::to_string(a) + "+w^" + std::to_string(b), 2,
              {{{1.0, 0.0}, {a, 0}}, {{1.0, 0.0}, {0, b}}}, {b / g, a / g}, a * b / g, epsilon, eta, flags);
}

}  // namespace tcplan
