#include "gap/operators.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gap {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double require_angle(std::optional<double> theta, const char* what,
                     const Method& m) {
  if (!theta) {
    throw std::invalid_argument(m.name() + " needs " + what);
  }
  if (!(*theta > 0.0 && *theta <= std::numbers::pi / 2)) {
    throw std::invalid_argument(std::string(what) + " must lie in (0, pi/2]");
  }
  return *theta;
}

}  // namespace

std::string_view to_string(AssumptionCase c) {
  switch (c) {
    case AssumptionCase::A1: return "A1";
    case AssumptionCase::A2: return "A2";
    case AssumptionCase::A3: return "A3";
    case AssumptionCase::None: return "none";
  }
  return "none";
}

AssumptionCase GapParameters::classify() const {
  const bool alpha_ok = alpha > 0.0 && alpha <= 1.0;
  const bool relax_ok =
      alpha1 > 0.0 && alpha1 <= 2.0 && alpha2 > 0.0 && alpha2 <= 2.0;
  if (!alpha_ok || !relax_ok) return AssumptionCase::None;
  if (alpha1 < 2.0 && alpha2 < 2.0) return AssumptionCase::A1;
  if (alpha < 1.0) {
    return (alpha1 == 2.0 && alpha2 == 2.0) ? AssumptionCase::A3
                                            : AssumptionCase::A2;
  }
  return AssumptionCase::None;
}

GapParameters make_parameters(double alpha, double alpha1, double alpha2,
                              std::string label) {
  if (!(alpha > 0.0) || !(alpha1 > 0.0) || !(alpha2 > 0.0) ||
      !std::isfinite(alpha) || !std::isfinite(alpha1) ||
      !std::isfinite(alpha2)) {
    throw std::invalid_argument("relaxation parameters must be positive");
  }
  return GapParameters{alpha, alpha1, alpha2, std::move(label)};
}

std::string Method::name() const {
  switch (kind) {
    case MethodKind::GapStar: return "GAP_STAR";
    case MethodKind::GapaInit: return "GAPA";
    case MethodKind::MapOpt: return "MAP";
    case MethodKind::AP: return "AP";
    case MethodKind::DR: return "DR";
    case MethodKind::Gap2A: return "GAP2A";
    case MethodKind::PRAP: return "PRAP";
    case MethodKind::GapFixed: return "GAP_FIXED(" + shortest(value) + ")";
  }
  return "?";
}

Method Method::parse(std::string_view text) {
  if (text == "GAP_STAR" || text == "GAP*") return {MethodKind::GapStar, 0.0};
  if (text == "GAPA" || text == "GAPA_INIT") return {MethodKind::GapaInit, 1.0};
  if (text == "MAP" || text == "MAP_OPT") return {MethodKind::MapOpt, 0.0};
  if (text == "AP") return {MethodKind::AP, 0.0};
  if (text == "DR") return {MethodKind::DR, 0.0};
  if (text == "GAP2A") return {MethodKind::Gap2A, 0.0};
  if (text == "PRAP") return {MethodKind::PRAP, 0.0};

  std::string_view number;
  if (text.starts_with("GAP_FIXED(") && text.ends_with(")")) {
    number = text.substr(10, text.size() - 11);
  } else if (text.starts_with("GAP") && text.size() > 3 &&
             (std::isdigit(static_cast<unsigned char>(text[3])) != 0)) {
    number = text.substr(3);
  } else {
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
  }
  double c = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), c);
  if (ec != std::errc() || ptr != number.data() + number.size() || !(c > 0.0)) {
    throw std::invalid_argument("bad relaxation in '" + std::string(text) + "'");
  }
  return gap_fixed(c);
}

Vector relaxed_project(const Subspace& S, double alpha, const Vector& x) {
  return (1.0 - alpha) * x + alpha * S.project(x);
}

Vector gap_step(const GapParameters& params, const Subspace& U,
                const Subspace& V, const Vector& x) {
  if (U.ambient_dim() != V.ambient_dim()) {
    throw DimensionError("gap_step: subspaces live in different spaces");
  }
  const Vector y = relaxed_project(V, params.alpha1, x);
  const Vector t = relaxed_project(U, params.alpha2, y);
  return (1.0 - params.alpha) * x + params.alpha * t;
}

GapParameters optimal_parameters(double theta_f) {
  if (!(theta_f > 0.0 && theta_f <= std::numbers::pi / 2)) {
    throw std::invalid_argument("optimal_parameters: theta_f must lie in (0, pi/2]");
  }
  const double a = 2.0 / (1.0 + std::sin(theta_f));
  return GapParameters{1.0, a, a, "GAP_STAR"};
}

GapParameters preset(const Method& method, std::optional<double> theta_f,
                     std::optional<double> theta_p) {
  const std::string label = method.name();
  switch (method.kind) {
    case MethodKind::GapStar: {
      auto p = optimal_parameters(require_angle(theta_f, "theta_f", method));
      p.label = label;
      return p;
    }
    case MethodKind::GapaInit: {
      const double a0 = method.value > 0.0 ? method.value : 1.0;
      return make_parameters(1.0, a0, a0, label);
    }
    case MethodKind::MapOpt: {
      const double s = std::sin(require_angle(theta_f, "theta_f", method));
      return make_parameters(2.0 / (1.0 + s * s), 1.0, 1.0, label);
    }
    case MethodKind::AP:
      return make_parameters(1.0, 1.0, 1.0, label);
    case MethodKind::DR:
      return make_parameters(0.5, 2.0, 2.0, label);
    case MethodKind::Gap2A: {
      const double tf = require_angle(theta_f, "theta_f", method);
      return make_parameters(1.0, 2.0, 2.0 / (1.0 + std::sin(2.0 * tf)), label);
    }
    case MethodKind::PRAP: {
      const double sf = std::sin(require_angle(theta_f, "theta_f", method));
      const double sp = std::sin(require_angle(theta_p, "theta_p", method));
      return make_parameters(1.0, 2.0 / (sp * sp + sf * sf), 1.0, label);
    }
    case MethodKind::GapFixed:
      return make_parameters(1.0, method.value, method.value, label);
  }
  throw std::invalid_argument("unknown preset");
}

Matrix build_dense_operator(const GapParameters& params, const Subspace& U,
                            const Subspace& V) {
  if (U.ambient_dim() != V.ambient_dim()) {
    throw DimensionError("build_dense_operator: subspaces live in different spaces");
  }
  const Index n = U.ambient_dim();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix PU = U.basis() * U.basis().transpose();
  const Matrix PV = V.basis() * V.basis().transpose();
  const Matrix T = ((1.0 - params.alpha2) * I + params.alpha2 * PU) *
                   ((1.0 - params.alpha1) * I + params.alpha1 * PV);
  return (1.0 - params.alpha) * I + params.alpha * T;
}

}  // namespace gap
