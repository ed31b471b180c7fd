#include "curvkit/model_plane.hpp"

#include <stdexcept>

namespace curvkit {

namespace {

void reject_nan(double v) {
  if (std::isnan(v)) throw std::invalid_argument("NaN argument");
}

}  // namespace

double varpi(double kappa) {
  reject_nan(kappa);
  return kappa > 0 ? kPi / std::sqrt(kappa) : kInf;
}

double sn(double kappa, double x) {
  reject_nan(kappa);
  reject_nan(x);
  if (kappa > 0) {
    double r = std::sqrt(kappa);
    return std::sin(r * x) / r;
  }
  if (kappa < 0) {
    double r = std::sqrt(-kappa);
    return std::sinh(r * x) / r;
  }
  return x;
}

double cs(double kappa, double x) {
  reject_nan(kappa);
  reject_nan(x);
  if (kappa > 0) return std::cos(std::sqrt(kappa) * x);
  if (kappa < 0) return std::cosh(std::sqrt(-kappa) * x);
  return 1.0;
}

double md(double kappa, double x) {
  reject_nan(kappa);
  reject_nan(x);
  if (x < 0) throw std::invalid_argument("md: negative argument");
  if (kappa > 0) {
    if (x > varpi(kappa)) return 2.0 / kappa;
    double s = std::sin(std::sqrt(kappa) * x / 2);
    return 2 * s * s / kappa;
  }
  if (kappa < 0) {
    double s = std::sinh(std::sqrt(-kappa) * x / 2);
    return 2 * s * s / (-kappa);
  }
  return x * x / 2;
}

double tg(double kappa, double x) { return sn(kappa, x) / cs(kappa, x); }

std::optional<double> model_angle(double kappa, double a, double b, double c) {
  reject_nan(kappa);
  reject_nan(a);
  reject_nan(b);
  reject_nan(c);
  if (!(b > 0) || !(c > 0) || a < 0) return std::nullopt;
  const double slack = 1e-12 * (1 + a + b + c);
  double sa = (b + c - a) / 2, sb = (a + c - b) / 2, sc = (a + b - c) / 2;
  if (sa < -slack || sb < -slack || sc < -slack) return std::nullopt;
  sa = std::max(sa, 0.0);
  sb = std::max(sb, 0.0);
  sc = std::max(sc, 0.0);
  const double s = (a + b + c) / 2;
  if (kappa > 0) {
    const double w = varpi(kappa);
    if (b >= w || c >= w) return std::nullopt;
    if (2 * s >= 2 * w - kBoundaryTol * w / kPi) return std::nullopt;
  }
  auto f = [kappa](double t) {
    if (kappa > 0) return std::sin(std::sqrt(kappa) * t);
    if (kappa < 0) return std::sinh(std::sqrt(-kappa) * t);
    return t;
  };
  double num = std::sqrt(std::max(0.0, f(sb) * f(sc)));
  double den = std::sqrt(std::max(0.0, f(s) * f(sa)));
  if (num == 0 && den == 0) return std::nullopt;
  return 2 * std::atan2(num, den);
}

double model_side_unchecked(double kappa, double phi, double b, double c) {
  reject_nan(kappa);
  reject_nan(phi);
  reject_nan(b);
  reject_nan(c);
  if (c < 0) {
    phi = kPi - phi;
    c = -c;
  }
  if (b < 0) {
    phi = kPi - phi;
    b = -b;
  }
  phi = std::clamp(phi, 0.0, kPi);
  const double sh = std::sin(phi / 2), ch = std::cos(phi / 2);
  if (kappa == 0) {
    double d = b - c;
    return std::sqrt(d * d + 4 * b * c * sh * sh);
  }
  const double u = std::sqrt(std::abs(kappa));
  if (kappa < 0) {
    double h = std::sinh(u * (b - c) / 2);
    double q = h * h + std::sinh(u * b) * std::sinh(u * c) * sh * sh;
    return 2 * std::asinh(std::sqrt(std::max(0.0, q))) / u;
  }
  double hs = std::sin(u * (b - c) / 2), hc = std::cos(u * (b + c) / 2);
  double p = std::sin(u * b) * std::sin(u * c);
  double S = hs * hs + p * sh * sh;
  double C = hc * hc + p * ch * ch;
  return 2 * std::atan2(std::sqrt(std::max(0.0, S)), std::sqrt(std::max(0.0, C))) / u;
}

double model_side(double kappa, double phi, double b, double c) {
  if (kappa > 0) {
    double w = varpi(kappa);
    if (std::abs(b) >= w || std::abs(c) >= w)
      throw std::domain_error("model_side: leg not shorter than varpi");
  }
  return model_side_unchecked(kappa, phi, b, c);
}

double extended_model_angle(double kappa, double a, double b, double c) {
  if (auto phi = model_angle(kappa, a, b, c)) return *phi;
  const double tol = kLengthTol * (1 + a + b + c);
  if (std::abs(b + a - c) <= tol || std::abs(c + a - b) <= tol) return 0.0;
  return kPi;
}

const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "-";
    case Sign::Zero: return "0";
    case Sign::Positive: return "+";
    default: return "undefined";
  }
}

AlexandrovTerms alexandrov_terms(double kappa, double a, double b, double a2, double b2,
                                 double x) {
  AlexandrovTerms t;
  auto u1 = model_angle(kappa, a, b, x), u2 = model_angle(kappa, a2, b2, x);
  if (u1 && u2) t.adjacent = *u1 + *u2 - kPi;
  auto v1 = model_angle(kappa, a2, b + b2, a), v2 = model_angle(kappa, x, a, b);
  if (v1 && v2) t.corner = *v1 - *v2;
  return t;
}

Sign alexandrov_sign(double kappa, double a, double b, double a2, double b2, double x,
                     double tol) {
  if (!(a > 0 && b > 0 && a2 > 0 && b2 > 0 && x > 0))
    throw std::invalid_argument("alexandrov_sign: lengths must be positive");
  auto t = alexandrov_terms(kappa, a, b, a2, b2, x);
  if (!t.adjacent || !t.corner) return Sign::Undefined;
  auto sgn = [tol](double e) { return e > tol ? 1 : (e < -tol ? -1 : 0); };
  int s1 = sgn(*t.adjacent), s2 = sgn(*t.corner);
  if (s1 * s2 < 0) throw std::logic_error("alexandrov_sign: the two expressions disagree");
  int s = s1 != 0 ? s1 : s2;
  return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero);
}

}  // namespace curvkit
