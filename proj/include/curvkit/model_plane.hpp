#pragma once

#include "curvkit/common.hpp"

#include <optional>

namespace curvkit {

// Diameter of the model plane: pi/sqrt(kappa) for kappa > 0, infinite otherwise.
double varpi(double kappa);

struct Curvature {
  double kappa = 0;
  double varpi() const { return curvkit::varpi(kappa); }
};

struct TriangleSides {
  double a = 0, b = 0, c = 0;
};

// Solutions of y'' + kappa*y = 0 (sn: y(0)=0,y'(0)=1; cs: y(0)=1,y'(0)=0)
// and of y'' + kappa*y = 1 with y(0) = y'(0) = 0 (md).  md is frozen at 2/kappa
// beyond varpi.
double sn(double kappa, double x);
double cs(double kappa, double x);
double md(double kappa, double x);
double tg(double kappa, double x);

// Angle opposite to `a` in the model triangle with sides a, b, c.
std::optional<double> model_angle(double kappa, double a, double b, double c);

// Third side of the model hinge (phi; b, c).  A negative c is read as the
// reflected hinge: side{phi; b, -c} = side{pi - phi; b, c}.
double model_side(double kappa, double phi, double b, double c);

// Same formula without the b, c < varpi guard (b, c <= varpi for kappa > 0);
// used by cone builders where the far pole is a legitimate point.
double model_side_unchecked(double kappa, double phi, double b, double c);

// Angle with the two degenerate rules applied once the model triangle does not
// exist: 0 when b + a = c or c + a = b, pi otherwise.
double extended_model_angle(double kappa, double a, double b, double c);

enum class Sign { Negative, Zero, Positive, Undefined };
const char* to_string(Sign s);

// Common sign of the two expressions of Alexandrov's lemma for the
// configuration |pq| = a, |pz| = b, |qr| = a2, |zr| = b2, |qz| = x with z on
// [pr].  Throws std::logic_error if the two expressions disagree by more than
// `tol` in opposite directions.
Sign alexandrov_sign(double kappa, double a, double b, double a2, double b2, double x,
                     double tol = kBoundaryTol);

struct AlexandrovTerms {
  std::optional<double> adjacent;  // angle(a;b,x) + angle(a2;b2,x) - pi
  std::optional<double> corner;    // angle(a2;b+b2,a) - angle(x;a,b)
};
AlexandrovTerms alexandrov_terms(double kappa, double a, double b, double a2, double b2,
                                 double x);

}  // namespace curvkit
