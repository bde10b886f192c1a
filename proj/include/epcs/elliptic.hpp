#pragma once

namespace epcs {

struct JacobiElliptic {
  double sn;
  double cn;
  double dn;
};

/// Jacobi elliptic functions sn, cn, dn of argument u with parameter
/// m = k^2 in [0,1], by the arithmetic-geometric mean and descending
/// Landen transformation.
JacobiElliptic jacobi_elliptic(double u, double parameter);

/// Complete elliptic integral of the first kind K(m), parameter convention.
double complete_elliptic_k(double parameter);

}  // namespace epcs
