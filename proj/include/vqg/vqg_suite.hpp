#pragma once

#include <functional>
#include <vector>

#include "vqg/vertex.hpp"

namespace vqg {

/// Five sub-verdicts plus their combination.
struct VqgReport {
  std::vector<Verdict> checks;  // covariance, hexagons, almost-cocommutativity, yang-baxter, unit
  Verdict overall;
};

/// Vertex quantum group axioms for a holomorphic vertex bialgebra E (Y regular, product
/// a.b = Y(a,0)b) with spectral R given as a bicharacter r(a,b)(z) = R(z - w):
///   covariance      r(Ta, b) = d/dz r(a, b),  r(a, Tb) = -d/dz r(a, b)
///   hexagons        r(Y(a,u)b, c)(z) = sum r(a, c1)(z+u) r(b, c2)(z)
///                   r(a, Y(b,u)c)(z) = sum r(a1, c)(z) r(a2, b)(z-u)      (|u| < |z|)
///   almost cocomm.  sum r(a1, b1)(z) b2.a2 = sum a1.b1 r(a2, b2)(z)
///   Yang-Baxter     sum r(a1,b1)(z-w) r(a2,c1)(z-u) r(b2,c2)(w-u)
///                     = sum r(b1,c1)(w-u) r(a1,c2)(z-u) r(a2,b2)(z-w)   (|z| > |w| > |u|)
///   unit            r(|0>, a) = r(a, |0>) = counit(a)
/// The window degree bounds the powers of the small variables.
VqgReport check_vqg_suite(const VertexEngine& e, const std::function<StateVector(const BasisKey&)>& delta,
                          const VertexRMatrix& r, const std::vector<BasisKey>& states, CheckWindow w = {});
VqgReport check_vqg_suite(const VertexEngine& e, const VertexRMatrix& r, const std::vector<BasisKey>& states,
                          CheckWindow w = {});

}  // namespace vqg
