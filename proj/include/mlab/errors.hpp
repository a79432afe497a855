#pragma once

#include <stdexcept>
#include <string>

namespace mlab {

/// Root of the library's exception hierarchy.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define MLAB_DEFINE_ERROR(Name) \
  struct Name : Error {         \
    using Error::Error;         \
  }

MLAB_DEFINE_ERROR(ZeroVector);         // gauge argument is the zero vector
MLAB_DEFINE_ERROR(InvalidSpec);        // structurally invalid body description
MLAB_DEFINE_ERROR(DegenerateHessian);  // metric tensor failed the definiteness floor
MLAB_DEFINE_ERROR(SingularMetric);     // metric not invertible where an inverse is required
MLAB_DEFINE_ERROR(UnsupportedKind);    // quadrature kind incompatible with the dimension
MLAB_DEFINE_ERROR(NonFiniteIntegrand); // NaN/Inf encountered at a quadrature node
MLAB_DEFINE_ERROR(NotHomogeneous);     // integrand failed the zero-homogeneity spot-check
MLAB_DEFINE_ERROR(SingularGamma);      // averaged matrix failed its SPD check
MLAB_DEFINE_ERROR(NotAFinslerNorm);    // Randers one-form reaches norm >= 1
MLAB_DEFINE_ERROR(NotAnIsometry);      // map failed the gauge-invariance spot-check
MLAB_DEFINE_ERROR(BasePointOutside);   // base point not safely interior to the body
MLAB_DEFINE_ERROR(DegenerateTangent);  // tangent-space construction lost rank
MLAB_DEFINE_ERROR(NotPositiveDefinite);// area Hessian failed positive-definiteness
MLAB_DEFINE_ERROR(BoundViolation);     // area ratio escaped its proven sandwich
MLAB_DEFINE_ERROR(DidNotConverge);     // iterative solver exhausted its budget
MLAB_DEFINE_ERROR(IoFailure);          // file could not be read or written

#undef MLAB_DEFINE_ERROR

}  // namespace mlab
