#pragma once

// 113-bit floating point for the last stretch of approximate paths, where the
// optimality band is narrower than the long double resolution of the data.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "lassopath/coordinate_descent.hpp"
#include "lassopath/model.hpp"

namespace lassopath {

using Quad = boost::multiprecision::float128;

/// cd_solve with the iterate and the residual in quad precision.
BasicCdResult<Quad> cd_solve_quad(const ProblemInstance& inst, double lambda,
                                  const VectorT<Quad>& w0, const CdOptions& opts = {});

}  // namespace lassopath
