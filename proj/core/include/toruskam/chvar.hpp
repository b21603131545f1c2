#pragma once
// Composition (change of the x variable) operators on the frame:
//   (B u)(phi, x) = u(phi, x + beta(phi, x)),
// built per phi collocation node by evaluating the Fourier basis on the
// displaced, oversampled x grid and re-expanding by least squares (which on
// a uniform oversampled grid is the orthogonal projection), then gathering
// the node blocks back into Toeplitz form.  Requires sup |beta_x| < 1/2 so
// that x -> x + beta(phi, x) is a diffeomorphism of the circle.

#include <utility>

#include "toruskam/op.hpp"

namespace toruskam {

struct DiffeoOperators {
  LinearOperator B;      // composition with x + beta(phi, x)
  LinearOperator Binv;   // composition with the inverse correction
  TorusField beta;       // forward correction
  TorusField beta_inv;   // x = y + beta_inv(phi, y) inverts y = x + beta(phi, x)
};

// The operator of composition with x -> x + beta(phi, x) alone.
LinearOperator composition_operator(const TorusField& beta, int oversample = 4);

// Forward and inverse composition operators; throws std::domain_error when
// sup |beta_x| >= 1/2 (diffeomorphism failure).
DiffeoOperators change_of_variable(const TorusField& beta, int oversample = 4);

}  // namespace toruskam
