#pragma once

// Standard normal distribution functions used by the Wald machinery.

namespace phidiv::normal {

// Phi(x), via erfc so both tails keep full relative precision.
double cdf(double x);

// 1 - Phi(x).
double upper_tail(double x);

// Phi^{-1}(prob) for prob in (0,1). Wichura's AS 241 rational approximation
// (PPND16), relative accuracy about 1e-16.
double quantile(double prob);

}  // namespace phidiv::normal
