#pragma once

#include <gmpxx.h>

namespace unifed {

using Rational = mpq_class;

inline constexpr int kIrwinHallExactCapDefault = 200;

// Cumulant generator kappa(theta) = log((e^theta - 1) / theta), continuously
// extended with kappa(0) = 0, and its first two derivatives.  The derivative
// kappa_prime maps R onto the open unit interval and is strictly increasing;
// kappa_double_prime is strictly positive.
double kappa(double theta);
double kappa_prime(double theta);
double kappa_double_prime(double theta);

// Inverse of kappa_prime on (0, 1), solved by a bracketed Newton iteration.
double kappa_prime_inverse(double mu);

// Irwin-Hall density (sum of n iid standard uniforms) at y.
//
// The naive evaluator runs the textbook alternating binomial sum in double
// precision.  Its terms grow like n^n while the result stays bounded, so for
// moderate n and y near the upper end of the support the cancellation error
// swamps the value and the output is garbage (including negative "densities").
// That behaviour is part of the contract: it is what the exact evaluator is
// measured against.
double irwin_hall_naive(double y, int n);

// Same sum in exact rational arithmetic.  Throws CapacityError when n
// exceeds cap.
Rational irwin_hall_exact(const Rational& y, int n,
                          int cap = kIrwinHallExactCapDefault);

// Survival function of the chi-squared distribution with df degrees of
// freedom, and the two-sided tail of the standard normal.
double chi_square_survival(double x, double df);
double normal_two_sided_p(double z);

namespace detail {

// Both branches of each cumulant function, exposed so tests can check that
// they agree near the crossover.
double kappa_series(double theta);
double kappa_closed(double theta);
double kappa_prime_series(double theta);
double kappa_prime_closed(double theta);
double kappa_double_prime_series(double theta);
double kappa_double_prime_closed(double theta);

}  // namespace detail

}  // namespace unifed
