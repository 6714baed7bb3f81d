#pragma once

#include <span>
#include <vector>

namespace fsbench {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation. Accurate to ~1e-12 for moderate a, b.
double incomplete_beta(double a, double b, double x);

// Survival function P(F > f) of the F(1, d2) distribution used by the
// one-way ANOVA filter.
double f_survival_1(double f, double d2);

// Quantile with linear interpolation between order statistics (the numpy
// default rule). p in [0, 1]; data need not be sorted.
double quantile_type7(std::span<const double> data, double p);

} // namespace fsbench
