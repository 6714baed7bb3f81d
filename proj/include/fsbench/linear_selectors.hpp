#pragma once

#include "fsbench/dataset.hpp"
#include "fsbench/selection.hpp"

namespace fsbench {

struct LassoOptions {
    double lambda = 0.01;
    double tol = 1e-7;   // convergence: max coefficient change per sweep
    int max_sweeps = 1000;
};

struct LassoFit {
    Vector beta;       // coefficients in standardized column space
    double intercept = 0.0;
    int sweeps = 0;
};

// Cyclic coordinate descent for (1/2n)|y - b0 - Z beta|^2 + lambda |beta|_1
// on mean-centered unit-variance columns. Zero-variance columns keep beta 0.
// With lambda = 0 this converges to ordinary least squares.
LassoFit lasso_fit(const Matrix& x, const Vector& y, const LassoOptions& options = {});

// Subset = nonzero LASSO support on y = labels. Throws NoFeatureSurvives when
// lambda kills every coefficient.
SelectionResult select_lasso(const Dataset& dataset, const SelectorParams& params);

// OLS on standardized columns with a 1e-8 ridge jitter; subset = coefficients
// above the mean absolute coefficient.
SelectionResult select_linear_regression(const Dataset& dataset, const SelectorParams& params);

// Covariance eigendecomposition; keeps the smallest m components reaching the
// cumulative explained-variance target, scores each original feature by
// sum_c lambda_c loading_jc^2 over those components, and selects the top m
// features. Label-agnostic; selection stays in original-feature space.
SelectionResult select_pca(const Dataset& dataset, const SelectorParams& params);

// Recursive elimination with the linear SVM as base estimator; every round
// drops the `step` features with smallest |weight|. Score = elimination
// round, so later-eliminated features rank higher.
FeatureScore score_rfe(const Dataset& dataset, const SelectorParams& params);

} // namespace fsbench
