#include "fsbench/linear_selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"
#include "fsbench/models.hpp"
#include "fsbench/seeding.hpp"

namespace fsbench {
namespace {

struct Standardized {
    Matrix z;             // centered, unit population sd; zero-variance columns left at 0
    Vector mean;
    Vector sd;            // population sd; 0 marks a degenerate column
    std::vector<Index> live; // columns with sd > 0
};

Standardized standardize(const Matrix& x) {
    const Index n = x.rows();
    Standardized s;
    s.mean = x.colwise().mean();
    Matrix centered = x.rowwise() - s.mean.transpose();
    s.sd = (centered.array().square().colwise().mean()).sqrt();
    s.z = Matrix::Zero(n, x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        if (s.sd[j] > 0.0) {
            s.z.col(j) = centered.col(j) / s.sd[j];
            s.live.push_back(j);
        }
    }
    return s;
}

double soft_threshold(double value, double lambda) {
    if (value > lambda) return value - lambda;
    if (value < -lambda) return value + lambda;
    return 0.0;
}

std::vector<Index> sorted_indices(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

LassoFit lasso_fit(const Matrix& x, const Vector& y, const LassoOptions& options) {
    if (x.rows() != y.size())
        throw WidthMismatch("lasso: X has " + std::to_string(x.rows()) + " rows but y has " +
                            std::to_string(y.size()));
    if (x.rows() == 0) throw TooFewSamples("lasso: empty design matrix");

    const Index n = x.rows();
    Standardized s = standardize(x);
    LassoFit fit;
    fit.intercept = y.mean();
    fit.beta = Vector::Zero(x.cols());

    Vector residual = y.array() - fit.intercept; // beta starts at 0
    const double inv_n = 1.0 / static_cast<double>(n);

    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double max_delta = 0.0;
        for (Index j : s.live) {
            const double old = fit.beta[j];
            // z_j . z_j / n == 1 after standardization
            const double rho = inv_n * s.z.col(j).dot(residual) + old;
            const double updated = soft_threshold(rho, options.lambda);
            if (updated != old) {
                residual -= s.z.col(j) * (updated - old);
                fit.beta[j] = updated;
                max_delta = std::max(max_delta, std::abs(updated - old));
            }
        }
        fit.sweeps = sweep;
        if (max_delta < options.tol) break;
    }
    return fit;
}

SelectionResult select_lasso(const Dataset& dataset, const SelectorParams& params) {
    LassoOptions options;
    options.lambda = params.get_real("lambda", params.lambda.value_or(0.01));

    Vector y = dataset.labels.cast<double>();
    LassoFit fit = lasso_fit(dataset.features, y, options);

    SelectionResult result;
    result.method_id = "lasso";
    result.params["lambda"] = std::to_string(options.lambda);
    result.params["sweeps"] = std::to_string(fit.sweeps);
    FeatureScore ranking;
    for (Index j = 0; j < fit.beta.size(); ++j) {
        ranking.entries.push_back({j, std::abs(fit.beta[j])});
        if (fit.beta[j] != 0.0) result.selected.push_back(j);
    }
    result.ranking = std::move(ranking);
    if (result.selected.empty())
        throw NoFeatureSurvives("lasso zeroed every coefficient at lambda=" +
                                std::to_string(options.lambda) +
                                "; retry with a smaller lasso.lambda");
    return result;
}

SelectionResult select_linear_regression(const Dataset& dataset, const SelectorParams& params) {
    (void)params;
    const Index n = dataset.features.rows();
    if (n < 2) throw TooFewSamples("linear_regression needs at least 2 rows");

    Standardized s = standardize(dataset.features);
    if (s.live.empty()) throw SelectorFailure("linear_regression: all columns are constant");

    Vector y = dataset.labels.cast<double>();
    const double y_mean = y.mean();
    Vector yc = y.array() - y_mean;

    const Index m = static_cast<Index>(s.live.size());
    Matrix zl(n, m);
    for (Index c = 0; c < m; ++c) zl.col(c) = s.z.col(s.live[c]);

    Matrix gram = (zl.transpose() * zl) / static_cast<double>(n);
    gram.diagonal().array() += 1e-8; // ridge jitter keeps collinear designs solvable
    Vector rhs = (zl.transpose() * yc) / static_cast<double>(n);
    Vector beta_live = gram.ldlt().solve(rhs);

    Vector abs_beta = Vector::Zero(dataset.features.cols());
    for (Index c = 0; c < m; ++c) abs_beta[s.live[c]] = std::abs(beta_live[c]);

    const double threshold = abs_beta.sum() / static_cast<double>(abs_beta.size());

    SelectionResult result;
    result.method_id = "linear_regression";
    FeatureScore ranking;
    for (Index j = 0; j < abs_beta.size(); ++j) {
        ranking.entries.push_back({j, abs_beta[j]});
        if (abs_beta[j] > threshold) result.selected.push_back(j);
    }
    result.ranking = std::move(ranking);
    if (result.selected.empty()) {
        // all-equal coefficients (e.g. duplicated columns): keep the best one
        Index best = 0;
        abs_beta.maxCoeff(&best);
        result.selected.push_back(best);
        log::warn("linear_regression: no coefficient above the mean; keeping feature " +
                  std::to_string(best));
    }
    result.params["threshold"] = std::to_string(threshold);
    return result;
}

SelectionResult select_pca(const Dataset& dataset, const SelectorParams& params) {
    const Index n = dataset.features.rows();
    const Index d = dataset.features.cols();
    if (n < 2) throw TooFewSamples("pca needs at least 2 rows");

    const double target = params.get_real("variance_target", 0.95);

    Vector mean = dataset.features.colwise().mean();
    Matrix centered = dataset.features.rowwise() - mean.transpose();
    Matrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    const double total = cov.trace();
    if (!(total > 0.0)) throw ZeroTotalVariance("pca: dataset has zero total variance");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) throw SelectorFailure("pca: eigendecomposition failed");

    // eigenvalues ascending; walk from the top
    std::vector<Index> order(static_cast<size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return eig.eigenvalues()[a] > eig.eigenvalues()[b];
    });

    Index components = 0;
    double cumulative = 0.0;
    for (Index c : order) {
        cumulative += std::max(0.0, eig.eigenvalues()[c]);
        ++components;
        if (cumulative / total >= target) break;
    }

    Vector relevance = Vector::Zero(d);
    for (Index i = 0; i < components; ++i) {
        const Index c = order[static_cast<size_t>(i)];
        const double lambda = std::max(0.0, eig.eigenvalues()[c]);
        relevance += lambda * eig.eigenvectors().col(c).array().square().matrix();
    }

    SelectionResult result;
    result.method_id = "pca";
    FeatureScore ranking;
    for (Index j = 0; j < d; ++j) ranking.entries.push_back({j, relevance[j]});
    result.selected = sorted_indices(top_k(ranking, components));
    result.ranking = std::move(ranking);
    result.params["components"] = std::to_string(components);
    result.params["variance_target"] = std::to_string(target);
    result.params["explained"] = std::to_string(cumulative / total);
    return result;
}

FeatureScore score_rfe(const Dataset& dataset, const SelectorParams& params) {
    const Index d = dataset.features.cols();
    const auto step = static_cast<Index>(params.get_int("step", 1));
    if (step < 1) throw InvalidConfig("rfe: step must be >= 1");

    std::vector<Index> remaining(static_cast<size_t>(d));
    std::iota(remaining.begin(), remaining.end(), Index{0});

    FeatureScore scores;
    scores.entries.resize(static_cast<size_t>(d));

    int round = 1;
    while (!remaining.empty()) {
        Vector weights;
        if (remaining.size() == 1) {
            weights = Vector::Ones(1);
        } else {
            Dataset sub;
            sub.name = dataset.name;
            sub.labels = dataset.labels;
            sub.features.resize(dataset.features.rows(), static_cast<Index>(remaining.size()));
            for (size_t c = 0; c < remaining.size(); ++c) {
                sub.features.col(static_cast<Index>(c)) = dataset.features.col(remaining[c]);
                sub.feature_names.push_back(dataset.feature_names[static_cast<size_t>(remaining[c])]);
            }
            ModelSpec spec = ModelSpec::make("svm-linear", {});
            spec.seed = derive_seed(params.seed, "rfe", static_cast<uint64_t>(round));
            weights = fit(spec, sub).linear_weights().cwiseAbs();
        }

        // drop the `step` weakest; ties eliminate the higher index first so the
        // lower index survives longer
        std::vector<size_t> local(remaining.size());
        std::iota(local.begin(), local.end(), size_t{0});
        std::sort(local.begin(), local.end(), [&](size_t a, size_t b) {
            const double wa = weights[static_cast<Index>(a)];
            const double wb = weights[static_cast<Index>(b)];
            if (wa != wb) return wa < wb;
            return remaining[a] > remaining[b];
        });

        const size_t drop = std::min(static_cast<size_t>(step), remaining.size());
        std::vector<Index> eliminated;
        for (size_t i = 0; i < drop; ++i) {
            const Index feature = remaining[local[i]];
            scores.entries[static_cast<size_t>(feature)] = {feature, static_cast<double>(round)};
            eliminated.push_back(feature);
        }
        for (Index feature : eliminated)
            remaining.erase(std::find(remaining.begin(), remaining.end(), feature));
        ++round;
    }
    return scores;
}

} // namespace fsbench
