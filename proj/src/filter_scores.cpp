#include "fsbench/filter_scores.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/log.hpp"
#include "fsbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace fsbench {

namespace {

void require_both_classes(const Dataset& d) {
    if (!d.has_both_classes()) throw ConstantLabels(d.name);
}

// Threshold-at-0.5 binarization; only warns the first time a non-binary
// value shows up in a dataset.
Matrix binarized(const Dataset& d) {
    bool warned = false;
    Matrix b(d.n_rows(), d.n_cols());
    for (Index c = 0; c < d.n_cols(); ++c) {
        for (Index r = 0; r < d.n_rows(); ++r) {
            const double v = d.features(r, c);
            if (!warned && v != 0.0 && v != 1.0) {
                log::warn(d.name + ": non-binary feature values, thresholding at 0.5");
                warned = true;
            }
            b(r, c) = v >= 0.5 ? 1.0 : 0.0;
        }
    }
    return b;
}

FeatureScore scores_from_vector(const Vector& scores) {
    FeatureScore fs;
    fs.entries.reserve(static_cast<size_t>(scores.size()));
    for (Index j = 0; j < scores.size(); ++j) fs.entries.emplace_back(j, scores[j]);
    return fs;
}

} // namespace

ContingencyTable contingency(const Vector& column, const IntVector& labels) {
    ContingencyTable t;
    for (Index r = 0; r < column.size(); ++r) {
        const int f = column[r] >= 0.5 ? 1 : 0;
        const int c = labels[r];
        t.observed[f][c] += 1.0;
    }
    t.n = static_cast<double>(column.size());
    const double row0 = t.observed[0][0] + t.observed[0][1];
    const double row1 = t.observed[1][0] + t.observed[1][1];
    const double col0 = t.observed[0][0] + t.observed[1][0];
    const double col1 = t.observed[0][1] + t.observed[1][1];
    t.expected[0][0] = row0 * col0 / t.n;
    t.expected[0][1] = row0 * col1 / t.n;
    t.expected[1][0] = row1 * col0 / t.n;
    t.expected[1][1] = row1 * col1 / t.n;
    return t;
}

double chi_square_stat(const ContingencyTable& t) {
    double chi2 = 0.0;
    for (int f = 0; f < 2; ++f)
        for (int c = 0; c < 2; ++c) {
            if (t.expected[f][c] == 0.0) continue;
            const double diff = t.observed[f][c] - t.expected[f][c];
            chi2 += diff * diff / t.expected[f][c];
        }
    return chi2;
}

FeatureScore score_chi_square(const Dataset& d) {
    require_both_classes(d);
    const Matrix b = binarized(d);
    const double n = static_cast<double>(d.n_rows());
    const Vector y = d.labels.cast<double>();
    const double n1 = y.sum();          // class-1 total
    const double n0 = n - n1;
    const Vector ones_count = b.colwise().sum();          // count(x=1) per feature
    const Vector c11 = b.transpose() * y;                 // count(x=1, y=1)

    Vector chi2(d.n_cols());
    for (Index j = 0; j < d.n_cols(); ++j) {
        ContingencyTable t;
        t.n = n;
        t.observed[1][1] = c11[j];
        t.observed[1][0] = ones_count[j] - c11[j];
        t.observed[0][1] = n1 - c11[j];
        t.observed[0][0] = n0 - t.observed[1][0];
        const double row0 = t.observed[0][0] + t.observed[0][1];
        const double row1 = t.observed[1][0] + t.observed[1][1];
        t.expected[0][0] = row0 * n0 / n;
        t.expected[0][1] = row0 * n1 / n;
        t.expected[1][0] = row1 * n0 / n;
        t.expected[1][1] = row1 * n1 / n;
        chi2[j] = chi_square_stat(t);
    }
    return scores_from_vector(chi2);
}

FeatureScore score_anova_f(const Dataset& d) {
    require_both_classes(d);
    const Index n = d.n_rows();
    if (n < 3) throw TooFewSamples("ANOVA needs n >= 3, got " + std::to_string(n));

    double n1 = 0;
    for (Index r = 0; r < n; ++r) n1 += d.labels[r];
    const double n0 = static_cast<double>(n) - n1;

    Vector f_values(d.n_cols());
    for (Index j = 0; j < d.n_cols(); ++j) {
        double sum0 = 0, sum1 = 0;
        for (Index r = 0; r < n; ++r)
            (d.labels[r] == 1 ? sum1 : sum0) += d.features(r, j);
        const double m0 = sum0 / n0;
        const double m1 = sum1 / n1;
        const double grand = (sum0 + sum1) / static_cast<double>(n);
        const double ssb = n0 * (m0 - grand) * (m0 - grand) + n1 * (m1 - grand) * (m1 - grand);
        double ssw = 0;
        for (Index r = 0; r < n; ++r) {
            const double mean = d.labels[r] == 1 ? m1 : m0;
            const double dev = d.features(r, j) - mean;
            ssw += dev * dev;
        }
        const double df_w = static_cast<double>(n) - 2.0;
        if (ssw <= 0.0) {
            f_values[j] = ssb > 0.0 ? std::numeric_limits<double>::max() : 0.0;
        } else {
            f_values[j] = ssb / (ssw / df_w);
        }
    }
    return scores_from_vector(f_values);
}

SelectionResult select_anova(const Dataset& d, const SelectorParams& params) {
    const double alpha = params.alpha.value_or(0.05);
    FeatureScore ranking = score_anova_f(d);
    const double df_w = static_cast<double>(d.n_rows()) - 2.0;

    std::vector<Index> selected;
    for (const auto& [j, f] : ranking.entries) {
        const double p = f == std::numeric_limits<double>::max() ? 0.0 : f_survival_1(f, df_w);
        if (p < alpha) selected.push_back(j);
    }
    if (selected.empty()) {
        log::warn(d.name + ": no feature significant at alpha=" + std::to_string(alpha) +
                  ", keeping the top-F feature");
        selected = top_k(ranking, 1);
    }
    SelectionResult result;
    result.method_id = "anova";
    result.selected = std::move(selected);
    result.ranking = std::move(ranking);
    result.params["alpha"] = std::to_string(alpha);
    return result;
}

FeatureScore score_info_gain(const Dataset& d) {
    require_both_classes(d);
    const Matrix b = binarized(d);
    const double n = static_cast<double>(d.n_rows());
    const Vector y = d.labels.cast<double>();
    const double n1 = y.sum();
    const double n0 = n - n1;

    auto h2 = [](double p) {
        if (p <= 0.0 || p >= 1.0) return 0.0;
        return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    };
    const double h_y = h2(n1 / n);

    const Vector ones_count = b.colwise().sum();
    const Vector c11 = b.transpose() * y;

    Vector ig(d.n_cols());
    for (Index j = 0; j < d.n_cols(); ++j) {
        const double nx1 = ones_count[j];
        const double nx0 = n - nx1;
        double h_cond = 0.0;
        if (nx1 > 0) h_cond += (nx1 / n) * h2(c11[j] / nx1);
        if (nx0 > 0) h_cond += (nx0 / n) * h2((n1 - c11[j]) / nx0);
        ig[j] = std::max(0.0, h_y - h_cond);
    }
    return scores_from_vector(ig);
}

FeatureScore score_mad(const Dataset& d) {
    require_both_classes(d);
    const Vector means = d.features.colwise().mean();
    Vector mad(d.n_cols());
    for (Index j = 0; j < d.n_cols(); ++j)
        mad[j] = (d.features.col(j).array() - means[j]).abs().mean();
    return scores_from_vector(mad);
}

FeatureScore score_pearson(const Dataset& d) {
    require_both_classes(d);
    const double n = static_cast<double>(d.n_rows());
    const Vector y = d.labels.cast<double>();
    const double y_mean = y.mean();
    const Vector yc = y.array() - y_mean;
    const double y_ss = yc.squaredNorm();

    Vector r(d.n_cols());
    for (Index j = 0; j < d.n_cols(); ++j) {
        const Vector xc = d.features.col(j).array() - d.features.col(j).mean();
        const double x_ss = xc.squaredNorm();
        if (x_ss == 0.0 || y_ss == 0.0) {
            r[j] = 0.0;
            continue;
        }
        r[j] = std::abs(xc.dot(yc) / std::sqrt(x_ss * y_ss));
    }
    (void)n;
    return scores_from_vector(r);
}

FeatureScore score_relieff(const Dataset& d, const ReliefFOptions& options) {
    require_both_classes(d);
    const Index n = d.n_rows();
    const Index n_cols = d.n_cols();

    // range normalization; zero-range features contribute no difference
    Vector inv_range(n_cols);
    for (Index j = 0; j < n_cols; ++j) {
        const double range = d.features.col(j).maxCoeff() - d.features.col(j).minCoeff();
        inv_range[j] = range > 0.0 ? 1.0 / range : 0.0;
    }

    std::vector<Index> class_members[2];
    for (Index r = 0; r < n; ++r) class_members[d.labels[r]].push_back(r);

    const Index m = std::min<Index>(n, options.sample_cap);
    std::vector<Index> sampled(static_cast<size_t>(n));
    std::iota(sampled.begin(), sampled.end(), Index{0});
    std::mt19937_64 rng(options.seed);
    if (m < n) {
        std::shuffle(sampled.begin(), sampled.end(), rng);
        sampled.resize(static_cast<size_t>(m));
    }

    bool shrink_logged = false;
    Vector weights = Vector::Zero(n_cols);
    std::vector<std::pair<double, Index>> candidates;
    for (Index r : sampled) {
        const int own = d.labels[r];
        for (int cls = 0; cls <= 1; ++cls) {
            const bool is_hit = cls == own;
            Index k = options.k_neighbors;
            const Index available =
                static_cast<Index>(class_members[cls].size()) - (is_hit ? 1 : 0);
            if (available < k) {
                k = available;
                if (!shrink_logged) {
                    log::warn(d.name + ": ReliefF class smaller than k+1, shrinking k to " +
                              std::to_string(k));
                    shrink_logged = true;
                }
            }
            if (k <= 0) continue;

            candidates.clear();
            for (Index other : class_members[cls]) {
                if (other == r) continue;
                double dist = 0.0;
                for (Index j = 0; j < n_cols; ++j)
                    dist += std::abs(d.features(r, j) - d.features(other, j)) * inv_range[j];
                candidates.emplace_back(dist, other);
            }
            std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());

            const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(k));
            for (Index t = 0; t < k; ++t) {
                const Index other = candidates[static_cast<size_t>(t)].second;
                for (Index j = 0; j < n_cols; ++j) {
                    const double diff =
                        std::abs(d.features(r, j) - d.features(other, j)) * inv_range[j];
                    weights[j] += is_hit ? -diff * scale : diff * scale;
                }
            }
        }
    }
    return scores_from_vector(weights);
}

} // namespace fsbench
