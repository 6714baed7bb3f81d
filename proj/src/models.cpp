#include "fsbench/models.hpp"

#include "fsbench/errors.hpp"
#include "fsbench/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace fsbench {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Knn: return "knn";
        case ModelKind::RandomForest: return "rf";
        case ModelKind::LinearSvm: return "svm-linear";
    }
    return "?";
}

ModelKind model_kind_from_id(const std::string& id) {
    if (id == "knn") return ModelKind::Knn;
    if (id == "rf") return ModelKind::RandomForest;
    if (id == "svm-linear" || id == "svm") return ModelKind::LinearSvm;
    throw InvalidConfig("unknown model '" + id + "' (expected knn, rf, svm-linear)");
}

std::string model_description(ModelKind kind) {
    switch (kind) {
        case ModelKind::Knn:
            return "k-nearest-neighbours (k=5, Euclidean distance); score is the malware "
                   "fraction among the neighbours, neighbour ties broken by lower training index.";
        case ModelKind::RandomForest:
            return "random forest (100 trees, Gini impurity, per-node feature subsample of "
                   "ceil(sqrt(d)), bootstrap rows, unlimited depth, min 2 samples to split); "
                   "score is the fraction of trees voting malware.";
        case ModelKind::LinearSvm:
            return "LINEAR support-vector machine: L2-regularized hinge loss (C=1.0) trained "
                   "by deterministic epoch-shuffled subgradient descent (50 epochs). This is a "
                   "deliberate substitution for the common RBF-kernel default, chosen for "
                   "tractability and determinism; reports label it \"svm-linear\".";
    }
    return "";
}

ModelSpec ModelSpec::make(const std::string& id, std::map<std::string, std::string> hyperparams,
                          std::uint64_t seed) {
    ModelSpec spec;
    spec.kind = model_kind_from_id(id);
    static const std::map<ModelKind, std::set<std::string>> allowed = {
        {ModelKind::Knn, {"k"}},
        {ModelKind::RandomForest, {"trees", "bootstrap"}},
        {ModelKind::LinearSvm, {"c", "epochs"}},
    };
    for (const auto& [key, value] : hyperparams) {
        (void)value;
        if (!allowed.at(spec.kind).count(key))
            throw UnknownHyperparam(id + ": '" + key + "'");
    }
    spec.hyperparams = std::move(hyperparams);
    spec.seed = seed;
    return spec;
}

namespace {

long hyper_int(const ModelSpec& spec, const std::string& key, long fallback) {
    auto it = spec.hyperparams.find(key);
    if (it == spec.hyperparams.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (const std::exception&) {
        throw InvalidConfig("hyperparam " + key + "='" + it->second + "' is not an integer");
    }
}

double hyper_real(const ModelSpec& spec, const std::string& key, double fallback) {
    auto it = spec.hyperparams.find(key);
    if (it == spec.hyperparams.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw InvalidConfig("hyperparam " + key + "='" + it->second + "' is not a number");
    }
}

bool hyper_flag(const ModelSpec& spec, const std::string& key, bool fallback) {
    auto it = spec.hyperparams.find(key);
    if (it == spec.hyperparams.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw InvalidConfig("hyperparam " + key + "='" + it->second + "' is not a flag");
}

struct TreeNode {
    Index feature = -1;      // -1 marks a leaf
    double threshold = 0.0;  // value <= threshold goes left
    int left = -1;
    int right = -1;
    int label = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    int predict_row(const Matrix& rows, Index r) const {
        int at = 0;
        while (nodes[static_cast<size_t>(at)].feature >= 0) {
            const TreeNode& nd = nodes[static_cast<size_t>(at)];
            at = rows(r, nd.feature) <= nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<size_t>(at)].label;
    }
};

double gini(long count1, long total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(count1) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

struct SplitChoice {
    Index feature = -1;
    double threshold = 0.0;
    double impurity = 0.0; // weighted child Gini
};

// Best threshold on one feature for the given node samples; returns false
// when the feature is constant across them.
bool best_split_on_feature(const Matrix& x, const IntVector& y, const std::vector<Index>& samples,
                           Index feature, SplitChoice* out) {
    std::vector<std::pair<double, int>> vals;
    vals.reserve(samples.size());
    for (Index s : samples) vals.emplace_back(x(s, feature), y[s]);
    std::sort(vals.begin(), vals.end());
    if (vals.front().first == vals.back().first) return false;

    const long total = static_cast<long>(vals.size());
    long total1 = 0;
    for (const auto& [v, lbl] : vals) total1 += lbl;

    bool found = false;
    long left_n = 0, left_1 = 0;
    for (size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left_n;
        left_1 += vals[i].second;
        if (vals[i].first == vals[i + 1].first) continue;
        const long right_n = total - left_n;
        const double impurity =
            (static_cast<double>(left_n) * gini(left_1, left_n) +
             static_cast<double>(right_n) * gini(total1 - left_1, right_n)) /
            static_cast<double>(total);
        if (!found || impurity < out->impurity) {
            out->feature = feature;
            out->threshold = 0.5 * (vals[i].first + vals[i + 1].first);
            out->impurity = impurity;
            found = true;
        }
    }
    return found;
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const IntVector& y, Index features_per_node, std::mt19937_64& rng)
        : x_(x), y_(y), features_per_node_(features_per_node), rng_(rng) {}

    Tree build(std::vector<Index> samples) {
        Tree tree;
        grow(tree, std::move(samples));
        return tree;
    }

private:
    int grow(Tree& tree, std::vector<Index> samples) {
        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        long count1 = 0;
        for (Index s : samples) count1 += y_[s];
        const long total = static_cast<long>(samples.size());
        // majority label, ties resolved toward malware
        tree.nodes[static_cast<size_t>(node_id)].label = 2 * count1 >= total ? 1 : 0;

        if (total < 2 || count1 == 0 || count1 == total) return node_id;

        SplitChoice best;
        if (!choose_split(samples, &best)) return node_id;

        std::vector<Index> left, right;
        for (Index s : samples)
            (x_(s, best.feature) <= best.threshold ? left : right).push_back(s);
        samples.clear();
        samples.shrink_to_fit();

        const int left_id = grow(tree, std::move(left));
        const int right_id = grow(tree, std::move(right));
        TreeNode& node = tree.nodes[static_cast<size_t>(node_id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left_id;
        node.right = right_id;
        return node_id;
    }

    // Samples features_per_node candidates first; if none of them admits a
    // split the remaining features are tried too, so an impure node with
    // distinct rows always splits.
    bool choose_split(const std::vector<Index>& samples, SplitChoice* out) {
        std::vector<Index> order(static_cast<size_t>(x_.cols()));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), rng_);

        std::vector<Index> primary(order.begin(),
                                   order.begin() + std::min<size_t>(order.size(),
                                                                    static_cast<size_t>(features_per_node_)));
        std::sort(primary.begin(), primary.end());

        bool found = false;
        SplitChoice candidate;
        for (Index f : primary) {
            if (best_split_on_feature(x_, y_, samples, f, &candidate) &&
                (!found || candidate.impurity < out->impurity)) {
                *out = candidate;
                found = true;
            }
        }
        if (found) return true;
        for (size_t i = static_cast<size_t>(features_per_node_); i < order.size(); ++i) {
            if (best_split_on_feature(x_, y_, samples, order[i], &candidate)) {
                *out = candidate;
                return true;
            }
        }
        return false;
    }

    const Matrix& x_;
    const IntVector& y_;
    Index features_per_node_;
    std::mt19937_64& rng_;
};

} // namespace

struct TrainedModel::State {
    ModelKind kind = ModelKind::Knn;
    Index width = 0;

    // knn
    Matrix train_x;
    IntVector train_y;
    Vector train_sqnorm;
    Index knn_k = 5;

    // rf
    std::vector<Tree> trees;

    // svm
    Vector svm_w;
    double svm_b = 0.0;
    std::vector<double> svm_objective;
};

ModelKind TrainedModel::kind() const { return state_->kind; }
Index TrainedModel::input_width() const { return state_->width; }

const Vector& TrainedModel::linear_weights() const {
    if (state_->kind != ModelKind::LinearSvm)
        throw Error("NotLinearModel", "linear_weights on " + to_string(state_->kind));
    return state_->svm_w;
}

const std::vector<double>& TrainedModel::objective_trace() const {
    if (state_->kind != ModelKind::LinearSvm)
        throw Error("NotLinearModel", "objective_trace on " + to_string(state_->kind));
    return state_->svm_objective;
}

Vector TrainedModel::score(const Matrix& rows) const {
    if (rows.cols() != state_->width && rows.rows() > 0)
        throw WidthMismatch("expected " + std::to_string(state_->width) + " features, got " +
                            std::to_string(rows.cols()));
    const State& st = *state_;
    Vector out(rows.rows());
    switch (st.kind) {
        case ModelKind::Knn: {
            if (rows.rows() == 0) return out;
            // d^2 = |a|^2 + |b|^2 - 2 a.b, one GEMM for all pairs
            Matrix cross = rows * st.train_x.transpose();
            std::vector<std::pair<double, Index>> nb(static_cast<size_t>(st.train_x.rows()));
            const Index k = std::min<Index>(st.knn_k, st.train_x.rows());
            for (Index r = 0; r < rows.rows(); ++r) {
                const double rn = rows.row(r).squaredNorm();
                for (Index t = 0; t < st.train_x.rows(); ++t)
                    nb[static_cast<size_t>(t)] = {rn + st.train_sqnorm[t] - 2.0 * cross(r, t), t};
                std::partial_sort(nb.begin(), nb.begin() + k, nb.end());
                long votes = 0;
                for (Index i = 0; i < k; ++i) votes += st.train_y[nb[static_cast<size_t>(i)].second];
                out[r] = static_cast<double>(votes) / static_cast<double>(k);
            }
            return out;
        }
        case ModelKind::RandomForest: {
            for (Index r = 0; r < rows.rows(); ++r) {
                long votes = 0;
                for (const Tree& tree : st.trees) votes += tree.predict_row(rows, r);
                out[r] = static_cast<double>(votes) / static_cast<double>(st.trees.size());
            }
            return out;
        }
        case ModelKind::LinearSvm:
            if (rows.rows() == 0) return out;
            out = rows * st.svm_w;
            out.array() += st.svm_b;
            return out;
    }
    return out;
}

std::vector<int> TrainedModel::predict(const Matrix& rows) const {
    const Vector s = score(rows);
    const double threshold = state_->kind == ModelKind::LinearSvm ? 0.0 : 0.5;
    std::vector<int> labels(static_cast<size_t>(s.size()));
    for (Index i = 0; i < s.size(); ++i) labels[static_cast<size_t>(i)] = s[i] >= threshold ? 1 : 0;
    return labels;
}

namespace {

void fit_svm(TrainedModel::State& st, const ModelSpec& spec, const Dataset& d);

} // namespace

TrainedModel fit(const ModelSpec& spec, const Dataset& d) {
    bool any0 = false, any1 = false;
    for (Index i = 0; i < d.labels.size(); ++i) (d.labels[i] == 1 ? any1 : any0) = true;
    if (!any0 || !any1) throw SingleClassTrainingSet(d.name);

    auto state = std::make_shared<TrainedModel::State>();
    state->kind = spec.kind;
    state->width = d.n_cols();

    switch (spec.kind) {
        case ModelKind::Knn: {
            const long k = hyper_int(spec, "k", 5);
            if (k < 1) throw InvalidConfig("knn k must be >= 1");
            state->knn_k = static_cast<Index>(k);
            state->train_x = d.features;
            state->train_y = d.labels;
            state->train_sqnorm = d.features.rowwise().squaredNorm();
            break;
        }
        case ModelKind::RandomForest: {
            const long n_trees = hyper_int(spec, "trees", 100);
            if (n_trees < 1) throw InvalidConfig("rf trees must be >= 1");
            const bool bootstrap = hyper_flag(spec, "bootstrap", true);
            const Index mtry = static_cast<Index>(
                std::ceil(std::sqrt(static_cast<double>(d.n_cols()))));
            state->trees.reserve(static_cast<size_t>(n_trees));
            for (long t = 0; t < n_trees; ++t) {
                std::mt19937_64 rng(SeedMixer(spec.seed).with("tree").with(static_cast<std::uint64_t>(t)).value());
                std::vector<Index> samples;
                samples.reserve(static_cast<size_t>(d.n_rows()));
                if (bootstrap) {
                    std::uniform_int_distribution<Index> pick(0, d.n_rows() - 1);
                    for (Index i = 0; i < d.n_rows(); ++i) samples.push_back(pick(rng));
                } else {
                    samples.resize(static_cast<size_t>(d.n_rows()));
                    std::iota(samples.begin(), samples.end(), Index{0});
                }
                TreeBuilder builder(d.features, d.labels, mtry, rng);
                state->trees.push_back(builder.build(std::move(samples)));
            }
            break;
        }
        case ModelKind::LinearSvm:
            fit_svm(*state, spec, d);
            break;
    }

    TrainedModel model;
    model.state_ = std::move(state);
    return model;
}

namespace {

// Hinge-loss objective in the scaled form lambda/2 |w|^2 + mean hinge with
// lambda = 1/(C n); equivalent to 1/2|w|^2 + C sum hinge up to the factor Cn.
double svm_objective_value(const Matrix& x, const Vector& y, const Vector& w, double b,
                           double lambda) {
    const Vector margins = (x * w).array() + b;
    double hinge = 0.0;
    for (Index i = 0; i < y.size(); ++i)
        hinge += std::max(0.0, 1.0 - y[i] * margins[i]);
    return 0.5 * lambda * w.squaredNorm() + hinge / static_cast<double>(y.size());
}

void fit_svm(TrainedModel::State& st, const ModelSpec& spec, const Dataset& d) {
    const double C = hyper_real(spec, "c", 1.0);
    const long epochs = hyper_int(spec, "epochs", 50);
    if (C <= 0.0) throw InvalidConfig("svm c must be > 0");
    if (epochs < 1) throw InvalidConfig("svm epochs must be >= 1");

    const Index n = d.n_rows();
    const Index dim = d.n_cols();
    const double lambda = 1.0 / (C * static_cast<double>(n));

    Vector y(n);
    for (Index i = 0; i < n; ++i) y[i] = d.labels[i] == 1 ? 1.0 : -1.0;

    Vector w = Vector::Zero(dim);
    double b = 0.0;
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(spec.seed);

    double step_scale = 1.0;
    double best = svm_objective_value(d.features, y, w, b, lambda);
    st.svm_objective.push_back(best);

    std::uint64_t t = 1;
    for (long epoch = 0; epoch < epochs; ++epoch) {
        const Vector w_before = w;
        const double b_before = b;
        const std::uint64_t t_before = t;

        std::shuffle(order.begin(), order.end(), rng);
        for (Index idx : order) {
            const double eta = step_scale / (lambda * static_cast<double>(t));
            const double margin = y[idx] * (w.dot(d.features.row(idx)) + b);
            w *= (1.0 - eta * lambda);
            if (margin < 1.0) {
                w += (eta / static_cast<double>(n)) * y[idx] * d.features.row(idx).transpose();
                b += (eta / static_cast<double>(n)) * y[idx];
            }
            ++t;
        }

        const double objective = svm_objective_value(d.features, y, w, b, lambda);
        if (objective <= best + 1e-12) {
            best = objective;
        } else {
            // SGD epoch made things worse: roll back and damp the step
            w = w_before;
            b = b_before;
            t = t_before;
            step_scale *= 0.5;
        }
        st.svm_objective.push_back(best);
    }
    st.svm_w = std::move(w);
    st.svm_b = b;
}

} // namespace

} // namespace fsbench
