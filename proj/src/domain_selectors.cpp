#include "fsbench/domain_selectors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "fsbench/errors.hpp"
#include "fsbench/filter_scores.hpp"
#include "fsbench/log.hpp"
#include "fsbench/wrapper_eval.hpp"

namespace fsbench {
namespace {

std::vector<double> dense_scores(const FeatureScore& s, Index d) {
    std::vector<double> out(static_cast<size_t>(d), 0.0);
    for (const auto& e : s.entries) out[static_cast<size_t>(e.first)] = e.second;
    return out;
}

FeatureScore ranking_from(const std::vector<double>& score) {
    FeatureScore r;
    for (size_t j = 0; j < score.size(); ++j)
        r.entries.push_back({static_cast<Index>(j), score[j]});
    return r;
}

// candidates ordered by decreasing score, ties to the lower index
std::vector<Index> order_desc(std::vector<Index> candidates, const std::vector<double>& score) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](Index a, Index b) {
        const double sa = score[static_cast<size_t>(a)];
        const double sb = score[static_cast<size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    return candidates;
}

// Feature-domain gating. Returns all columns (with a prominent warning) when
// kinds are unknown; `required` makes an empty gate an error instead of a
// fall-back to all columns.
std::vector<Index> gated_columns(const Dataset& d, FeatureKind wanted, const char* method,
                                 bool required) {
    std::vector<Index> all(static_cast<size_t>(d.n_cols()));
    std::iota(all.begin(), all.end(), Index{0});
    if (!d.feature_kinds) {
        log::warn(std::string(method) + ": feature kinds unknown for '" + d.name +
                  "'; running on all " + std::to_string(d.n_cols()) + " columns");
        return all;
    }
    std::vector<Index> gate;
    for (Index j = 0; j < d.n_cols(); ++j)
        if ((*d.feature_kinds)[static_cast<size_t>(j)] == wanted) gate.push_back(j);
    if (gate.empty()) {
        if (required)
            throw NoPermissionFeatures(method + std::string(": '") + d.name + "' has no " +
                                       to_string(wanted) + " columns");
        log::warn(std::string(method) + ": '" + d.name + "' has no " + to_string(wanted) +
                  " columns; running on all columns");
        return all;
    }
    return gate;
}

void require_both_classes(const Dataset& d, const char* method) {
    if (!d.has_both_classes())
        throw SingleClass(std::string(method) + " requires both classes in '" + d.name + "'");
}

std::vector<Index> sorted_copy(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Index> prefix_of(const std::vector<Index>& ordered, size_t count) {
    return {ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(count)};
}

size_t presence_count(const Dataset& d, Index col) {
    size_t c = 0;
    for (Index r = 0; r < d.n_rows(); ++r)
        if (d.features(r, col) > 0.5) ++c;
    return c;
}

} // namespace

SelectionResult select_sigpid(const Dataset& dataset, const SelectorParams& params,
                              SaturationTrace* trace) {
    require_both_classes(dataset, "sigpid");
    const double saturation = params.get_real("saturation", 0.005);
    const double support_frac = params.get_real("support_frac", 0.001);
    const double confidence = params.get_real("confidence", 0.95);
    const auto step_pct = params.get_int("step_pct", 5);

    auto candidates = gated_columns(dataset, FeatureKind::Permission, "sigpid", true);

    // signed presence-rate difference malware minus benign
    const Index n = dataset.n_rows();
    Index n_mal = 0;
    for (Index r = 0; r < n; ++r) n_mal += dataset.labels[r];
    const Index n_ben = n - n_mal;

    std::vector<double> s(static_cast<size_t>(dataset.n_cols()), 0.0);
    std::vector<double> abs_s(s.size(), 0.0);
    for (Index j : candidates) {
        Index in_mal = 0, in_ben = 0;
        for (Index r = 0; r < n; ++r) {
            if (dataset.features(r, j) > 0.5) (dataset.labels[r] ? in_mal : in_ben)++;
        }
        const double rate_mal = n_mal ? static_cast<double>(in_mal) / n_mal : 0.0;
        const double rate_ben = n_ben ? static_cast<double>(in_ben) / n_ben : 0.0;
        s[static_cast<size_t>(j)] = rate_mal - rate_ben;
        abs_s[static_cast<size_t>(j)] = std::abs(s[static_cast<size_t>(j)]);
    }

    auto ordered = order_desc(candidates, abs_s);
    const size_t step =
        std::max<size_t>(1, ordered.size() * static_cast<size_t>(step_pct) / 100);

    // L1: grow until three consecutive sub-threshold F1 gains
    SaturationTrace local;
    size_t keep_steps = 0;
    double prev_f1 = 0.0;
    int flat = 0;
    for (size_t t = 1;; ++t) {
        const size_t upto = std::min(t * step, ordered.size());
        const double f1 = inner_cv_f1(dataset, prefix_of(ordered, upto), "knn", 3, params.seed);
        local.steps.push_back({static_cast<Index>(upto), f1});
        if (t > 1) {
            flat = (f1 - prev_f1 < saturation) ? flat + 1 : 0;
            if (flat >= 3) {
                keep_steps = t - 3; // the last step before the plateau
                break;
            }
        }
        prev_f1 = f1;
        if (upto == ordered.size()) {
            keep_steps = t;
            break;
        }
    }
    auto kept = prefix_of(ordered, std::min(keep_steps * step, ordered.size()));
    const size_t l1_size = kept.size();

    // L2: prune rare supports
    std::vector<Index> supported;
    std::vector<size_t> support(static_cast<size_t>(dataset.n_cols()), 0);
    for (Index j : kept) {
        support[static_cast<size_t>(j)] = presence_count(dataset, j);
        if (static_cast<double>(support[static_cast<size_t>(j)]) >= support_frac * n)
            supported.push_back(j);
    }
    if (supported.empty()) {
        log::warn("sigpid: support pruning removed every feature; keeping the top-rate one");
        supported.push_back(kept.front());
    }
    const size_t l2_size = supported.size();

    // L3: collapse near-certain co-occurrence pairs, lower |s| loses
    std::vector<char> alive(supported.size(), 1);
    for (size_t a = 0; a < supported.size(); ++a) {
        if (!alive[a]) continue;
        for (size_t b = a + 1; b < supported.size(); ++b) {
            if (!alive[b]) continue;
            const Index fa = supported[a];
            const Index fb = supported[b];
            size_t both = 0;
            for (Index r = 0; r < n; ++r)
                if (dataset.features(r, fa) > 0.5 && dataset.features(r, fb) > 0.5) ++both;
            const size_t ca = support[static_cast<size_t>(fa)];
            const size_t cb = support[static_cast<size_t>(fb)];
            const double conf_ab = cb ? static_cast<double>(both) / cb : 0.0;
            const double conf_ba = ca ? static_cast<double>(both) / ca : 0.0;
            if (std::max(conf_ab, conf_ba) >= confidence) {
                // drop the lower-|s| member; ties drop the later (higher-index) one
                const double sa = abs_s[static_cast<size_t>(fa)];
                const double sb = abs_s[static_cast<size_t>(fb)];
                if (sa < sb) {
                    alive[a] = 0;
                    break;
                }
                alive[b] = 0;
            }
        }
    }
    std::vector<Index> survivors;
    for (size_t i = 0; i < supported.size(); ++i)
        if (alive[i]) survivors.push_back(supported[i]);

    SelectionResult result;
    result.method_id = "sigpid";
    result.selected = sorted_copy(survivors);
    result.ranking = ranking_from(abs_s);
    result.params["step"] = std::to_string(step);
    result.params["l1_kept"] = std::to_string(l1_size);
    result.params["l2_kept"] = std::to_string(l2_size);
    result.params["l3_kept"] = std::to_string(result.selected.size());
    if (trace) *trace = std::move(local);
    return result;
}

SelectionResult select_sigapi(const Dataset& dataset, const SelectorParams& params,
                              SaturationTrace* trace) {
    require_both_classes(dataset, "sigapi");
    const double ratio = params.get_real("ratio", 0.995);
    const auto step_pct = params.get_int("step_pct", 5);

    auto candidates = gated_columns(dataset, FeatureKind::ApiCall, "sigapi", false);
    auto ig = dense_scores(score_info_gain(dataset), dataset.n_cols());
    auto ordered = order_desc(candidates, ig);
    const size_t step =
        std::max<size_t>(1, ordered.size() * static_cast<size_t>(step_pct) / 100);

    SaturationTrace local;
    for (size_t upto = step; ; upto += step) {
        upto = std::min(upto, ordered.size());
        const double f1 = inner_cv_f1(dataset, prefix_of(ordered, upto), "knn", 3, params.seed);
        local.steps.push_back({static_cast<Index>(upto), f1});
        if (upto == ordered.size()) break;
    }

    double best = 0.0;
    for (const auto& st : local.steps) best = std::max(best, st.metric);
    size_t chosen = ordered.size();
    for (const auto& st : local.steps) {
        if (st.metric >= ratio * best) {
            chosen = static_cast<size_t>(st.subset_size);
            break;
        }
    }

    SelectionResult result;
    result.method_id = "sigapi";
    result.selected = sorted_copy(prefix_of(ordered, chosen));
    result.ranking = ranking_from(ig);
    result.params["step"] = std::to_string(step);
    result.params["chosen_size"] = std::to_string(chosen);
    result.params["best_f1"] = std::to_string(best);
    if (trace) *trace = std::move(local);
    return result;
}

SelectionResult select_rfg(const Dataset& dataset, const SelectorParams& params,
                           SaturationTrace* trace) {
    require_both_classes(dataset, "rfg");
    const double tolerance = params.get_real("tolerance", 0.005);

    const Index d = dataset.n_cols();
    auto ig = dense_scores(score_info_gain(dataset), d);
    std::vector<Index> all(static_cast<size_t>(d));
    std::iota(all.begin(), all.end(), Index{0});
    auto ordered = order_desc(all, ig);

    std::vector<size_t> sizes;
    for (int pct = 10; pct <= 100; pct += 10) {
        const size_t size = std::max<size_t>(
            1, (static_cast<size_t>(d) * static_cast<size_t>(pct) + 99) / 100);
        if (sizes.empty() || size > sizes.back()) sizes.push_back(size);
    }

    SaturationTrace local;
    for (size_t size : sizes) {
        const double f1 = inner_cv_f1(dataset, prefix_of(ordered, size), "rf", 3, params.seed);
        local.steps.push_back({static_cast<Index>(size), f1});
    }

    double best = 0.0;
    for (const auto& st : local.steps) best = std::max(best, st.metric);
    size_t chosen = sizes.back();
    for (const auto& st : local.steps) {
        if (st.metric >= best - tolerance) {
            chosen = static_cast<size_t>(st.subset_size);
            break;
        }
    }

    SelectionResult result;
    result.method_id = "rfg";
    result.selected = sorted_copy(prefix_of(ordered, chosen));
    result.ranking = ranking_from(ig);
    result.params["chosen_size"] = std::to_string(chosen);
    result.params["grid_best_f1"] = std::to_string(best);
    if (trace) *trace = std::move(local);
    return result;
}

namespace {

// JOWMDroid weight-mapping candidates; outputs clamped to [0,1] so the cut
// threshold lives on a fixed scale.
double map_weight(int func, double a, double b, double w) {
    double v = 0.0;
    switch (func) {
        case 0: v = a * w + b; break;
        case 1: v = std::pow(w, a); break;
        default: v = 1.0 / (1.0 + std::exp(-a * (w - b))); break;
    }
    return std::clamp(v, 0.0, 1.0);
}

const char* map_name(int func) {
    switch (func) {
        case 0: return "linear";
        case 1: return "power";
        default: return "logistic";
    }
}

} // namespace

SelectionResult select_jowmdroid(const Dataset& dataset, const SelectorParams& params) {
    require_both_classes(dataset, "jowmdroid");
    const auto population = params.get_int("population", 15);
    const auto generations = params.get_int("generations", 40);
    if (population < 4 || generations < 1)
        throw BudgetTooSmall("jowmdroid: population >= 4 and generations >= 1 required");

    const Index d = dataset.n_cols();
    auto ig = dense_scores(score_info_gain(dataset), d);
    const double ig_max = *std::max_element(ig.begin(), ig.end());
    std::vector<double> w(ig.size(), 0.0);
    if (ig_max > 0.0)
        for (size_t j = 0; j < ig.size(); ++j) w[j] = ig[j] / ig_max;

    // genome: function selector in [0,3), a, b, threshold tau
    constexpr double kLo[4] = {0.0, 0.1, -1.0, 0.0};
    constexpr double kHi[4] = {3.0, 10.0, 1.0, 1.0};
    using Genome = std::array<double, 4>;

    auto subset_of = [&](const Genome& g) {
        const int func = std::min(2, static_cast<int>(g[0]));
        std::vector<Index> cols;
        for (Index j = 0; j < d; ++j)
            if (map_weight(func, g[1], g[2], w[static_cast<size_t>(j)]) >= g[3])
                cols.push_back(j);
        return cols;
    };

    std::unordered_map<std::string, double> memo;
    auto fitness = [&](const Genome& g) {
        auto cols = subset_of(g);
        if (cols.empty()) return -1.0;
        std::string key(static_cast<size_t>(d), '0');
        for (Index j : cols) key[static_cast<size_t>(j)] = '1';
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const double f = inner_cv_f1(dataset, cols, "knn", 3, params.seed);
        memo.emplace(std::move(key), f);
        return f;
    };

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Genome> pop(static_cast<size_t>(population));
    std::vector<double> fit_value(pop.size());
    for (size_t i = 0; i < pop.size(); ++i) {
        for (int c = 0; c < 4; ++c) pop[i][c] = kLo[c] + unit(rng) * (kHi[c] - kLo[c]);
        fit_value[i] = fitness(pop[i]);
    }

    constexpr double kF = 0.5;
    constexpr double kCr = 0.9;
    for (long gen = 0; gen < generations; ++gen) {
        for (size_t i = 0; i < pop.size(); ++i) {
            size_t r1, r2, r3;
            std::uniform_int_distribution<size_t> pick(0, pop.size() - 1);
            do { r1 = pick(rng); } while (r1 == i);
            do { r2 = pick(rng); } while (r2 == i || r2 == r1);
            do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);

            Genome trial = pop[i];
            const int j_rand = static_cast<int>(std::uniform_int_distribution<>(0, 3)(rng));
            for (int c = 0; c < 4; ++c) {
                if (c == j_rand || unit(rng) < kCr) {
                    const double v = pop[r1][c] + kF * (pop[r2][c] - pop[r3][c]);
                    trial[c] = std::clamp(v, kLo[c], kHi[c]);
                }
            }
            const double tv = fitness(trial);
            if (tv >= fit_value[i]) {
                pop[i] = trial;
                fit_value[i] = tv;
            }
        }
    }

    const size_t best_i = static_cast<size_t>(
        std::max_element(fit_value.begin(), fit_value.end()) - fit_value.begin());
    const Genome& best = pop[best_i];
    const int func = std::min(2, static_cast<int>(best[0]));
    auto cols = subset_of(best);

    SelectionResult result;
    result.method_id = "jowmdroid";
    if (cols.empty()) {
        const size_t k = std::max<size_t>(1, (static_cast<size_t>(d) + 9) / 10);
        FeatureScore ws;
        for (Index j = 0; j < d; ++j) ws.entries.push_back({j, w[static_cast<size_t>(j)]});
        cols = top_k(ws, static_cast<Index>(k));
        log::warn("jowmdroid: optimizer converged on an empty subset; falling back to the top "
                  "10% by weight");
        result.params["fallback"] = "top10pct";
    }
    result.selected = sorted_copy(cols);
    std::vector<double> mapped(w.size());
    for (size_t j = 0; j < w.size(); ++j) mapped[j] = map_weight(func, best[1], best[2], w[j]);
    result.ranking = ranking_from(mapped);
    result.params["function"] = map_name(func);
    result.params["a"] = std::to_string(best[1]);
    result.params["b"] = std::to_string(best[2]);
    result.params["tau"] = std::to_string(best[3]);
    result.params["fitness"] = std::to_string(fit_value[best_i]);
    return result;
}

SelectionResult select_mt(const Dataset& dataset, const SelectorParams& params) {
    require_both_classes(dataset, "mt");
    const double mad_min = params.get_real("mad_min", 0.01);
    const double corr_max = params.get_real("corr_max", 0.95);

    const Index d = dataset.n_cols();
    auto mad = dense_scores(score_mad(dataset), d);
    auto ig = dense_scores(score_info_gain(dataset), d);

    // tier 1: near-constant columns out
    std::vector<Index> tier1;
    for (Index j = 0; j < d; ++j)
        if (mad[static_cast<size_t>(j)] >= mad_min) tier1.push_back(j);
    if (tier1.empty()) {
        const auto best = static_cast<Index>(
            std::max_element(mad.begin(), mad.end()) - mad.begin());
        log::warn("mt: every column is near-constant; keeping feature " + std::to_string(best));
        tier1.push_back(best);
    }

    // tier 2: collapse correlated pairs, lower info gain loses
    const Index n = dataset.n_rows();
    Vector mean = dataset.features.colwise().mean();
    Matrix centered = dataset.features.rowwise() - mean.transpose();
    Vector sd = (centered.array().square().colwise().mean()).sqrt();

    std::vector<char> alive(tier1.size(), 1);
    for (size_t a = 0; a < tier1.size(); ++a) {
        if (!alive[a]) continue;
        for (size_t b = a + 1; b < tier1.size(); ++b) {
            if (!alive[b]) continue;
            const Index fa = tier1[a];
            const Index fb = tier1[b];
            if (sd[fa] == 0.0 || sd[fb] == 0.0) continue;
            const double cov = centered.col(fa).dot(centered.col(fb)) / static_cast<double>(n);
            const double r = std::abs(cov / (sd[fa] * sd[fb]));
            if (r > corr_max) {
                const double ga = ig[static_cast<size_t>(fa)];
                const double gb = ig[static_cast<size_t>(fb)];
                if (ga < gb) {
                    alive[a] = 0;
                    break;
                }
                alive[b] = 0;
            }
        }
    }
    std::vector<Index> tier2;
    for (size_t i = 0; i < tier1.size(); ++i)
        if (alive[i]) tier2.push_back(tier1[i]);

    // tier 3: above-median info gain among survivors
    std::vector<double> survivor_ig;
    for (Index j : tier2) survivor_ig.push_back(ig[static_cast<size_t>(j)]);
    std::vector<double> sorted_ig = survivor_ig;
    std::sort(sorted_ig.begin(), sorted_ig.end());
    const size_t m = sorted_ig.size();
    const double median = (m % 2) ? sorted_ig[m / 2]
                                  : 0.5 * (sorted_ig[m / 2 - 1] + sorted_ig[m / 2]);

    std::vector<Index> tier3;
    for (size_t i = 0; i < tier2.size(); ++i)
        if (survivor_ig[i] > median) tier3.push_back(tier2[i]);
    if (tier3.empty()) {
        const size_t best = static_cast<size_t>(
            std::max_element(survivor_ig.begin(), survivor_ig.end()) - survivor_ig.begin());
        log::warn("mt: no survivor above the median info gain; keeping feature " +
                  std::to_string(tier2[best]));
        tier3.push_back(tier2[best]);
    }

    SelectionResult result;
    result.method_id = "mt";
    result.selected = sorted_copy(tier3);
    result.ranking = ranking_from(ig);
    result.params["tier1_kept"] = std::to_string(tier1.size());
    result.params["tier2_kept"] = std::to_string(tier2.size());
    result.params["tier3_kept"] = std::to_string(result.selected.size());
    return result;
}

SelectionResult select_semidroid(const Dataset& dataset, const SelectorParams& params) {
    require_both_classes(dataset, "semidroid");
    const double quota = params.get_real("quota", 0.5);

    const Index d = dataset.n_cols();
    const FeatureScore parts[4] = {score_info_gain(dataset), score_chi_square(dataset),
                                   score_pearson(dataset), score_mad(dataset)};

    std::vector<double> aggregate(static_cast<size_t>(d), 0.0);
    for (const auto& part : parts) {
        auto scores = dense_scores(part, d);
        std::vector<Index> order(static_cast<size_t>(d));
        std::iota(order.begin(), order.end(), Index{0});
        order = order_desc(order, scores);
        for (size_t pos = 0; pos < order.size(); ++pos)
            aggregate[static_cast<size_t>(order[pos])] += static_cast<double>(pos + 1);
    }
    for (auto& a : aggregate) a /= 4.0;

    const auto keep = static_cast<Index>(std::max<size_t>(
        1, static_cast<size_t>(std::ceil(quota * static_cast<double>(d)))));

    FeatureScore inverted; // top_k wants higher = better
    for (Index j = 0; j < d; ++j)
        inverted.entries.push_back({j, static_cast<double>(d) - aggregate[static_cast<size_t>(j)]});

    SelectionResult result;
    result.method_id = "semidroid";
    result.selected = sorted_copy(top_k(inverted, std::min(keep, d)));
    result.ranking = inverted;
    result.params["kept"] = std::to_string(result.selected.size());
    return result;
}

} // namespace fsbench
