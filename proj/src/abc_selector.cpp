#include "fsbench/abc_selector.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsbench/errors.hpp"
#include "fsbench/wrapper_eval.hpp"

namespace fsbench {
namespace {

using Mask = std::vector<char>; // one byte per feature, 0/1

std::vector<Index> mask_columns(const Mask& mask) {
    std::vector<Index> cols;
    for (size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) cols.push_back(static_cast<Index>(j));
    return cols;
}

struct FitnessCache {
    const Dataset& dataset;
    std::uint64_t seed;
    std::unordered_map<std::string, double> memo;

    double operator()(const Mask& mask) {
        std::string key(mask.begin(), mask.end());
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        auto cols = mask_columns(mask);
        double fitness;
        if (cols.empty()) {
            fitness = -1.0; // empty masks are never competitive
        } else {
            const double penalty =
                0.001 * static_cast<double>(cols.size()) / static_cast<double>(mask.size());
            fitness = inner_cv_f1(dataset, cols, "knn", 3, seed) - penalty;
        }
        memo.emplace(std::move(key), fitness);
        return fitness;
    }
};

Mask random_mask(size_t d, std::mt19937_64& rng) {
    Mask mask(d, 0);
    std::bernoulli_distribution coin(0.5);
    for (auto& bit : mask) bit = coin(rng) ? 1 : 0;
    if (std::find(mask.begin(), mask.end(), char{1}) == mask.end())
        mask[std::uniform_int_distribution<size_t>(0, d - 1)(rng)] = 1;
    return mask;
}

Mask flip_one(const Mask& source, std::mt19937_64& rng) {
    Mask neighbor = source;
    const size_t j = std::uniform_int_distribution<size_t>(0, source.size() - 1)(rng);
    neighbor[j] = neighbor[j] ? 0 : 1;
    return neighbor;
}

} // namespace

SelectionResult select_abc(const Dataset& dataset, const SelectorParams& params) {
    const auto colony = params.get_int("colony", 20);
    const auto iterations = params.get_int("iterations", 50);
    if (colony < 2 || iterations < 1)
        throw BudgetTooSmall("abc: colony >= 2 and iterations >= 1 required");
    if (!dataset.has_both_classes())
        throw SingleClass("abc requires both classes in '" + dataset.name + "'");

    const size_t d = static_cast<size_t>(dataset.n_cols());
    constexpr int kScoutLimit = 10;

    std::mt19937_64 rng(params.seed);
    FitnessCache fitness{dataset, params.seed, {}};

    std::vector<Mask> sources;
    std::vector<double> value;
    std::vector<int> trials(static_cast<size_t>(colony), 0);
    for (long i = 0; i < colony; ++i) {
        sources.push_back(random_mask(d, rng));
        value.push_back(fitness(sources.back()));
    }

    auto best_index = static_cast<size_t>(
        std::max_element(value.begin(), value.end()) - value.begin());
    Mask best = sources[best_index];
    double best_value = value[best_index];

    auto try_improve = [&](size_t i) {
        Mask neighbor = flip_one(sources[i], rng);
        const double v = fitness(neighbor);
        if (v > value[i]) {
            sources[i] = std::move(neighbor);
            value[i] = v;
            trials[i] = 0;
            if (v > best_value) {
                best_value = v;
                best = sources[i];
            }
        } else {
            ++trials[i];
        }
    };

    for (long iter = 0; iter < iterations; ++iter) {
        // employed bees: one neighborhood probe per source
        for (size_t i = 0; i < sources.size(); ++i) try_improve(i);

        // onlooker bees: roulette wheel over shifted fitness
        const double low = *std::min_element(value.begin(), value.end());
        std::vector<double> weight(value.size());
        for (size_t i = 0; i < value.size(); ++i) weight[i] = value[i] - low + 1e-9;
        std::discrete_distribution<size_t> wheel(weight.begin(), weight.end());
        for (size_t n = 0; n < sources.size(); ++n) try_improve(wheel(rng));

        // scouts: abandon stagnant sources
        for (size_t i = 0; i < sources.size(); ++i) {
            if (trials[i] > kScoutLimit) {
                sources[i] = random_mask(d, rng);
                value[i] = fitness(sources[i]);
                trials[i] = 0;
                if (value[i] > best_value) {
                    best_value = value[i];
                    best = sources[i];
                }
            }
        }
    }

    SelectionResult result;
    result.method_id = "abc";
    result.selected = mask_columns(best);
    FeatureScore ranking;
    for (size_t j = 0; j < d; ++j)
        ranking.entries.push_back({static_cast<Index>(j), best[j] ? 1.0 : 0.0});
    result.ranking = std::move(ranking);
    result.params["colony"] = std::to_string(colony);
    result.params["iterations"] = std::to_string(iterations);
    result.params["fitness"] = std::to_string(best_value);
    return result;
}

} // namespace fsbench
