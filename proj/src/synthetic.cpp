#include "fsbench/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "fsbench/errors.hpp"

namespace fsbench {

PlantedDataset make_planted_dataset(const PlantedSpec& spec) {
    if (spec.rows < 2 || spec.informative < 1 || spec.noise < 0)
        throw InvalidConfig("planted dataset needs >= 2 rows and >= 1 informative column");

    const Index d = spec.informative + spec.noise;
    std::mt19937_64 rng(spec.seed);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution flip(spec.flip_prob);

    PlantedDataset out;
    out.data.name = "planted";
    out.data.labels.resize(spec.rows);
    out.data.labels[0] = 0;
    out.data.labels[1] = 1;
    for (Index r = 2; r < spec.rows; ++r) out.data.labels[r] = coin(rng) ? 1 : 0;

    // place informative columns at shuffled positions
    std::vector<Index> position(static_cast<size_t>(d));
    std::iota(position.begin(), position.end(), Index{0});
    std::shuffle(position.begin(), position.end(), rng);
    out.informative.assign(position.begin(), position.begin() + spec.informative);
    std::sort(out.informative.begin(), out.informative.end());

    std::vector<char> is_informative(static_cast<size_t>(d), 0);
    for (Index j : out.informative) is_informative[static_cast<size_t>(j)] = 1;

    out.data.features.resize(spec.rows, d);
    for (Index j = 0; j < d; ++j) {
        if (is_informative[static_cast<size_t>(j)]) {
            for (Index r = 0; r < spec.rows; ++r) {
                const int bit = flip(rng) ? 1 - out.data.labels[r] : out.data.labels[r];
                out.data.features(r, j) = static_cast<double>(bit);
            }
        } else {
            for (Index r = 0; r < spec.rows; ++r)
                out.data.features(r, j) = coin(rng) ? 1.0 : 0.0;
        }
    }

    char name[16];
    for (Index j = 0; j < d; ++j) {
        std::snprintf(name, sizeof(name), "f%03lld", static_cast<long long>(j));
        out.data.feature_names.emplace_back(name);
    }
    out.data.validate_structure();
    return out;
}

} // namespace fsbench
