// Regenerates data/demo.csv, the planted synthetic dataset bundled for demos
// and determinism checks (1000 rows, 5 informative + 45 noise columns,
// seed 42). The informative column list goes to stdout.
#include <cstdio>
#include <string>

#include "fsbench/dataset.hpp"
#include "fsbench/synthetic.hpp"

int main(int argc, char** argv) {
    const std::string out = argc > 1 ? argv[1] : "data/demo.csv";
    fsbench::PlantedSpec spec;
    spec.rows = 1000;
    spec.informative = 5;
    spec.noise = 45;
    spec.flip_prob = 0.1;
    spec.seed = 42;
    auto planted = fsbench::make_planted_dataset(spec);
    planted.data.name = "demo";
    fsbench::write_csv(planted.data, out);
    std::printf("wrote %s (%lld rows x %lld cols); informative columns:",
                out.c_str(), static_cast<long long>(planted.data.n_rows()),
                static_cast<long long>(planted.data.n_cols()));
    for (auto j : planted.informative) std::printf(" %lld", static_cast<long long>(j));
    std::printf("\n");
    return 0;
}
