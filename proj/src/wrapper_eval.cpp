#include "fsbench/wrapper_eval.hpp"

#include <span>

#include "fsbench/errors.hpp"
#include "fsbench/folds.hpp"
#include "fsbench/log.hpp"
#include "fsbench/metrics.hpp"
#include "fsbench/models.hpp"
#include "fsbench/preprocess.hpp"
#include "fsbench/seeding.hpp"

namespace fsbench {

double inner_cv_f1(const Dataset& dataset, const std::vector<Index>& cols,
                   const std::string& model_id, int folds, std::uint64_t seed) {
    if (cols.empty()) throw EmptySelection("inner_cv_f1 called with an empty mask");

    Dataset masked = take_columns(dataset, cols);
    const std::span<const int> labels(masked.labels.data(),
                                      static_cast<size_t>(masked.labels.size()));
    FoldPlan plan = stratified_kfold(labels, folds, derive_seed(seed, "inner-folds"));

    double sum = 0.0;
    for (int f = 0; f < plan.k; ++f) {
        Dataset train = take_rows(masked, plan.train_rows(f));
        Dataset test = take_rows(masked, plan.test_rows(f));
        if (!train.has_both_classes()) {
            log::debug("inner_cv_f1: fold " + std::to_string(f) +
                       " training split is single-class; scoring 0");
            continue;
        }
        ModelSpec spec = ModelSpec::make(model_id, {});
        spec.seed = derive_seed(seed, "inner-fit", static_cast<std::uint64_t>(f));
        TrainedModel model = fit(spec, train);
        std::vector<int> predicted = model.predict(test.features);
        const std::span<const int> truth(test.labels.data(),
                                         static_cast<size_t>(test.labels.size()));
        sum += metrics_from_confusion(confusion(truth, predicted)).f1;
    }
    return sum / static_cast<double>(plan.k);
}

} // namespace fsbench
