#pragma once

#include <stdexcept>
#include <string>

namespace fsbench {

// Base for every error the engine raises on purpose. The code() string is the
// stable identifier recorded in failure entries and matched by tests.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define FSBENCH_DEFINE_ERROR(Name)                                    \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

// data
FSBENCH_DEFINE_ERROR(MissingLabelColumn);
FSBENCH_DEFINE_ERROR(EmptyFile);
FSBENCH_DEFINE_ERROR(RaggedRow);
FSBENCH_DEFINE_ERROR(NonBinaryLabel);
FSBENCH_DEFINE_ERROR(AllRowsDropped);
FSBENCH_DEFINE_ERROR(SingleClass);

// selection
FSBENCH_DEFINE_ERROR(UnknownMethod);
FSBENCH_DEFINE_ERROR(SelectorFailure);
FSBENCH_DEFINE_ERROR(IndexOutOfRange);
FSBENCH_DEFINE_ERROR(KTooLarge);
FSBENCH_DEFINE_ERROR(ConstantLabels);
FSBENCH_DEFINE_ERROR(TooFewSamples);
FSBENCH_DEFINE_ERROR(NoFeatureSurvives);
FSBENCH_DEFINE_ERROR(ZeroTotalVariance);
FSBENCH_DEFINE_ERROR(BudgetTooSmall);
FSBENCH_DEFINE_ERROR(NoPermissionFeatures);
FSBENCH_DEFINE_ERROR(EmptySelection);

// models
FSBENCH_DEFINE_ERROR(SingleClassTrainingSet);
FSBENCH_DEFINE_ERROR(WidthMismatch);
FSBENCH_DEFINE_ERROR(UnknownHyperparam);

// evaluation
FSBENCH_DEFINE_ERROR(ClassSmallerThanK);
FSBENCH_DEFINE_ERROR(InvalidK);

// report
FSBENCH_DEFINE_ERROR(EmptyStore);
FSBENCH_DEFINE_ERROR(UnknownFormat);

// plugin
FSBENCH_DEFINE_ERROR(PluginCrashed);
FSBENCH_DEFINE_ERROR(ProtocolViolation);
FSBENCH_DEFINE_ERROR(Timeout);

// cli
FSBENCH_DEFINE_ERROR(InvalidConfig);
FSBENCH_DEFINE_ERROR(UnwritableOutputDir);

#undef FSBENCH_DEFINE_ERROR

} // namespace fsbench
