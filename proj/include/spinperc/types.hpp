#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace spinperc {

// Raised when an exhaustive enumeration would exceed the configured cap.
// Never silently truncated: callers must either raise the budget or switch
// to a Monte Carlo estimator.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a user-supplied observation vector has total likelihood zero.
class ImpossibleObservation : public std::runtime_error {
public:
    explicit ImpossibleObservation(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration caps. exact_terms bounds the weighted term count
// (product of per-edge output alphabet sizes times the input enumeration)
// of exhaustive information computations; inner_terms bounds the
// per-observation posterior enumeration used by the Monte Carlo estimators;
// perc_edges bounds exact percolation (2^m open/closed patterns).
struct Budget {
    std::uint64_t exact_terms = std::uint64_t{1} << 26;
    std::uint64_t inner_terms = std::uint64_t{1} << 21;
    int perc_edges = 22;
};

enum class Method { exact, monte_carlo, path_bound };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::monte_carlo: return "monte_carlo";
        case Method::path_bound: return "path_bound";
    }
    return "?";
}

// Information value with provenance. Exact results carry no standard error;
// Monte Carlo results carry both the standard error and the sample count.
struct InfoResult {
    double value = 0.0;
    Method method = Method::exact;
    std::optional<double> std_error;
    std::optional<std::uint64_t> samples;
};

// Connection probability (or path-union bound). `vacuous` marks a
// path-union bound that exceeded 1.
struct ProbResult {
    double value = 0.0;
    Method method = Method::exact;
    std::optional<double> std_error;
    std::optional<std::uint64_t> samples;
    bool vacuous = false;
};

// Monte Carlo configuration. Estimates are reproducible functions of
// (samples, seed, workers): samples are split into `workers` contiguous
// blocks, block b draws from a substream derived from (seed, b), and the
// block results are combined in block order.
struct McConfig {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
};

} // namespace spinperc
