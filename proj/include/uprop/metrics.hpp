#pragma once

#include "uprop/dirac.hpp"
#include "uprop/samples.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace uprop::metrics {

enum class W1Method { EmpiricalEmpirical, DiscreteEmpirical };

struct WassersteinResult {
    double distance = 0.0;
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    W1Method method = W1Method::EmpiricalEmpirical;
};

/// Exact W1 between two empirical distributions: the integral of
/// |F_a - F_b| accumulated over merged sorted breakpoints. Handles unequal
/// sizes; for equal sizes it equals the mean absolute difference of the
/// sorted samples.
WassersteinResult wasserstein1(const SampleSet& a, const SampleSet& b);
WassersteinResult wasserstein1(std::span<const double> a, std::span<const double> b);

/// Same integral with both sides already sorted ascending (no copy/sort).
double wasserstein1_sorted(std::span<const double> sorted_a,
                           std::span<const double> sorted_b);

/// Exact W1 between the discrete CDF of a Dirac mixture and an empirical
/// CDF; deterministic given the inputs.
WassersteinResult wasserstein1_discrete(const dirac::DiracMixture& d, const SampleSet& b);
double wasserstein1_discrete_sorted(const dirac::DiracMixture& d,
                                    std::span<const double> sorted_b);

struct TimerSpan {
    std::uint64_t start_ns = 0;
    std::uint64_t end_ns = 0;
    double elapsed_ms() const {
        return static_cast<double>(end_ns - start_ns) / 1e6;
    }
};

std::uint64_t monotonic_ns();

/// Monotonic-clock span around the callable.
TimerSpan time_block(const std::function<void()>& work);

/// One benchmark repetition.
struct RunRecord {
    std::string app;
    std::string method;
    std::uint64_t param = 0; // n for sampling methods, r for dirac-prop
    std::uint32_t repetition = 0;
    double wasserstein = 0.0;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;
};

struct RepetitionSummary {
    std::vector<RunRecord> records;
    double w1_mean = 0.0;
    double w1_std = 0.0;
    double time_mean = 0.0;
    double time_std = 0.0;
    std::size_t count = 0;
};

/// Mean and unbiased std-dev of Wasserstein distance and run time; needs at
/// least two records.
RepetitionSummary summarize(const std::vector<RunRecord>& records);

constexpr const char* kRecordCsvHeader =
    "app,method,param,repetition,wasserstein,runtime_ms,seed";

void write_records_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_records_csv(const std::string& path);

/// Disk cache of ground-truth sample sets keyed by (app, seed, n, code
/// version). Files carry an FNV-1a checksum sidecar; mismatches trigger
/// regeneration instead of silent reuse.
class GroundTruthCache {
public:
    explicit GroundTruthCache(std::string dir);

    SampleSet get(const std::string& app, std::uint64_t seed, std::uint64_t n,
                  const std::function<SampleSet()>& generate);

    std::string path_for(const std::string& app, std::uint64_t seed,
                         std::uint64_t n) const;

private:
    std::string dir_;
};

std::uint64_t fnv1a64_file(const std::string& path);

} // namespace uprop::metrics
