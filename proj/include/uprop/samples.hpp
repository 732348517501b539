#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace uprop {

/// Where a sample set came from: generator algorithm, seed, and the id of the
/// source distribution or expression that produced the values.
struct Provenance {
    std::string generator;
    std::uint64_t seed = 0;
    std::string source;
};

/// Ordered collection of i.i.d. variates plus provenance.
struct SampleSet {
    std::vector<double> values;
    Provenance provenance;

    std::size_t size() const { return values.size(); }
    std::span<const double> span() const { return values; }
};

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t count = 0;
};

struct Histogram {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<std::uint64_t> counts;
};

/// Compensated (Kahan) sum of a span.
double compensated_sum(std::span<const double> values);

/// Mean and unbiased variance with compensated accumulation; n >= 2.
SummaryStats summarize_samples(const SampleSet& samples);

/// Equal-width bins over [min, max]. The first bin is closed on the left and
/// every bin includes its right edge, so counts always sum to n.
Histogram make_histogram(const SampleSet& samples, std::size_t bins);

/// Single-column CSV with a provenance header comment line.
void write_samples_csv(const SampleSet& samples, const std::string& path);
SampleSet read_samples_csv(const std::string& path);

} // namespace uprop
