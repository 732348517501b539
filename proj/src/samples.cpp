#include "uprop/samples.hpp"

#include "uprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uprop {

double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

SummaryStats summarize_samples(const SampleSet& samples) {
    const std::size_t n = samples.size();
    if (n < 2) {
        throw ArgumentError("summarize_samples: need at least 2 samples");
    }
    const double mean = compensated_sum(samples.span()) / static_cast<double>(n);
    double sum_sq = 0.0;
    double comp = 0.0;
    for (double v : samples.values) {
        const double d = v - mean;
        const double y = d * d - comp;
        const double t = sum_sq + y;
        comp = (t - sum_sq) - y;
        sum_sq = t;
    }
    SummaryStats stats;
    stats.mean = mean;
    stats.variance = sum_sq / static_cast<double>(n - 1);
    stats.count = n;
    return stats;
}

Histogram make_histogram(const SampleSet& samples, std::size_t bins) {
    if (bins < 1) {
        throw ArgumentError("make_histogram: need at least 1 bin");
    }
    if (samples.values.empty()) {
        throw ArgumentError("make_histogram: empty sample set");
    }
    const auto [min_it, max_it] =
        std::minmax_element(samples.values.begin(), samples.values.end());
    Histogram hist;
    hist.lower = *min_it;
    hist.upper = *max_it;
    hist.counts.assign(bins, 0);
    const double width = (hist.upper - hist.lower) / static_cast<double>(bins);
    for (double v : samples.values) {
        std::size_t idx = 0;
        if (width > 0.0 && v > hist.lower) {
            // Right-inclusive bins: value exactly on an interior edge belongs
            // to the bin ending there.
            idx = static_cast<std::size_t>(std::ceil((v - hist.lower) / width)) - 1;
            idx = std::min(idx, bins - 1);
        }
        ++hist.counts[idx];
    }
    return hist;
}

void write_samples_csv(const SampleSet& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_samples_csv: cannot open " + path);
    }
    out << "# generator=" << samples.provenance.generator
        << " seed=" << samples.provenance.seed
        << " source=" << samples.provenance.source
        << " n=" << samples.size() << "\n";
    char buf[40];
    for (double v : samples.values) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << "\n";
    }
    if (!out) {
        throw IoError("write_samples_csv: write failed for " + path);
    }
}

SampleSet read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("read_samples_csv: cannot open " + path);
    }
    SampleSet samples;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (first) {
                std::istringstream header(line.substr(1));
                std::string token;
                while (header >> token) {
                    const auto eq = token.find('=');
                    if (eq == std::string::npos) continue;
                    const std::string key = token.substr(0, eq);
                    const std::string value = token.substr(eq + 1);
                    if (key == "generator") samples.provenance.generator = value;
                    else if (key == "seed") samples.provenance.seed = std::stoull(value);
                    else if (key == "source") samples.provenance.source = value;
                }
            }
            first = false;
            continue;
        }
        first = false;
        try {
            samples.values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw IoError("read_samples_csv: bad numeric line in " + path + ": " + line);
        }
    }
    return samples;
}

} // namespace uprop
