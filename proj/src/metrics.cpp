#include "uprop/metrics.hpp"

#include "uprop/errors.hpp"
#include "uprop/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace uprop::metrics {

namespace {

double breakpoint_w1(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_m = 1.0 / static_cast<double>(m);
    std::size_t i = 0;
    std::size_t j = 0;
    double distance = 0.0;
    double comp = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    while (i < n || j < m) {
        double t;
        if (i < n && (j >= m || a[i] <= b[j])) {
            t = a[i];
        } else {
            t = b[j];
        }
        if (have_prev) {
            const double gap =
                std::abs(static_cast<double>(i) * inv_n - static_cast<double>(j) * inv_m) *
                (t - prev);
            const double y = gap - comp;
            const double s = distance + y;
            comp = (s - distance) - y;
            distance = s;
        }
        while (i < n && a[i] == t) ++i;
        while (j < m && b[j] == t) ++j;
        prev = t;
        have_prev = true;
    }
    return distance;
}

} // namespace

double wasserstein1_sorted(std::span<const double> sorted_a,
                           std::span<const double> sorted_b) {
    if (sorted_a.empty() || sorted_b.empty()) {
        throw ArgumentError("wasserstein1: inputs must be non-empty");
    }
    return breakpoint_w1(sorted_a, sorted_b);
}

WassersteinResult wasserstein1(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw ArgumentError("wasserstein1: inputs must be non-empty");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    WassersteinResult result;
    result.distance = breakpoint_w1(sa, sb);
    result.n_left = a.size();
    result.n_right = b.size();
    result.method = W1Method::EmpiricalEmpirical;
    return result;
}

WassersteinResult wasserstein1(const SampleSet& a, const SampleSet& b) {
    return wasserstein1(a.span(), b.span());
}

double wasserstein1_discrete_sorted(const dirac::DiracMixture& d,
                                    std::span<const double> sorted_b) {
    if (sorted_b.empty()) {
        throw ArgumentError("wasserstein1_discrete: samples must be non-empty");
    }
    const auto& atoms = d.atoms();
    const std::size_t n = atoms.size();
    const std::size_t m = sorted_b.size();
    const double inv_m = 1.0 / static_cast<double>(m);

    std::size_t i = 0;
    std::size_t j = 0;
    double mass_cum = 0.0;
    double mass_comp = 0.0;
    double distance = 0.0;
    double comp = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    while (i < n || j < m) {
        double t;
        if (i < n && (j >= m || atoms[i].position <= sorted_b[j])) {
            t = atoms[i].position;
        } else {
            t = sorted_b[j];
        }
        if (have_prev) {
            const double gap =
                std::abs(mass_cum - static_cast<double>(j) * inv_m) * (t - prev);
            const double y = gap - comp;
            const double s = distance + y;
            comp = (s - distance) - y;
            distance = s;
        }
        while (i < n && atoms[i].position == t) {
            const double y = atoms[i].mass - mass_comp;
            const double s = mass_cum + y;
            mass_comp = (s - mass_cum) - y;
            mass_cum = s;
            ++i;
        }
        while (j < m && sorted_b[j] == t) ++j;
        prev = t;
        have_prev = true;
    }
    return distance;
}

WassersteinResult wasserstein1_discrete(const dirac::DiracMixture& d, const SampleSet& b) {
    if (b.values.empty()) {
        throw ArgumentError("wasserstein1_discrete: samples must be non-empty");
    }
    std::vector<double> sorted(b.values);
    std::sort(sorted.begin(), sorted.end());
    WassersteinResult result;
    result.distance = wasserstein1_discrete_sorted(d, sorted);
    result.n_left = d.size();
    result.n_right = b.size();
    result.method = W1Method::DiscreteEmpirical;
    return result;
}

std::uint64_t monotonic_ns() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

TimerSpan time_block(const std::function<void()>& work) {
    TimerSpan span;
    span.start_ns = monotonic_ns();
    work();
    span.end_ns = monotonic_ns();
    return span;
}

RepetitionSummary summarize(const std::vector<RunRecord>& records) {
    if (records.size() < 2) {
        throw ArgumentError("summarize: need at least 2 records");
    }
    RepetitionSummary summary;
    summary.records = records;
    summary.count = records.size();
    const double n = static_cast<double>(records.size());
    double w1_sum = 0.0;
    double time_sum = 0.0;
    for (const RunRecord& rec : records) {
        w1_sum += rec.wasserstein;
        time_sum += rec.runtime_ms;
    }
    summary.w1_mean = w1_sum / n;
    summary.time_mean = time_sum / n;
    double w1_sq = 0.0;
    double time_sq = 0.0;
    for (const RunRecord& rec : records) {
        w1_sq += (rec.wasserstein - summary.w1_mean) * (rec.wasserstein - summary.w1_mean);
        time_sq += (rec.runtime_ms - summary.time_mean) * (rec.runtime_ms - summary.time_mean);
    }
    summary.w1_std = std::sqrt(w1_sq / (n - 1.0));
    summary.time_std = std::sqrt(time_sq / (n - 1.0));
    return summary;
}

void write_records_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_records_csv: cannot open " + path);
    }
    out << kRecordCsvHeader << "\n";
    char buf[64];
    for (const RunRecord& rec : records) {
        out << rec.app << "," << rec.method << "," << rec.param << "," << rec.repetition
            << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", rec.wasserstein);
        out << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.6f", rec.runtime_ms);
        out << buf << "," << rec.seed << "\n";
    }
    if (!out) {
        throw IoError("write_records_csv: write failed for " + path);
    }
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("read_records_csv: cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kRecordCsvHeader) {
        throw ArgumentError("read_records_csv: schema mismatch in " + path);
    }
    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        RunRecord rec;
        try {
            std::getline(row, rec.app, ',');
            std::getline(row, rec.method, ',');
            std::getline(row, field, ',');
            rec.param = std::stoull(field);
            std::getline(row, field, ',');
            rec.repetition = static_cast<std::uint32_t>(std::stoul(field));
            std::getline(row, field, ',');
            rec.wasserstein = std::stod(field);
            std::getline(row, field, ',');
            rec.runtime_ms = std::stod(field);
            std::getline(row, field, ',');
            rec.seed = std::stoull(field);
        } catch (const std::exception&) {
            throw ArgumentError("read_records_csv: bad row in " + path + ": " + line);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("fnv1a64_file: cannot open " + path);
    }
    std::uint64_t hash = 14695981039346656037ULL;
    char buffer[65536];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            hash ^= static_cast<unsigned char>(buffer[k]);
            hash *= 1099511628211ULL;
        }
    }
    return hash;
}

GroundTruthCache::GroundTruthCache(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string GroundTruthCache::path_for(const std::string& app, std::uint64_t seed,
                                       std::uint64_t n) const {
    std::ostringstream name;
    name << dir_ << "/gt_" << app << "_s" << seed << "_n" << n << "_v" << kVersion
         << ".csv";
    return name.str();
}

SampleSet GroundTruthCache::get(const std::string& app, std::uint64_t seed,
                                std::uint64_t n,
                                const std::function<SampleSet()>& generate) {
    const std::string path = path_for(app, seed, n);
    const std::string sidecar = path + ".fnv";
    if (std::filesystem::exists(path) && std::filesystem::exists(sidecar)) {
        std::ifstream side(sidecar);
        std::uint64_t recorded = 0;
        if (side >> std::hex >> recorded) {
            if (recorded == fnv1a64_file(path)) {
                SampleSet cached = read_samples_csv(path);
                if (cached.size() == n) {
                    return cached;
                }
            }
        }
        // Corrupt or stale cache entry: fall through and regenerate.
    }
    SampleSet fresh = generate();
    if (fresh.size() != n) {
        throw NumericError("ground truth generator returned wrong sample count");
    }
    write_samples_csv(fresh, path);
    std::ofstream side(sidecar);
    if (!side) {
        throw IoError("ground truth cache: cannot write " + sidecar);
    }
    side << std::hex << fnv1a64_file(path) << "\n";
    return fresh;
}

} // namespace uprop::metrics
