/* C API for the uncertainty-propagation library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible function returns a uprop_status; on failure,
 * uprop_last_error() returns a thread-local description of what went wrong.
 * Status values match the CLI exit codes: 2 for argument/config errors,
 * 3 for numerical/propagation errors.
 */
#ifndef UPROP_H
#define UPROP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uprop_status {
    UPROP_OK = 0,
    UPROP_ERR_ARGUMENT = 2,
    UPROP_ERR_NUMERIC = 3,
    UPROP_ERR_IO = 4,
} uprop_status;

const char* uprop_version(void);

/* Thread-local message describing the most recent failure in this thread. */
const char* uprop_last_error(void);

typedef struct uprop_dist uprop_dist;
typedef struct uprop_rng uprop_rng;
typedef struct uprop_samples uprop_samples;
typedef struct uprop_dirac uprop_dirac;

/* ---- distributions ---- */

uprop_status uprop_dist_uniform(double lower, double upper, uprop_dist** out);
uprop_status uprop_dist_gaussian(double mean, double stddev, uprop_dist** out);
uprop_status uprop_dist_gaussian_mixture(const double* weights, const double* means,
                                         const double* stddevs, size_t count,
                                         uprop_dist** out);
uprop_status uprop_dist_bernoulli(double p, uprop_dist** out);

/* Key-value config line, e.g. "kind=gaussian mean=0 std=1". */
uprop_status uprop_dist_parse(const char* config, uprop_dist** out);
uprop_status uprop_dist_format(const uprop_dist* dist, char* buffer, size_t buffer_len);

uprop_status uprop_dist_pdf(const uprop_dist* dist, double x, double* out);
uprop_status uprop_dist_cdf(const uprop_dist* dist, double x, double* out);
uprop_status uprop_dist_icdf(const uprop_dist* dist, double u, double* out);
uprop_status uprop_dist_mean(const uprop_dist* dist, double* out);
uprop_status uprop_dist_variance(const uprop_dist* dist, double* out);
void uprop_dist_free(uprop_dist* dist);

/* ---- rng and sampling ---- */

/* algorithm: "xoshiro256++" or "splitmix64"; NULL selects the default. */
uprop_status uprop_rng_new(const char* algorithm, uint64_t seed, uprop_rng** out);
void uprop_rng_free(uprop_rng* rng);

uprop_status uprop_sample_uniform(uprop_rng* rng, size_t n, uprop_samples** out);
uprop_status uprop_sample_gaussian(uprop_rng* rng, double mean, double stddev, size_t n,
                                   uprop_samples** out);
/* Inverse transform sampling from a distribution descriptor. */
uprop_status uprop_sample_icdf(uprop_rng* rng, const uprop_dist* dist, size_t n,
                               uprop_samples** out);

size_t uprop_samples_size(const uprop_samples* samples);
const double* uprop_samples_data(const uprop_samples* samples);
uprop_status uprop_samples_mean_variance(const uprop_samples* samples, double* mean,
                                         double* variance);
uprop_status uprop_samples_write_csv(const uprop_samples* samples, const char* path);
uprop_status uprop_samples_read_csv(const char* path, uprop_samples** out);
void uprop_samples_free(uprop_samples* samples);

/* ---- fixed-size distributional arithmetic ---- */

uprop_status uprop_dirac_from_dist(const uprop_dist* dist, size_t r, uprop_dirac** out);
size_t uprop_dirac_size(const uprop_dirac* d);
uprop_status uprop_dirac_moments(const uprop_dirac* d, double* mean, double* variance);
uprop_status uprop_dirac_sample(const uprop_dirac* d, uprop_rng* rng, size_t n,
                                uprop_samples** out);
uprop_status uprop_dirac_write_csv(const uprop_dirac* d, const char* path);
void uprop_dirac_free(uprop_dirac* d);

/* ---- metrics ---- */

uprop_status uprop_wasserstein1(const uprop_samples* a, const uprop_samples* b,
                                double* out);
uprop_status uprop_wasserstein1_discrete(const uprop_dirac* d, const uprop_samples* b,
                                         double* out);

/* ---- benchmark harness ---- */

typedef struct uprop_run_config {
    const char* app;    /* convergence-challenge | poiseuille | buffon */
    const char* method; /* monte-carlo | dirac-prop | spot | grappa */
    const uint64_t* params;
    size_t n_params;
    uint32_t repetitions; /* 0 selects the default of 30 */
    uint64_t seed;
    const char* out_dir; /* NULL selects "out" */
    double delay_s;
    uint64_t gt_samples; /* 0 selects the default of 1000000 */
} uprop_run_config;

/* Runs the experiment grid and writes the records CSV; csv_path_buf (may be
 * NULL) receives the CSV path. */
uprop_status uprop_run_experiment(const uprop_run_config* config, char* csv_path_buf,
                                  size_t csv_path_len);

uprop_status uprop_report(const char* const* csv_paths, size_t n_paths,
                          const char* out_dir);

uprop_status uprop_buffon(uint64_t seed, uint64_t n, double* estimate);

uprop_status uprop_plot_pushforward(const char* app, const char* out_path);

typedef struct uprop_pprvg_fit_report {
    uint32_t k;
    double basis_orthonormality_error;
    double basis_condition_estimate;
    double fit_residual;
    double monotonicity_defect;
    double grappa_w1;
    double sampling_noise_floor;
    int spot_supported;
    double spot_w1;
    uint64_t samples;
} uprop_pprvg_fit_report;

uprop_status uprop_pprvg_fit(const char* target, uint32_t k, uint64_t seed,
                             uint64_t samples, uprop_pprvg_fit_report* out);

/* Generates (or loads from cache) the Monte Carlo ground truth for an app
 * and reports the CSV path. */
uprop_status uprop_ground_truth(const char* app, uint64_t seed, uint64_t n,
                                const char* out_dir, char* path_buf, size_t path_len);

#ifdef __cplusplus
}
#endif

#endif /* UPROP_H */
