#pragma once

#include "uprop/dist.hpp"
#include "uprop/expr.hpp"
#include "uprop/rng.hpp"
#include "uprop/samples.hpp"
#include "uprop/transform.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace uprop::dirac {

struct Atom {
    double position;
    double mass;
};

/// Fixed-size weighted-atom representation of a distribution: positions
/// nondecreasing, masses positive and summing to 1. The atom count is the
/// representation size; every public operation returns a mixture at its
/// configured size, so memory stays O(r) no matter how long the expression.
class DiracMixture {
public:
    explicit DiracMixture(std::vector<Atom> atoms);

    std::size_t size() const { return atoms_.size(); }
    const std::vector<Atom>& atoms() const { return atoms_; }

    double mean() const;
    double variance() const;

private:
    std::vector<Atom> atoms_;
};

enum class BinaryOp { Add, Sub, Mul, Div };

/// r equal-mass atoms at the midpoint quantiles icdf((i - 0.5) / r).
DiracMixture from_dist(const Dist& dist, std::size_t r);

/// Midpoint-quantile discretization of an arbitrary quantile function.
DiracMixture from_quantiles(const std::function<double(double)>& quantile, std::size_t r);

/// Pushforward of the discrete measure: positions mapped through f, masses
/// kept, atoms re-sorted (f need not be monotone). Exact for monotone f.
DiracMixture apply_unary(const DiracMixture& d, const Transform& t);

/// Dedicated unary power (positions raised elementwise); exact for powers of
/// a single operand, with no independence assumption.
DiracMixture apply_power(const DiracMixture& d, int exponent);

/// Independent combination: all r1*r2 pairwise atoms, re-quantized to r.
DiracMixture combine(const DiracMixture& lhs, const DiracMixture& rhs, BinaryOp op,
                     std::size_t r);

/// Reduces a transient atom list to r equal-mass atoms. Atoms are stably
/// sorted by position, the discrete CDF is walked into r buckets of equal
/// mass (splitting atoms across bucket boundaries), and each bucket outputs
/// its mass-weighted mean position. Total mass and mean are conserved.
DiracMixture requantize(std::vector<Atom> atoms, std::size_t r);

/// Weighted mean/variance of the atoms (count = representation size).
SummaryStats moments(const DiracMixture& d);

/// Inverse-transform sampling on the discrete CDF.
SampleSet sample_repr(const DiracMixture& d, Rng& rng, std::size_t n);

/// Bottom-up evaluation of an expression DAG over named mixtures,
/// re-quantizing to r after every binary node. Deterministic: identical
/// inputs give bit-identical outputs. An input referenced more than once is
/// combined as if independent; a warning is emitted for each such input.
DiracMixture eval_expr(const Expr& expr, const std::map<std::string, DiracMixture>& inputs,
                       std::size_t r, std::vector<std::string>* warnings = nullptr);

/// Two-column CSV (position, mass); deterministic formatting.
void write_dirac_csv(const DiracMixture& d, const std::string& path);
DiracMixture read_dirac_csv(const std::string& path);

} // namespace uprop::dirac
