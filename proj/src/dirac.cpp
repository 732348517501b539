#include "uprop/dirac.hpp"

#include "uprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace uprop::dirac {

namespace {

void kahan_add(double value, double& sum, double& comp) {
    const double y = value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

} // namespace

DiracMixture::DiracMixture(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) {
        throw ArgumentError("dirac mixture: needs at least one atom");
    }
    double mass = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!(atoms_[i].mass > 0.0)) {
            throw ArgumentError("dirac mixture: masses must be strictly positive");
        }
        if (!std::isfinite(atoms_[i].position)) {
            throw ArgumentError("dirac mixture: positions must be finite");
        }
        if (i > 0 && atoms_[i].position < atoms_[i - 1].position) {
            throw ArgumentError("dirac mixture: positions must be nondecreasing");
        }
        kahan_add(atoms_[i].mass, mass, comp);
    }
    if (std::abs(mass - 1.0) > 1e-12) {
        throw ArgumentError("dirac mixture: masses must sum to 1 within 1e-12");
    }
}

double DiracMixture::mean() const {
    double sum = 0.0;
    double comp = 0.0;
    for (const Atom& atom : atoms_) {
        kahan_add(atom.mass * atom.position, sum, comp);
    }
    return sum;
}

double DiracMixture::variance() const {
    const double mu = mean();
    double sum = 0.0;
    double comp = 0.0;
    for (const Atom& atom : atoms_) {
        const double d = atom.position - mu;
        kahan_add(atom.mass * d * d, sum, comp);
    }
    return sum;
}

DiracMixture from_dist(const Dist& dist, std::size_t r) {
    return from_quantiles([&dist](double u) { return dist.icdf(u); }, r);
}

DiracMixture from_quantiles(const std::function<double(double)>& quantile, std::size_t r) {
    if (r < 2) {
        throw ArgumentError("from_dist: representation size must be >= 2");
    }
    std::vector<Atom> atoms;
    atoms.reserve(r);
    const double mass = 1.0 / static_cast<double>(r);
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= r; ++i) {
        const double u = (static_cast<double>(i) - 0.5) / static_cast<double>(r);
        double position = quantile(u);
        // Guard against tiny non-monotonic wiggle from iterative quantile
        // solvers so the representation invariant holds exactly.
        if (position < prev) {
            position = prev;
        }
        atoms.push_back({position, mass});
        prev = position;
    }
    return DiracMixture(std::move(atoms));
}

DiracMixture apply_unary(const DiracMixture& d, const Transform& t) {
    std::vector<Atom> atoms;
    atoms.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Atom& atom = d.atoms()[i];
        const double mapped = t(atom.position);
        if (!std::isfinite(mapped)) {
            std::ostringstream msg;
            msg << "apply_unary[" << t.name() << "]: non-finite image of atom " << i
                << " at position " << atom.position;
            throw NumericError(msg.str());
        }
        atoms.push_back({mapped, atom.mass});
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.position < b.position; });
    return DiracMixture(std::move(atoms));
}

DiracMixture apply_power(const DiracMixture& d, int exponent) {
    return apply_unary(d, transforms::power_int(exponent));
}

DiracMixture combine(const DiracMixture& lhs, const DiracMixture& rhs, BinaryOp op,
                     std::size_t r) {
    if (op == BinaryOp::Div) {
        for (const Atom& atom : rhs.atoms()) {
            if (atom.position == 0.0) {
                throw NumericError("combine: division by an atom at zero");
            }
        }
    }
    std::vector<Atom> product;
    product.reserve(lhs.size() * rhs.size());
    for (const Atom& a : lhs.atoms()) {
        for (const Atom& b : rhs.atoms()) {
            double position = 0.0;
            switch (op) {
            case BinaryOp::Add: position = a.position + b.position; break;
            case BinaryOp::Sub: position = a.position - b.position; break;
            case BinaryOp::Mul: position = a.position * b.position; break;
            case BinaryOp::Div: position = a.position / b.position; break;
            }
            if (!std::isfinite(position)) {
                throw NumericError("combine: non-finite product atom");
            }
            product.push_back({position, a.mass * b.mass});
        }
    }
    return requantize(std::move(product), r);
}

DiracMixture requantize(std::vector<Atom> atoms, std::size_t r) {
    if (atoms.empty()) {
        throw ArgumentError("requantize: empty atom list");
    }
    if (r < 1) {
        throw ArgumentError("requantize: target size must be >= 1");
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.position < b.position; });

    // Fixed point: an already equal-mass list of exactly r atoms passes
    // through unchanged.
    if (atoms.size() == r) {
        bool equal_mass = true;
        for (const Atom& atom : atoms) {
            if (atom.mass != atoms.front().mass) {
                equal_mass = false;
                break;
            }
        }
        if (equal_mass) {
            return DiracMixture(std::move(atoms));
        }
    }

    double total = 0.0;
    double total_comp = 0.0;
    for (const Atom& atom : atoms) {
        kahan_add(atom.mass, total, total_comp);
    }

    std::vector<Atom> out;
    out.reserve(r);
    double cumulative = 0.0;
    double cumulative_comp = 0.0;
    std::size_t bucket = 0;
    double bucket_mass = 0.0;
    double bucket_wsum = 0.0;
    double bucket_wsum_comp = 0.0;
    std::size_t bucket_pieces = 0;
    double single_position = 0.0;
    const double out_mass = total / static_cast<double>(r);

    auto flush_bucket = [&]() {
        double position;
        if (bucket_pieces == 1) {
            position = single_position; // exact when a bucket holds one piece
        } else {
            position = bucket_wsum / bucket_mass;
        }
        // Bucket means of a sorted walk are nondecreasing; clamp the 1-ulp
        // division wiggle so the representation invariant holds bitwise.
        if (!out.empty() && position < out.back().position) {
            position = out.back().position;
        }
        out.push_back({position, out_mass});
        ++bucket;
        bucket_mass = 0.0;
        bucket_wsum = 0.0;
        bucket_wsum_comp = 0.0;
        bucket_pieces = 0;
    };

    for (const Atom& atom : atoms) {
        double remaining = atom.mass;
        while (remaining > 0.0) {
            if (bucket >= r) {
                // Rounding pushed a residual sliver past the last boundary;
                // fold it into the final bucket.
                Atom& last = out.back();
                const double merged = last.mass + remaining;
                last.position =
                    (last.position * last.mass + atom.position * remaining) / merged;
                remaining = 0.0;
                break;
            }
            const double boundary =
                total * (static_cast<double>(bucket + 1) / static_cast<double>(r));
            const double room = boundary - cumulative;
            if (room <= 0.0) {
                if (bucket_pieces == 0) {
                    single_position = atom.position;
                    bucket_pieces = 1;
                }
                flush_bucket();
                continue;
            }
            const double take = std::min(remaining, room);
            kahan_add(take, cumulative, cumulative_comp);
            bucket_mass += take;
            kahan_add(atom.position * take, bucket_wsum, bucket_wsum_comp);
            if (bucket_pieces == 0) {
                single_position = atom.position;
            }
            ++bucket_pieces;
            remaining -= take;
            if (take == room || cumulative >= boundary) {
                flush_bucket();
            }
        }
    }
    if (bucket_pieces > 0 && bucket < r) {
        flush_bucket();
    }
    // Numerical shortfall can leave trailing buckets unfilled; repeat the
    // last position so the count is exactly r.
    while (out.size() < r) {
        out.push_back({out.back().position, out_mass});
    }
    return DiracMixture(std::move(out));
}

SummaryStats moments(const DiracMixture& d) {
    SummaryStats stats;
    stats.mean = d.mean();
    stats.variance = d.variance();
    stats.count = d.size();
    return stats;
}

SampleSet sample_repr(const DiracMixture& d, Rng& rng, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("sample_repr: n must be >= 1");
    }
    std::vector<double> cumulative;
    cumulative.reserve(d.size());
    double acc = 0.0;
    double comp = 0.0;
    for (const Atom& atom : d.atoms()) {
        kahan_add(atom.mass, acc, comp);
        cumulative.push_back(acc);
    }
    cumulative.back() = 1.0;

    SampleSet samples;
    samples.provenance = Provenance{rng.algorithm(), rng.seed(),
                                    "dirac(r=" + std::to_string(d.size()) + ")"};
    samples.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.next_double();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t idx =
            std::min<std::size_t>(it - cumulative.begin(), d.size() - 1);
        samples.values.push_back(d.atoms()[idx].position);
    }
    return samples;
}

namespace {

struct EvalContext {
    const std::map<std::string, DiracMixture>& inputs;
    std::size_t r;
    std::vector<std::string>* warnings;
};

DiracMixture eval_node(const Expr::Node& node, const EvalContext& ctx,
                       const std::string& path) {
    auto child_path = [&path](const char* tag) {
        return path.empty() ? std::string(tag) : path + "." + tag;
    };
    try {
        switch (node.op) {
        case Expr::Op::Constant: {
            // A degenerate distribution; binary ops against it re-quantize
            // back to r at no accuracy cost.
            std::vector<Atom> atoms{{node.value, 1.0}};
            return DiracMixture(std::move(atoms));
        }
        case Expr::Op::Input: {
            const auto it = ctx.inputs.find(node.name);
            if (it == ctx.inputs.end()) {
                throw ArgumentError("eval_expr: unbound input '" + node.name + "'");
            }
            return it->second;
        }
        case Expr::Op::Add:
        case Expr::Op::Sub:
        case Expr::Op::Mul:
        case Expr::Op::Div: {
            const DiracMixture lhs = eval_node(*node.children[0], ctx, child_path("lhs"));
            const DiracMixture rhs = eval_node(*node.children[1], ctx, child_path("rhs"));
            BinaryOp op = BinaryOp::Add;
            if (node.op == Expr::Op::Sub) op = BinaryOp::Sub;
            if (node.op == Expr::Op::Mul) op = BinaryOp::Mul;
            if (node.op == Expr::Op::Div) op = BinaryOp::Div;
            if (op == BinaryOp::Div && node.check_divisor_support) {
                const auto& atoms = rhs.atoms();
                if (atoms.front().position <= 0.0 && atoms.back().position >= 0.0) {
                    throw NumericError(
                        "eval_expr: divisor support includes zero at node " +
                        (path.empty() ? std::string("div") : path));
                }
            }
            return combine(lhs, rhs, op, ctx.r);
        }
        case Expr::Op::PowInt:
            return apply_power(eval_node(*node.children[0], ctx, child_path("arg")),
                               node.exponent);
        case Expr::Op::Exp:
            return apply_unary(eval_node(*node.children[0], ctx, child_path("arg")),
                               transforms::exponential());
        case Expr::Op::Neg:
            return apply_unary(eval_node(*node.children[0], ctx, child_path("arg")),
                               transforms::affine(-1.0, 0.0));
        case Expr::Op::Affine:
            return apply_unary(eval_node(*node.children[0], ctx, child_path("arg")),
                               transforms::affine(node.scale, node.shift));
        case Expr::Op::Apply:
            return apply_unary(eval_node(*node.children[0], ctx, child_path("arg")),
                               *node.transform);
        }
        throw ArgumentError("eval_expr: unknown node");
    } catch (NumericError& err) {
        if (path.empty()) {
            throw;
        }
        throw NumericError(std::string(err.what()) + " [at " + path + "]");
    }
}

} // namespace

DiracMixture eval_expr(const Expr& expr, const std::map<std::string, DiracMixture>& inputs,
                       std::size_t r, std::vector<std::string>* warnings) {
    if (r < 2) {
        throw ArgumentError("eval_expr: representation size must be >= 2");
    }
    // No correlation tracking: repeated references to one input behave as
    // independent copies, which is usually not what the model means.
    for (const auto& [name, count] : expr.input_references()) {
        if (count > 1 && warnings != nullptr) {
            warnings->push_back("input '" + name + "' referenced " +
                                std::to_string(count) +
                                " times; uses are combined as independent");
        }
    }
    EvalContext ctx{inputs, r, warnings};
    return eval_node(expr.node(), ctx, "");
}

void write_dirac_csv(const DiracMixture& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_dirac_csv: cannot open " + path);
    }
    out << "position,mass\n";
    char buf[96];
    for (const Atom& atom : d.atoms()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", atom.position, atom.mass);
        out << buf;
    }
    if (!out) {
        throw IoError("write_dirac_csv: write failed for " + path);
    }
}

DiracMixture read_dirac_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("read_dirac_csv: cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "position,mass") {
        throw IoError("read_dirac_csv: bad header in " + path);
    }
    std::vector<Atom> atoms;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError("read_dirac_csv: bad row in " + path + ": " + line);
        }
        try {
            atoms.push_back({std::stod(line.substr(0, comma)),
                             std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw IoError("read_dirac_csv: bad numeric row in " + path + ": " + line);
        }
    }
    return DiracMixture(std::move(atoms));
}

} // namespace uprop::dirac
