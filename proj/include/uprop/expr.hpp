#pragma once

#include "uprop/transform.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uprop {

/// Immutable expression DAG over named uncertain inputs. The same tree is
/// evaluated per-sample by the Monte Carlo engine and atom-wise by the
/// Dirac-mixture engine.
class Expr {
public:
    enum class Op {
        Constant,
        Input,
        Add,
        Sub,
        Mul,
        Div,
        PowInt,
        Exp,
        Neg,
        Affine,
        Apply,
    };

    struct Node {
        Op op;
        std::vector<std::shared_ptr<const Node>> children;
        double value = 0.0;       // Constant
        std::string name;         // Input
        int exponent = 0;         // PowInt
        double scale = 1.0;       // Affine
        double shift = 0.0;       // Affine
        std::optional<Transform> transform; // Apply
        bool check_divisor_support = true;  // Div
    };

    static Expr constant(double value);
    static Expr input(std::string name);
    static Expr add(const Expr& lhs, const Expr& rhs);
    static Expr sub(const Expr& lhs, const Expr& rhs);
    static Expr mul(const Expr& lhs, const Expr& rhs);
    static Expr div(const Expr& lhs, const Expr& rhs, bool check_divisor_support = true);
    static Expr pow_int(const Expr& base, int exponent);
    static Expr exp(const Expr& arg);
    static Expr neg(const Expr& arg);
    static Expr affine(const Expr& arg, double scale, double shift);
    static Expr apply(const Expr& arg, Transform transform);

    const Node& node() const { return *node_; }
    std::shared_ptr<const Node> root() const { return node_; }

    /// Names of the Input leaves, in first-occurrence order, one entry per
    /// distinct name; counts record how often each name is referenced.
    std::vector<std::pair<std::string, std::size_t>> input_references() const;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Expression flattened to a postorder program over input slots, for fast
/// per-sample evaluation. Input order fixes the slot layout.
class CompiledExpr {
public:
    CompiledExpr(const Expr& expr, const std::vector<std::string>& input_names);

    /// Evaluates with one scalar per input slot (same order as input_names).
    double eval(std::span<const double> inputs) const;

    std::size_t input_count() const { return input_count_; }

private:
    struct Step {
        Expr::Op op;
        double value;
        std::size_t slot;
        int exponent;
        double scale;
        double shift;
        std::size_t transform_index;
    };
    std::vector<Step> steps_;
    std::vector<Transform> transforms_;
    std::size_t input_count_;
    std::size_t stack_size_;
};

} // namespace uprop
