#include "uprop/expr.hpp"

#include "uprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace uprop {

namespace {

std::shared_ptr<const Expr::Node> make_node(Expr::Node node) {
    return std::make_shared<const Expr::Node>(std::move(node));
}

} // namespace

Expr Expr::constant(double value) {
    Node node{Op::Constant, {}, value, {}, 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::input(std::string name) {
    if (name.empty()) {
        throw ArgumentError("expr: input name must be non-empty");
    }
    Node node{Op::Input, {}, 0.0, std::move(name), 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::add(const Expr& lhs, const Expr& rhs) {
    Node node{Op::Add, {lhs.node_, rhs.node_}, 0.0, {}, 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::sub(const Expr& lhs, const Expr& rhs) {
    Node node{Op::Sub, {lhs.node_, rhs.node_}, 0.0, {}, 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::mul(const Expr& lhs, const Expr& rhs) {
    Node node{Op::Mul, {lhs.node_, rhs.node_}, 0.0, {}, 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::div(const Expr& lhs, const Expr& rhs, bool check_divisor_support) {
    Node node{Op::Div, {lhs.node_, rhs.node_}, 0.0, {}, 0, 1.0, 0.0, std::nullopt,
              check_divisor_support};
    return Expr(make_node(std::move(node)));
}

Expr Expr::pow_int(const Expr& base, int exponent) {
    if (exponent < 1) {
        throw ArgumentError("expr: pow_int exponent must be >= 1");
    }
    Node node{Op::PowInt, {base.node_}, 0.0, {}, exponent, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::exp(const Expr& arg) {
    Node node{Op::Exp, {arg.node_}, 0.0, {}, 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::neg(const Expr& arg) {
    Node node{Op::Neg, {arg.node_}, 0.0, {}, 0, 1.0, 0.0, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::affine(const Expr& arg, double scale, double shift) {
    Node node{Op::Affine, {arg.node_}, 0.0, {}, 0, scale, shift, std::nullopt, true};
    return Expr(make_node(std::move(node)));
}

Expr Expr::apply(const Expr& arg, Transform transform) {
    Node node{Op::Apply, {arg.node_}, 0.0, {}, 0, 1.0, 0.0, std::move(transform), true};
    return Expr(make_node(std::move(node)));
}

std::vector<std::pair<std::string, std::size_t>> Expr::input_references() const {
    std::vector<std::pair<std::string, std::size_t>> refs;
    std::function<void(const Node&)> walk = [&](const Node& node) {
        if (node.op == Op::Input) {
            auto it = std::find_if(refs.begin(), refs.end(),
                                   [&node](const auto& r) { return r.first == node.name; });
            if (it == refs.end()) {
                refs.emplace_back(node.name, 1);
            } else {
                ++it->second;
            }
        }
        for (const auto& child : node.children) {
            walk(*child);
        }
    };
    walk(*node_);
    return refs;
}

CompiledExpr::CompiledExpr(const Expr& expr, const std::vector<std::string>& input_names)
    : input_count_(input_names.size()) {
    std::unordered_map<std::string, std::size_t> slots;
    for (std::size_t i = 0; i < input_names.size(); ++i) {
        slots[input_names[i]] = i;
    }

    std::size_t depth = 0;
    std::size_t max_depth = 0;
    std::function<void(const Expr::Node&)> emit = [&](const Expr::Node& node) {
        for (const auto& child : node.children) {
            emit(*child);
        }
        Step step{node.op, node.value, 0, node.exponent, node.scale, node.shift, 0};
        switch (node.op) {
        case Expr::Op::Constant:
            ++depth;
            break;
        case Expr::Op::Input: {
            const auto it = slots.find(node.name);
            if (it == slots.end()) {
                throw ArgumentError("expr: unbound input '" + node.name + "'");
            }
            step.slot = it->second;
            ++depth;
            break;
        }
        case Expr::Op::Add:
        case Expr::Op::Sub:
        case Expr::Op::Mul:
        case Expr::Op::Div:
            --depth;
            break;
        default:
            if (node.op == Expr::Op::Apply) {
                transforms_.push_back(*node.transform);
                step.transform_index = transforms_.size() - 1;
            }
            break;
        }
        max_depth = std::max(max_depth, depth);
        steps_.push_back(step);
    };
    emit(expr.node());
    stack_size_ = max_depth + 1;
}

double CompiledExpr::eval(std::span<const double> inputs) const {
    if (inputs.size() != input_count_) {
        throw ArgumentError("expr eval: input slot count mismatch");
    }
    double stack[64];
    if (stack_size_ > 64) {
        throw ArgumentError("expr eval: expression too deep");
    }
    std::size_t top = 0;
    for (const Step& step : steps_) {
        switch (step.op) {
        case Expr::Op::Constant:
            stack[top++] = step.value;
            break;
        case Expr::Op::Input:
            stack[top++] = inputs[step.slot];
            break;
        case Expr::Op::Add:
            --top;
            stack[top - 1] += stack[top];
            break;
        case Expr::Op::Sub:
            --top;
            stack[top - 1] -= stack[top];
            break;
        case Expr::Op::Mul:
            --top;
            stack[top - 1] *= stack[top];
            break;
        case Expr::Op::Div:
            --top;
            stack[top - 1] /= stack[top];
            break;
        case Expr::Op::PowInt: {
            const double x = stack[top - 1];
            double acc = x;
            for (int i = 1; i < step.exponent; ++i) {
                acc *= x;
            }
            stack[top - 1] = acc;
            break;
        }
        case Expr::Op::Exp:
            stack[top - 1] = std::exp(stack[top - 1]);
            break;
        case Expr::Op::Neg:
            stack[top - 1] = -stack[top - 1];
            break;
        case Expr::Op::Affine:
            stack[top - 1] = step.scale * stack[top - 1] + step.shift;
            break;
        case Expr::Op::Apply:
            stack[top - 1] = transforms_[step.transform_index](stack[top - 1]);
            break;
        }
    }
    return stack[0];
}

} // namespace uprop
