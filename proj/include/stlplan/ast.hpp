#pragma once

// Bounded-horizon STL formulas over region-membership atoms.
//
// Nodes are immutable after construction and shared through
// std::shared_ptr<const Formula>, so formulas behave as values and are safe
// to evaluate concurrently. And/Or are n-ary: chains written at one
// precedence level parse into a single node with ordered children.

#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stlplan {

struct TimeInterval {
    int a = 0;
    int b = 0;
};

inline void validate_interval(const TimeInterval& iv) {
    if (iv.a < 0 || iv.b < 0) {
        throw std::invalid_argument("time interval bounds must be non-negative");
    }
    if (iv.a > iv.b) {
        throw std::invalid_argument("time interval requires a <= b");
    }
}

enum class NodeKind {
    Atom,        // in(REGION)
    Not,
    And,
    Or,
    Eventually,  // F[a,b]
    Always,      // G[a,b]
    Until        // U[a,b]
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    NodeKind kind;
    std::string region;               // Atom only
    TimeInterval interval;            // temporal operators only
    std::vector<FormulaPtr> children;

    static FormulaPtr atom(std::string region_name) {
        if (region_name.empty()) {
            throw std::invalid_argument("atom requires a non-empty region name");
        }
        return make(NodeKind::Atom, std::move(region_name), {}, {});
    }

    static FormulaPtr negation(FormulaPtr f) {
        require(f);
        return make(NodeKind::Not, {}, {}, {std::move(f)});
    }

    static FormulaPtr conjunction(std::vector<FormulaPtr> parts) {
        require_children(parts, "conjunction");
        if (parts.size() == 1) {
            return parts.front();
        }
        return make(NodeKind::And, {}, {}, std::move(parts));
    }

    static FormulaPtr disjunction(std::vector<FormulaPtr> parts) {
        require_children(parts, "disjunction");
        if (parts.size() == 1) {
            return parts.front();
        }
        return make(NodeKind::Or, {}, {}, std::move(parts));
    }

    static FormulaPtr eventually(TimeInterval iv, FormulaPtr f) {
        validate_interval(iv);
        require(f);
        return make(NodeKind::Eventually, {}, iv, {std::move(f)});
    }

    static FormulaPtr always(TimeInterval iv, FormulaPtr f) {
        validate_interval(iv);
        require(f);
        return make(NodeKind::Always, {}, iv, {std::move(f)});
    }

    static FormulaPtr until(TimeInterval iv, FormulaPtr lhs, FormulaPtr rhs) {
        validate_interval(iv);
        require(lhs);
        require(rhs);
        return make(NodeKind::Until, {}, iv, {std::move(lhs), std::move(rhs)});
    }

    bool is_temporal() const {
        return kind == NodeKind::Eventually || kind == NodeKind::Always ||
               kind == NodeKind::Until;
    }

private:
    static FormulaPtr make(NodeKind k, std::string region, TimeInterval iv,
                           std::vector<FormulaPtr> children) {
        auto node = std::make_shared<Formula>();
        node->kind = k;
        node->region = std::move(region);
        node->interval = iv;
        node->children = std::move(children);
        return node;
    }

    static void require(const FormulaPtr& f) {
        if (!f) {
            throw std::invalid_argument("null subformula");
        }
    }

    static void require_children(const std::vector<FormulaPtr>& parts, const char* what) {
        if (parts.empty()) {
            throw std::invalid_argument(std::string(what) + " requires at least one child");
        }
        for (const auto& p : parts) {
            require(p);
        }
    }
};

inline std::size_t node_count(const FormulaPtr& f) {
    std::size_t n = 1;
    for (const auto& c : f->children) {
        n += node_count(c);
    }
    return n;
}

inline bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind != b->kind || a->region != b->region ||
        a->interval.a != b->interval.a || a->interval.b != b->interval.b ||
        a->children.size() != b->children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!structurally_equal(a->children[i], b->children[i])) {
            return false;
        }
    }
    return true;
}

namespace detail {

// Precedence levels of the concrete grammar, used to decide parenthesization
// when rendering: expr(|) < term(&) < factor.
inline void render_node(const FormulaPtr& f, std::ostream& os, int parent_level) {
    const auto wrap_if = [&](int level, auto&& body) {
        const bool parens = level < parent_level;
        if (parens) os << '(';
        body();
        if (parens) os << ')';
    };
    switch (f->kind) {
        case NodeKind::Atom:
            os << "in(" << f->region << ")";
            break;
        case NodeKind::Not:
            os << '!';
            render_node(f->children[0], os, 2);
            break;
        case NodeKind::Or:
            wrap_if(0, [&] {
                for (std::size_t i = 0; i < f->children.size(); ++i) {
                    if (i) os << " | ";
                    render_node(f->children[i], os, 1);
                }
            });
            break;
        case NodeKind::And:
            wrap_if(1, [&] {
                for (std::size_t i = 0; i < f->children.size(); ++i) {
                    if (i) os << " & ";
                    render_node(f->children[i], os, 2);
                }
            });
            break;
        case NodeKind::Eventually:
        case NodeKind::Always:
            os << (f->kind == NodeKind::Eventually ? 'F' : 'G') << '[' << f->interval.a
               << ',' << f->interval.b << "](";
            render_node(f->children[0], os, 0);
            os << ')';
            break;
        case NodeKind::Until:
            os << "U[" << f->interval.a << ',' << f->interval.b << "](";
            render_node(f->children[0], os, 0);
            os << ", ";
            render_node(f->children[1], os, 0);
            os << ')';
            break;
    }
}

}  // namespace detail

// Canonical concrete syntax; render(parse(s)) reparses to a structurally
// identical formula.
inline std::string render(const FormulaPtr& f) {
    std::ostringstream os;
    detail::render_node(f, os, 0);
    return os.str();
}

}  // namespace stlplan
