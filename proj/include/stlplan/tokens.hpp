#pragma once

// Preorder linearization of a fragment formula into typed structural
// tokens. Token ids come from a small vocabulary: the four operator kinds
// get fixed ids, region names get ids in first-appearance order (the
// region vocabulary is open; ids are per-formula).
//
// Temporal tokens carry their own interval normalized by the horizon;
// every other token inherits the tightest enclosing temporal interval, or
// [0,1] when no temporal operator encloses it.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlplan/ast.hpp"
#include "stlplan/fragment.hpp"

namespace stlplan {

struct StructuralToken {
    int token_id = 0;
    double a_norm = 0.0;
    double b_norm = 1.0;
    int depth = 0;
};

inline constexpr int kTokenEventually = 0;
inline constexpr int kTokenAlways = 1;
inline constexpr int kTokenAnd = 2;
inline constexpr int kTokenOr = 3;
inline constexpr int kTokenFirstRegion = 4;

namespace detail {

struct TokenizeState {
    int horizon;
    int max_depth;
    std::map<std::string, int> region_ids;
    std::vector<StructuralToken> out;
};

inline void tokenize_node(const FormulaPtr& f, int depth, double a_norm, double b_norm,
                          TokenizeState& st) {
    const int clamped_depth = std::min(depth, st.max_depth - 1);
    switch (f->kind) {
        case NodeKind::Atom: {
            auto [it, inserted] = st.region_ids.try_emplace(
                f->region, kTokenFirstRegion + static_cast<int>(st.region_ids.size()));
            (void)inserted;
            st.out.push_back({it->second, a_norm, b_norm, clamped_depth});
            return;
        }
        case NodeKind::And:
        case NodeKind::Or:
            st.out.push_back({f->kind == NodeKind::And ? kTokenAnd : kTokenOr, a_norm,
                              b_norm, clamped_depth});
            for (const auto& c : f->children) {
                tokenize_node(c, depth + 1, a_norm, b_norm, st);
            }
            return;
        case NodeKind::Eventually:
        case NodeKind::Always: {
            const double a = static_cast<double>(f->interval.a) / st.horizon;
            const double b = static_cast<double>(f->interval.b) / st.horizon;
            st.out.push_back({f->kind == NodeKind::Eventually ? kTokenEventually : kTokenAlways,
                              a, b, clamped_depth});
            tokenize_node(f->children[0], depth + 1, a, b, st);
            return;
        }
        case NodeKind::Not:
        case NodeKind::Until:
            throw std::invalid_argument("structural tokens are defined on fragment formulas only");
    }
}

}  // namespace detail

inline std::vector<StructuralToken> structural_tokens(const FormulaPtr& f, int horizon,
                                                      int max_depth) {
    if (horizon <= 0) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (max_depth < 1) {
        throw std::invalid_argument("max_depth must be >= 1");
    }
    const FragmentReport report = validate_fragment(f, horizon);
    if (!report.is_member) {
        throw std::invalid_argument("structural tokens are defined on fragment formulas only: " +
                                    report.violations.front());
    }
    detail::TokenizeState st{horizon, max_depth, {}, {}};
    detail::tokenize_node(f, 0, 0.0, 1.0, st);
    return st.out;
}

}  // namespace stlplan
