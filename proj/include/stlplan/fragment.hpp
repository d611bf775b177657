#pragma once

// Membership test for the learnable fragment: Boolean combinations of
// atoms and of singly-nested bounded F/G operators,
//
//   phi ::= chi | F[a,b] chi | G[a,b] chi | phi & phi | phi | phi
//
// where chi is a negation-free Boolean formula over atoms, and every
// interval satisfies b <= horizon.

#include <string>
#include <vector>

#include "stlplan/ast.hpp"

namespace stlplan {

struct FragmentReport {
    bool is_member = true;
    std::vector<std::string> violations;
};

namespace detail {

inline void check_fragment(const FormulaPtr& f, int horizon, bool inside_temporal,
                           FragmentReport& report) {
    const auto violate = [&](std::string msg) {
        report.is_member = false;
        report.violations.push_back(std::move(msg));
    };
    switch (f->kind) {
        case NodeKind::Atom:
            return;
        case NodeKind::Not:
            violate("negation excluded from fragment: " + render(f));
            check_fragment(f->children[0], horizon, inside_temporal, report);
            return;
        case NodeKind::And:
        case NodeKind::Or:
            for (const auto& c : f->children) {
                check_fragment(c, horizon, inside_temporal, report);
            }
            return;
        case NodeKind::Until:
            violate("Until excluded from fragment: " + render(f));
            if (inside_temporal) {
                violate("nested temporal depth > 1: " + render(f));
            }
            if (f->interval.b > horizon) {
                violate("interval upper bound " + std::to_string(f->interval.b) +
                        " exceeds horizon " + std::to_string(horizon));
            }
            for (const auto& c : f->children) {
                check_fragment(c, horizon, true, report);
            }
            return;
        case NodeKind::Eventually:
        case NodeKind::Always:
            if (inside_temporal) {
                violate("nested temporal depth > 1: " + render(f));
            }
            if (f->interval.b > horizon) {
                violate("interval upper bound " + std::to_string(f->interval.b) +
                        " exceeds horizon " + std::to_string(horizon));
            }
            check_fragment(f->children[0], horizon, true, report);
            return;
    }
}

}  // namespace detail

inline FragmentReport validate_fragment(const FormulaPtr& f, int horizon) {
    FragmentReport report;
    detail::check_fragment(f, horizon, false, report);
    return report;
}

}  // namespace stlplan
