#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hcdg {

/// One violated identity, with the witnessing basis tuple spelled out.
struct Violation {
    std::string law;
    std::string witness;
};

/// Validators collect violations instead of throwing, so law suites can
/// aggregate. `skipped` counts checks that touched a truncated product.
struct ValidationReport {
    std::vector<Violation> violations;
    std::size_t checks = 0;
    std::size_t skipped = 0;

    bool ok() const { return violations.empty(); }

    void fail(std::string law, std::string witness) {
        violations.push_back(Violation{std::move(law), std::move(witness)});
    }

    void merge(const ValidationReport& o) {
        violations.insert(violations.end(), o.violations.begin(), o.violations.end());
        checks += o.checks;
        skipped += o.skipped;
    }

    std::string summary() const {
        std::string s = std::to_string(checks) + " checks, " + std::to_string(skipped) +
                        " skipped, " + std::to_string(violations.size()) + " violations";
        for (const auto& v : violations) s += "\n  " + v.law + " at " + v.witness;
        return s;
    }
};

} // namespace hcdg
