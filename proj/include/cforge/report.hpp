#pragma once

#include <string>
#include <vector>

namespace cforge {

// Outcome of one checked law. `witness` holds the exact counterexample (or,
// for value-producing commands, the computed value) in human-readable form.
struct PropertyResult {
    std::string property;
    bool pass = true;
    std::string witness;

    bool operator==(const PropertyResult& other) const = default;
};

struct Report {
    std::string command;
    std::vector<PropertyResult> results;
    long long elapsed_ms = 0;  // excluded from determinism comparisons

    bool pass() const;
    void add(std::string property, bool ok, std::string witness = "");

    // Everything except timing; used to compare serial and parallel runs.
    bool same_findings(const Report& other) const;

    std::string to_text() const;
};

}  // namespace cforge
