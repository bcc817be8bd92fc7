#include "cforge/report.hpp"

namespace cforge {

bool Report::pass() const {
    for (const PropertyResult& r : results) {
        if (!r.pass) {
            return false;
        }
    }
    return true;
}

void Report::add(std::string property, bool ok, std::string witness) {
    results.push_back(PropertyResult{std::move(property), ok, std::move(witness)});
}

bool Report::same_findings(const Report& other) const {
    return command == other.command && results == other.results;
}

std::string Report::to_text() const {
    std::string out = "# " + command + "\n";
    for (const PropertyResult& r : results) {
        out += r.pass ? "PASS  " : "FAIL  ";
        out += r.property;
        if (!r.witness.empty()) {
            out += " — " + r.witness;
        }
        out += "\n";
    }
    out += pass() ? "overall: PASS" : "overall: FAIL";
    out += " (" + std::to_string(elapsed_ms) + " ms)\n";
    return out;
}

}  // namespace cforge
