#include "submod/ledger.hpp"

#include <json.hpp>

namespace submod {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Other: return "other";
        case Phase::GSample: return "gsample";
        case Phase::GDSamplePlus: return "gdsample_plus";
        case Phase::GDSampleMinus: return "gdsample_minus";
        case Phase::Rounding: return "rounding";
        case Phase::SampleDemo: return "sample_demo";
        case Phase::Validate: return "validate";
        default: return "unknown";
    }
}

std::string QueryLedger::to_json() const {
    nlohmann::ordered_json j;
    j["classical_eo"] = classical_;
    j["quantum_eo"] = quantum_;
    nlohmann::ordered_json ph = nlohmann::ordered_json::object();
    for (int i = 0; i < static_cast<int>(Phase::kCount); ++i) {
        const Entry& e = phases_[static_cast<size_t>(i)];
        if (e.classical == 0 && e.quantum == 0) continue;
        ph[phase_name(static_cast<Phase>(i))] = {{"classical", e.classical}, {"quantum", e.quantum}};
    }
    j["phases"] = ph;
    return j.dump();
}

}  // namespace submod
