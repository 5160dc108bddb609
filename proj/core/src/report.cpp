#include "opkern/report.hpp"

#include <sstream>

#include "json.hpp"

namespace opk {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t state) {
    for (unsigned char c : data) {
        state ^= c;
        state *= 1099511628211ull;
    }
    return state;
}

std::string digest_hex(std::uint64_t h) {
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << h;
    return os.str();
}

std::string serialize_certificate(const Certificate& c, bool include_timing) {
    nlohmann::json j;
    j["command"] = c.command;
    j["version"] = c.version;
    j["inputs_digest"] = c.inputs_digest;
    j["seed"] = c.seed;
    j["result"] = c.result_json.empty() ? nlohmann::json::object()
                                        : nlohmann::json::parse(c.result_json);
    if (include_timing) j["timing_seconds"] = c.timing_seconds;
    return j.dump(2) + "\n";
}

}  // namespace opk
