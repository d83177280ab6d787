#include "report.hpp"

#include <json.hpp>

namespace dynrefl {

std::string VerificationReport::toJson(bool includeTiming) const {
    nlohmann::ordered_json j;
    j["identity"] = identity;
    j["anchor"] = anchor;
    j["mode"] = exact ? "exact" : "random";
    if (!exact) {
        j["trials"] = trials;
        j["seed"] = seed;
    }
    j["pass"] = pass;
    if (witness) {
        j["witness"] = {{"row", witness->row}, {"col", witness->col},
                        {"residual", witness->residual}};
    }
    if (!note.empty()) j["note"] = note;
    if (includeTiming) j["millis"] = millis;
    return j.dump(2);
}

} // namespace dynrefl
