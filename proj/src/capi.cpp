#include "dynrefl.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "suite.hpp"

namespace {

thread_local std::string g_lastError;

char* dup(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dr_status fail(dr_status code, const std::string& msg) {
    g_lastError = msg;
    return code;
}

std::string reportsJson(const std::vector<dynrefl::VerificationReport>& rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rs) arr.push_back(nlohmann::json::parse(r.toJson(false)));
    return arr.dump(2);
}

dynrefl::SuiteOptions options(int n, int exact, int trials, uint64_t seed) {
    dynrefl::SuiteOptions opt;
    opt.n = n;
    opt.mode.exact = exact != 0;
    opt.mode.trials = trials;
    opt.mode.seed = seed;
    return opt;
}

template <typename F>
dr_status guarded(F&& f) {
    try {
        f();
        g_lastError.clear();
        return DR_OK;
    } catch (const nlohmann::json::exception& e) {
        return fail(DR_ERR_INVALID_ARGUMENT, e.what());
    } catch (const dynrefl::Error& e) {
        return fail(DR_ERR_COMPUTE, e.what());
    } catch (const std::exception& e) {
        return fail(DR_ERR_COMPUTE, e.what());
    }
}

} // namespace

// the session exists as a stable address for future caching; the suite
// rebuilds its model per call, which profiling shows is negligible
struct dr_session {
    int unused = 0;
};

extern "C" {

const char* dr_version(void) { return "1.0.0"; }

const char* dr_last_error(void) { return g_lastError.c_str(); }

void dr_string_free(char* s) { delete[] s; }

dr_session* dr_session_create(void) { return new dr_session(); }

void dr_session_free(dr_session* s) { delete s; }

dr_status dr_list_identities(dr_session* s, int n, char** out_json) {
    if (!s || !out_json) return fail(DR_ERR_INVALID_ARGUMENT, "null argument");
    if (n < 2) return fail(DR_ERR_INVALID_ARGUMENT, "n must be at least 2");
    return guarded([&] {
        nlohmann::json arr = dynrefl::suiteIdentities(n);
        *out_json = dup(arr.dump(2));
    });
}

dr_status dr_run_identity(dr_session* s, const char* name, int n, int exact,
                          int trials, uint64_t seed, char** out_json) {
    if (!s || !name || !out_json) return fail(DR_ERR_INVALID_ARGUMENT, "null argument");
    if (n < 2) return fail(DR_ERR_INVALID_ARGUMENT, "n must be at least 2");
    if (!exact && trials < 1) return fail(DR_ERR_INVALID_ARGUMENT, "trials must be positive");
    return guarded([&] {
        auto rs = dynrefl::runIdentity(name, options(n, exact, trials, seed));
        *out_json = dup(reportsJson(rs));
    });
}

dr_status dr_run_suite(dr_session* s, int n, int exact, int trials,
                       uint64_t seed, char** out_json) {
    if (!s || !out_json) return fail(DR_ERR_INVALID_ARGUMENT, "null argument");
    if (n < 2) return fail(DR_ERR_INVALID_ARGUMENT, "n must be at least 2");
    if (!exact && trials < 1) return fail(DR_ERR_INVALID_ARGUMENT, "trials must be positive");
    return guarded([&] {
        auto rs = dynrefl::runSuite(options(n, exact, trials, seed));
        *out_json = dup(reportsJson(rs));
    });
}

dr_status dr_build(dr_session* s, const char* what, const char* params_json,
                   char** out_json) {
    if (!s || !what || !out_json) return fail(DR_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string params = params_json ? params_json : "";
        *out_json = dup(dynrefl::buildArtifact(what, params));
    });
}

dr_status dr_eigen_sweep(dr_session* s, const char* params_json,
                         char** out_csv, char** out_summary_json) {
    if (!s) return fail(DR_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string params = params_json ? params_json : "";
        std::string summary;
        std::string csv = dynrefl::eigenSweepCsv(params, summary);
        if (out_csv) *out_csv = dup(csv);
        if (out_summary_json) *out_summary_json = dup(summary);
    });
}

} // extern "C"
