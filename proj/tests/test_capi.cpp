// exercises the shared-library surface the way an external client would
#include <cassert>
#include <cstdio>
#include <cstring>
#include <string>

#include "dynrefl.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
    do {                                                              \
        if (!(cond)) {                                                \
            std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                               \
        }                                                             \
    } while (0)

int main() {
    EXPECT(dr_version() != nullptr);

    dr_session* s = dr_session_create();
    EXPECT(s != nullptr);

    // argument validation
    char* out = nullptr;
    EXPECT(dr_list_identities(nullptr, 2, &out) == DR_ERR_INVALID_ARGUMENT);
    EXPECT(dr_list_identities(s, 1, &out) == DR_ERR_INVALID_ARGUMENT);
    EXPECT(std::strlen(dr_last_error()) > 0);

    // identity listing
    EXPECT(dr_list_identities(s, 2, &out) == DR_OK);
    std::string names = out;
    dr_string_free(out);
    out = nullptr;
    EXPECT(names.find("dybe-a") != std::string::npos);
    EXPECT(names.find("fused-exchange-left") != std::string::npos);

    // one identity, exact
    EXPECT(dr_run_identity(s, "structure-unitarity", 2, 1, 0, 0, &out) == DR_OK);
    std::string rep = out;
    dr_string_free(out);
    out = nullptr;
    EXPECT(rep.find("\"pass\": true") != std::string::npos);

    // unknown identity is a compute error with a message
    EXPECT(dr_run_identity(s, "nope", 2, 1, 0, 0, &out) == DR_ERR_COMPUTE);
    EXPECT(std::string(dr_last_error()).find("nope") != std::string::npos);

    // full random suite, reproducible
    char* run1 = nullptr;
    char* run2 = nullptr;
    EXPECT(dr_run_suite(s, 2, 0, 3, 77, &run1) == DR_OK);
    EXPECT(dr_run_suite(s, 2, 0, 3, 77, &run2) == DR_OK);
    EXPECT(std::strcmp(run1, run2) == 0);
    EXPECT(std::string(run1).find("\"pass\": false") == std::string::npos);
    dr_string_free(run1);
    dr_string_free(run2);

    // builders
    EXPECT(dr_build(s, "hamiltonian", "{\"n\":3}", &out) == DR_OK);
    std::string ham = out;
    dr_string_free(out);
    out = nullptr;
    EXPECT(ham.find("\"terms\"") != std::string::npos);
    EXPECT(dr_build(s, "no-such-builder", nullptr, &out) == DR_ERR_COMPUTE);
    EXPECT(dr_build(s, "hamiltonian", "{bad json", &out) == DR_ERR_INVALID_ARGUMENT);

    // eigen sweep
    char* csv = nullptr;
    char* summary = nullptr;
    EXPECT(dr_eigen_sweep(s, "{\"k\":1,\"samples\":8,\"seed\":4}", &csv, &summary) == DR_OK);
    EXPECT(std::string(csv).rfind("q,value,residual", 0) == 0);
    EXPECT(std::string(summary).find("\"zero_mode\": true") != std::string::npos);
    dr_string_free(csv);
    dr_string_free(summary);

    dr_session_free(s);
    dr_string_free(nullptr); // must be a no-op

    if (failures == 0) std::printf("capi ok\n");
    return failures == 0 ? 0 : 1;
}
