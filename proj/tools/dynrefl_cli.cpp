// command-line front end; talks to the engine through the C API only
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynrefl.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;  // at least one identity failed
constexpr int kExitUsage = 2; // bad flags, config, or engine error

struct ApiString {
    char* s = nullptr;
    ~ApiString() { dr_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

struct Session {
    dr_session* h = dr_session_create();
    ~Session() { dr_session_free(h); }
};

[[noreturn]] void die(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitUsage);
}

void checkStatus(dr_status st) {
    if (st != DR_OK) die(dr_last_error());
}

void writeFile(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die("cannot open " + path.string() + " for writing");
    out << content;
}

std::string readFile(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct VerifyConfig {
    int n = 2;
    std::string mode = "exact";
    int trials = 3;
    uint64_t seed = 0;
    std::vector<std::string> identities; // empty = all scheduled at n
    std::string outDir;
};

void applyConfigFile(VerifyConfig& cfg, const std::string& path) {
    json j;
    try {
        j = json::parse(readFile(path));
    } catch (const json::exception& e) {
        die("config " + path + ": " + e.what());
    }
    cfg.n = j.value("n", cfg.n);
    cfg.mode = j.value("mode", cfg.mode);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("identities")) cfg.identities = j["identities"].get<std::vector<std::string>>();
    cfg.outDir = j.value("out", cfg.outDir);
}

std::string markdownEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out;
}

std::string aggregateMarkdown(const json& reports, const std::string& header) {
    std::string md = "# Verification report\n\n" + header + "\n\n";
    md += "| identity | anchor | mode | result | note |\n";
    md += "|---|---|---|---|---|\n";
    int failed = 0;
    for (const auto& r : reports) {
        std::string mode = r.value("exact", true)
                               ? "exact"
                               : "random x" + std::to_string(r.value("trials", 0));
        bool pass = r.value("pass", false);
        if (!pass) ++failed;
        md += "| " + markdownEscape(r.value("identity", "")) + " | " +
              markdownEscape(r.value("anchor", "")) + " | " + mode + " | " +
              (pass ? "pass" : "**FAIL**") + " | " + markdownEscape(r.value("note", "")) +
              " |\n";
    }
    md += "\n" + std::to_string(reports.size()) + " checks, " + std::to_string(failed) +
          " failed.\n";
    return md;
}

int runVerify(const VerifyConfig& cfg) {
    if (cfg.mode != "exact" && cfg.mode != "random") die("mode must be exact or random");
    int exact = cfg.mode == "exact" ? 1 : 0;
    if (exact && cfg.n > 3)
        std::cerr << "warning: exact verification at n=" << cfg.n
                  << " multiplies large symbolic tensors; expect long runtimes\n";

    Session s;
    std::vector<std::string> names = cfg.identities;
    if (names.empty()) {
        ApiString listed;
        checkStatus(dr_list_identities(s.h, cfg.n, &listed.s));
        names = json::parse(listed.str()).get<std::vector<std::string>>();
    }

    if (!cfg.outDir.empty()) fs::create_directories(cfg.outDir);

    json all = json::array();
    for (const auto& name : names) {
        ApiString out;
        checkStatus(dr_run_identity(s.h, name.c_str(), cfg.n, exact, cfg.trials, cfg.seed,
                                    &out.s));
        json reports = json::parse(out.str());
        if (!cfg.outDir.empty())
            writeFile(fs::path(cfg.outDir) / (name + ".json"), reports.dump(2) + "\n");
        for (auto& r : reports) all.push_back(std::move(r));
    }

    std::string header = "n=" + std::to_string(cfg.n) + ", mode=" + cfg.mode +
                         (exact ? "" : ", trials=" + std::to_string(cfg.trials) +
                                           ", seed=" + std::to_string(cfg.seed));
    std::string md = aggregateMarkdown(all, header);
    if (!cfg.outDir.empty()) {
        writeFile(fs::path(cfg.outDir) / "report.md", md);
        std::cout << "wrote " << all.size() << " reports to " << cfg.outDir << "\n";
    } else {
        std::cout << md;
    }

    for (const auto& r : all)
        if (!r.value("pass", false)) return kExitFail;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"construction and verification engine for dynamical reflection algebras"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run identity checks and report");
    VerifyConfig vcfg;
    std::string configPath, suite = "paper";
    verify->add_option("--config", configPath, "JSON config file (flags override it)");
    verify->add_option("--suite", suite, "identity suite (only \"paper\" exists)");
    auto* optN = verify->add_option("--n", vcfg.n, "rank of the rational model");
    auto* optMode = verify->add_option("--mode", vcfg.mode, "exact | random");
    auto* optTrials = verify->add_option("--trials", vcfg.trials, "random-mode trial count");
    auto* optSeed = verify->add_option("--seed", vcfg.seed, "random-mode seed");
    auto* optIds = verify->add_option("--identity", vcfg.identities,
                                      "identity name (repeatable; default: all)");
    auto* optOut = verify->add_option("--out", vcfg.outDir,
                                      "output directory for per-identity JSON and report.md");

    // build
    auto* build = app.add_subcommand("build", "construct and verify an artifact");
    std::string what, buildParams, buildOut;
    int buildN = 2;
    build->add_option("what", what,
                      "bcd-from-a | dual | fuse | dress | monodromy | hamiltonian")
        ->required();
    build->add_option("--n", buildN, "rank of the rational model");
    build->add_option("--params", buildParams, "extra builder parameters, JSON object");
    build->add_option("--out", buildOut, "output file (default: stdout)");

    // eigen
    auto* eigen = app.add_subcommand("eigen", "numeric zero-mode sweep (rank 2)");
    json ep = {{"k", 1},       {"parity", "cos"}, {"m1", 1.0},
               {"m2", 1.0},    {"mu", 1.0},       {"samples", 20},
               {"seed", 0},    {"exponent", "derived"}};
    int ek = 1, esamples = 20;
    uint64_t eseed = 0;
    double em1 = 1.0, em2 = 1.0, emu = 1.0;
    std::string eparity = "cos", eexp = "derived", ecsv, esummary;
    eigen->add_option("--k", ek, "oscillation index");
    eigen->add_option("--parity", eparity, "sin | cos");
    eigen->add_option("--m1", em1, "first mass");
    eigen->add_option("--m2", em2, "second mass");
    eigen->add_option("--mu", emu, "shift scale");
    eigen->add_option("--samples", esamples, "sample count");
    eigen->add_option("--seed", eseed, "sampling seed");
    eigen->add_option("--exponent", eexp, "derived | paper exponent coefficient");
    eigen->add_option("--csv", ecsv, "CSV output file (default: stdout)");
    eigen->add_option("--summary", esummary, "summary JSON output file (default: stderr)");

    // report
    auto* report = app.add_subcommand("report", "aggregate per-identity JSON into markdown");
    std::string repIn, repOut, repHeader = "aggregated";
    report->add_option("--in", repIn, "directory of per-identity JSON files")->required();
    report->add_option("--out", repOut, "markdown output file (default: stdout)");
    report->add_option("--header", repHeader, "run description line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (verify->parsed()) {
        if (suite != "paper") die("unknown suite: " + suite);
        if (!configPath.empty()) {
            VerifyConfig fileCfg;
            applyConfigFile(fileCfg, configPath);
            if (!*optN) vcfg.n = fileCfg.n;
            if (!*optMode) vcfg.mode = fileCfg.mode;
            if (!*optTrials) vcfg.trials = fileCfg.trials;
            if (!*optSeed) vcfg.seed = fileCfg.seed;
            if (!*optIds) vcfg.identities = fileCfg.identities;
            if (!*optOut) vcfg.outDir = fileCfg.outDir;
        }
        return runVerify(vcfg);
    }

    if (build->parsed()) {
        json params = json::object();
        if (!buildParams.empty()) {
            try {
                params = json::parse(buildParams);
            } catch (const json::exception& e) {
                die(std::string("--params: ") + e.what());
            }
        }
        params["n"] = buildN;
        Session s;
        ApiString out;
        checkStatus(dr_build(s.h, what.c_str(), params.dump().c_str(), &out.s));
        if (buildOut.empty()) std::cout << out.str() << "\n";
        else writeFile(buildOut, out.str() + "\n");
        return 0;
    }

    if (eigen->parsed()) {
        ep["k"] = ek;
        ep["parity"] = eparity;
        ep["m1"] = em1;
        ep["m2"] = em2;
        ep["mu"] = emu;
        ep["samples"] = esamples;
        ep["seed"] = eseed;
        ep["exponent"] = eexp;
        Session s;
        ApiString csv, summary;
        checkStatus(dr_eigen_sweep(s.h, ep.dump().c_str(), &csv.s, &summary.s));
        if (ecsv.empty()) std::cout << csv.str();
        else writeFile(ecsv, csv.str());
        if (esummary.empty()) std::cerr << summary.str() << "\n";
        else writeFile(esummary, summary.str() + "\n");
        return 0;
    }

    // report
    json all = json::array();
    std::map<std::string, json> files; // sorted for reproducible row order
    for (const auto& entry : fs::directory_iterator(repIn)) {
        if (entry.path().extension() != ".json") continue;
        try {
            files[entry.path().filename().string()] = json::parse(readFile(entry.path()));
        } catch (const json::exception& e) {
            die(entry.path().string() + ": " + e.what());
        }
    }
    for (const auto& [name, reports] : files)
        for (const auto& r : reports) all.push_back(r);
    std::string md = aggregateMarkdown(all, repHeader);
    if (repOut.empty()) std::cout << md;
    else writeFile(repOut, md);
    for (const auto& r : all)
        if (!r.value("pass", false)) return kExitFail;
    return 0;
}
