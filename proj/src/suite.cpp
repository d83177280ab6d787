#include "suite.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"

namespace dynrefl {

namespace {

using nlohmann::json;

struct Ctx {
    RationalModel model;
    ABCDQuadruple quad;
};

Ctx makeCtx(int n) {
    Ctx c;
    c.model = rationalModel(n);
    c.quad = quadrupleOf(c.model);
    return c;
}

VerificationReport named(VerificationReport r, const std::string& id) {
    r.identity = id;
    return r;
}

VerificationReport fromCertificate(const std::string& id, const std::string& anchor,
                                   const EqualityCertificate& c, const ShiftOperator& diff) {
    VerificationReport r;
    r.identity = id;
    r.anchor = anchor;
    r.exact = c.exact;
    r.trials = c.trials;
    r.seed = c.seed;
    r.pass = c.equal;
    if (!c.equal) r.witness = VerificationReport::Witness{{}, {}, residualString(diff)};
    if (!c.exact && !c.failureBound.empty()) r.note = "failure bound " + c.failureBound;
    return r;
}

TensorMatrix gammaByName(const RationalModel& m, const std::string& tag) {
    if (tag == "rank-one") return gammaSolution(m, GammaKind::RankOne);
    if (tag == "antisym") return gammaSolution(m, GammaKind::AntisymScaled);
    if (tag == "diagonal") return gammaSolution(m, GammaKind::Diagonal);
    throw Error("unknown gamma kind: " + tag);
}

GammaKind kindByName(const std::string& tag) {
    if (tag == "rank-one") return GammaKind::RankOne;
    if (tag == "antisym") return GammaKind::AntisymScaled;
    if (tag == "diagonal") return GammaKind::Diagonal;
    throw Error("unknown gamma kind: " + tag);
}

TensorMatrix onQuantumLeg(const TensorMatrix& tmpl, const std::string& leg) {
    return tmpl.relabel({{"2", leg}}).withLegRole(leg, LegRole::Quantum);
}

ShiftOperator fusedTraceOperator(const Ctx& c, const CheckMode& mode) {
    // experiment: trace the fused pair over both composite legs with one
    // lattice insertion per leg, mirroring the two-leg version of the
    // commuting-trace formula
    auto K = gammaSolution(c.model, GammaKind::RankOne);
    auto KK = gammaSolution(c.model, GammaKind::Diagonal);
    FusedSolution fk = fuse(K, K, c.quad, FuseSide::Left, false, mode);
    FusedSolution fkk = fuse(KK, KK, c.quad, FuseSide::Left, false, mode);
    const auto& legs = fk.K.legs();
    TensorMatrix E = expShiftMatrix(c.model.reg, legs[0].id, legs, 1) *
                     expShiftMatrix(c.model.reg, legs[1].id, legs, 1);
    TensorMatrix t = E * fk.K * fkk.K.inverse() * E;
    return t.traceOverLeg(legs[0].id).traceOverLeg(legs[1].id).scalar();
}

struct IdentityDef {
    std::string name;
    int maxN; // largest n the suite schedules this identity for
    std::function<std::vector<VerificationReport>(const Ctx&, const SuiteOptions&)> run;
};

const std::vector<IdentityDef>& identityTable() {
    static const std::vector<IdentityDef> table = [] {
        std::vector<IdentityDef> t;
        auto add = [&](std::string name, int maxN, auto fn) {
            t.push_back({std::move(name), maxN, fn});
        };

        add("structure-unitarity", 99, [](const Ctx& c, const SuiteOptions& o) {
            return std::vector{named(checkUnitarity(c.quad, o.mode), "structure-unitarity")};
        });
        add("structure-zero-weight", 99, [](const Ctx& c, const SuiteOptions&) {
            return std::vector{named(checkZeroWeight(c.quad, c.quad.sig), "structure-zero-weight")};
        });
        for (char v : {'a', 'b', 'c', 'd'}) {
            std::string name = std::string("dybe-") + v;
            add(name, 99, [v, name](const Ctx& c, const SuiteOptions& o) {
                return std::vector{named(checkDYBE(c.quad, v, c.quad.sig, o.mode), name)};
            });
        }
        for (const char* g : {"rank-one", "antisym", "diagonal"}) {
            std::string name = std::string("reflection-") + g;
            add(name, 3, [g, name](const Ctx& c, const SuiteOptions& o) {
                auto gamma = gammaByName(c.model, g);
                return std::vector{named(checkReflection(gamma, c.quad, c.quad.sig, o.mode), name)};
            });
        }
        add("classical-dybe", 3, [](const Ctx& c, const SuiteOptions& o) {
            return std::vector{
                named(checkClassicalLimit(c.quad, c.quad.sig, o.mode), "classical-dybe")};
        });
        add("closure-from-a", 3, [](const Ctx& c, const SuiteOptions& o) {
            ABCDQuadruple built = buildBCDFromA(c.model.A, c.quad.sig, false, o.mode);
            std::vector<VerificationReport> out;
            for (char v : {'a', 'b', 'c', 'd'})
                out.push_back(named(checkDYBE(built, v, built.sig, o.mode),
                                    std::string("closure-dybe-") + v));
            out.push_back(named(checkUnitarity(built, o.mode), "closure-unitarity"));
            // record agreement with the model matrices entrywise
            for (auto [tag, b, m] : {std::tuple<const char*, const TensorMatrix*,
                                                const TensorMatrix*>{"B", &built.B, &c.model.B},
                                     {"C", &built.C, &c.model.C},
                                     {"D", &built.D, &c.model.D}}) {
                auto r = named(compareProducts("closure-agreement", "theo:BCD", {*b}, {*m}, o.mode),
                               std::string("closure-agreement-") + tag);
                if (std::string(tag) == "D") {
                    auto diff = entrywiseDiff(built.D, c.model.A);
                    r.note = "sign-flipped diagonal-pair variant differs in " +
                             std::to_string(diff.size()) + " entries";
                }
                out.push_back(r);
            }
            return out;
        });
        add("lax-exchange", 3, [](const Ctx& c, const SuiteOptions& o) {
            TensorMatrix T = monodromy(c.model.A, 1, c.quad, false, o.mode);
            return std::vector{named(checkRLL(T, c.quad, o.mode), "lax-exchange")};
        });
        add("monodromy-2", 2, [](const Ctx& c, const SuiteOptions& o) {
            TensorMatrix T = monodromy(c.model.A, 2, c.quad, false, o.mode);
            return std::vector{named(checkRLL(T, c.quad, o.mode), "monodromy-2")};
        });
        add("transposed-exchange", 2, [](const Ctx& c, const SuiteOptions& o) {
            TensorMatrix T = monodromy(c.model.A, 1, c.quad, false, o.mode);
            TensorMatrix Tc = buildTransposedLax(T, c.quad, false, o.mode);
            return std::vector{
                named(checkCrossedExchange(T, Tc, c.quad, ExchangeKind::Transposed, o.mode),
                      "transposed-exchange")};
        });
        add("crossed-exchange", 2, [](const Ctx& c, const SuiteOptions& o) {
            TensorMatrix T = monodromy(c.model.A, 1, c.quad, false, o.mode);
            TensorMatrix Tc = buildTransposedLax(T, c.quad, false, o.mode);
            return std::vector{
                named(checkCrossedExchange(T, Tc, c.quad, ExchangeKind::Crossed, o.mode),
                      "crossed-exchange")};
        });
        for (const char* g : {"rank-one", "antisym", "diagonal"}) {
            std::string name = std::string("k-sandwich-") + g;
            add(name, 2, [g, name](const Ctx& c, const SuiteOptions& o) {
                TensorMatrix T = monodromy(c.model.A, 1, c.quad, false, o.mode);
                auto gamma = gammaByName(c.model, g);
                auto adm = admitGamma(gamma, c.quad, o.mode);
                TensorMatrix K = buildKFromTGamma(T, gamma, c.quad, false, o.mode);
                auto r = named(checkReflection(K, c.quad, c.quad.sig, o.mode), name);
                r.note = std::string("gamma admission: reflection ") +
                         (adm.reflection.pass ? "pass" : "fail") + ", shiftless condition " +
                         (adm.shiftless.pass ? "pass" : "fail");
                return std::vector{r};
            });
        }
        add("coaction-example-1", 2, [](const Ctx& c, const SuiteOptions& o) {
            TensorMatrix L = onQuantumLeg(c.model.C, "a");
            TensorMatrix J = onQuantumLeg(c.model.D, "a");
            auto K = gammaSolution(c.model, GammaKind::Diagonal);
            std::vector<VerificationReport> out;
            out.push_back(named(checkCoaction(L, J, c.quad, 1, o.mode), "coaction-example-1"));
            TensorMatrix Kt = coactionDress(K, L, J, 1, c.quad, false, o.mode);
            out.push_back(named(checkReflection(Kt, c.quad, c.quad.sig, o.mode),
                                "coaction-example-1-dressed"));
            return out;
        });
        add("coaction-example-2", 2, [](const Ctx& c, const SuiteOptions& o) {
            TensorMatrix L = onQuantumLeg(c.model.A, "a");
            TensorMatrix J = onQuantumLeg(c.model.B, "a");
            auto K = gammaSolution(c.model, GammaKind::Diagonal);
            std::vector<VerificationReport> out;
            out.push_back(named(checkCoaction(L, J, c.quad, -1, o.mode), "coaction-example-2"));
            TensorMatrix Kt = coactionDress(K, L, J, -1, c.quad, false, o.mode);
            out.push_back(named(checkReflection(Kt, c.quad, c.quad.sig, o.mode),
                                "coaction-example-2-dressed"));
            return out;
        });
        for (auto [tag, side] : {std::pair<const char*, FuseSide>{"left", FuseSide::Left},
                                 {"right", FuseSide::Right}}) {
            std::string name = std::string("fused-exchange-") + tag;
            add(name, 2, [side, name](const Ctx& c, const SuiteOptions& o) {
                // the opposite slot needs a solution exchange-compatible with
                // the fused constituents: the rank-one/antisymmetric family
                // works, the diagonal family does not mix with it
                auto K = gammaSolution(c.model, GammaKind::AntisymScaled);
                auto Kp = gammaSolution(c.model, GammaKind::RankOne);
                FusedSolution f = fuse(K, Kp, c.quad, side, false, o.mode);
                std::vector<VerificationReport> out;
                out.push_back(named(
                    checkFusedExchange(f, K.relabel({{"1", f.other[0]}}), c.quad, o.mode), name));
                out.push_back(named(
                    checkFusedExchange(f, Kp.relabel({{"1", f.other[0]}}), c.quad, o.mode),
                    name + "-alt"));
                return out;
            });
        }
        add("fused-unitarity", 2, [](const Ctx& c, const SuiteOptions& o) {
            return std::vector{named(checkFusedUnitarity(c.quad, o.mode), "fused-unitarity")};
        });
        add("fused-order-independence", 2, [](const Ctx& c, const SuiteOptions& o) {
            auto rs = fusedOrderIndependence(c.quad, o.mode);
            const char* names = "ABCD";
            for (size_t i = 0; i < rs.size(); ++i)
                rs[i].identity = std::string("fused-order-independence-") + names[i];
            return rs;
        });
        for (int spaces : {2, 3}) {
            std::string name = "dressing-" + std::to_string(spaces);
            add(name, 2, [spaces, name](const Ctx& c, const SuiteOptions& o) {
                DressingPair p = buildDressingQS(c.quad, spaces, false, o.mode);
                return std::vector{named(verifyDressing(p, c.quad, o.mode), name)};
            });
        }
        add("dual-structure", 2, [](const Ctx& c, const SuiteOptions& o) {
            ABCDQuadruple d = buildDualABCD(c.quad, false, o.mode);
            std::vector<VerificationReport> out;
            out.push_back(named(compareProducts("dual-c-swap", "theo:dual", {d.C},
                                                {swapTemplateLegs(d.B)}, o.mode),
                                "dual-c-swap"));
            out.push_back(named(compareProducts(
                                    "dual-unitarity", "theo:dual", {d.A, swapTemplateLegs(d.A)},
                                    {TensorMatrix::identity(d.reg, d.legTemplate)}, o.mode),
                                "dual-unitarity"));
            auto inter = dualInterRelations(d, o.mode);
            auto r = named(inter[2], "dual-d-relation");
            r.note = std::string("recorded: dual B-relation ") +
                     (inter[0].pass ? "pass" : "fail") + ", dual C-relation " +
                     (inter[1].pass ? "pass" : "fail") +
                     " (structural failure for this model; not gated)";
            out.push_back(r);
            return out;
        });
        add("hamiltonian-closed-form", 99, [](const Ctx& c, const SuiteOptions& o) {
            auto K = gammaSolution(c.model, GammaKind::RankOne);
            auto KK = gammaSolution(c.model, GammaKind::Diagonal);
            ShiftOperator built = hamiltonianFromPair(K, KK);
            ShiftOperator want = hamiltonianClosedForm(c.model);
            auto cert = built.equal(want, o.mode.exact, o.mode.trials, o.mode.seed);
            return std::vector{fromCertificate("hamiltonian-closed-form",
                                               "trace formula vs closed form", cert,
                                               built - want)};
        });
        add("hamiltonian-translation-commutator", 99, [](const Ctx& c, const SuiteOptions& o) {
            ShiftOperator H = hamiltonianClosedForm(c.model);
            ShiftOperator E = ShiftOperator::pureShift(c.model.reg,
                                                       std::vector<int>(c.model.n, 2));
            return std::vector{named(checkCommutatorZero(H, E, o.mode),
                                     "hamiltonian-translation-commutator")};
        });
        add("reduction-n2", 2, [](const Ctx& c, const SuiteOptions& o) {
            auto target = relativeRegistry();
            ShiftOperator H = hamiltonianClosedForm(c.model);
            ShiftOperator Hr = reduceN2(H, target);
            auto q = Polynomial::variable(target, 0);
            auto mu = Polynomial::variable(target, target->muIndex());
            auto m1 = Polynomial::variable(target, target->indexOf("m1"));
            auto m2 = Polynomial::variable(target, target->indexOf("m2"));
            ShiftOperator want(target);
            want.addTerm({2, 2}, RationalFunction::fraction(m1 * m1, q + mu));
            want.addTerm({-2, 2}, -RationalFunction::fraction(m2 * m2, q - mu));
            auto cert = Hr.equal(want, o.mode.exact, o.mode.trials, o.mode.seed);
            return std::vector{fromCertificate("reduction-n2", "relative-coordinate form", cert,
                                               Hr - want)};
        });
        add("fused-trace-commutator", 2, [](const Ctx& c, const SuiteOptions& o) {
            // open experiment: verdict recorded either way, never gated
            ShiftOperator H = hamiltonianClosedForm(c.model);
            VerificationReport r;
            r.identity = "fused-trace-commutator";
            r.anchor = "fused-trace experiment";
            r.exact = o.mode.exact;
            r.pass = true;
            try {
                ShiftOperator t = fusedTraceOperator(c, o.mode);
                ShiftOperator comm = H * t - t * H;
                r.note = std::string("experiment verdict: [H, fused trace] ") +
                         (comm.isZero() ? "= 0" : "!= 0") + " (recorded, no promised outcome)";
            } catch (const Error& e) {
                r.note = std::string("experiment aborted: ") + e.what();
            }
            return std::vector{r};
        });
        return t;
    }();
    return table;
}

} // namespace

std::vector<std::string> suiteIdentities(int n) {
    std::vector<std::string> out;
    for (const auto& d : identityTable())
        if (n <= d.maxN) out.push_back(d.name);
    return out;
}

std::vector<VerificationReport> runIdentity(const std::string& name, const SuiteOptions& opt) {
    if (opt.n < 2) throw Error("suite: n must be at least 2");
    for (const auto& d : identityTable()) {
        if (d.name != name) continue;
        if (opt.n > d.maxN)
            throw Error("identity " + name + " is scheduled up to n=" +
                        std::to_string(d.maxN) + " only");
        Ctx c = makeCtx(opt.n);
        return d.run(c, opt);
    }
    throw Error("unknown identity: " + name);
}

std::vector<VerificationReport> runSuite(const SuiteOptions& opt) {
    if (opt.n < 2) throw Error("suite: n must be at least 2");
    Ctx c = makeCtx(opt.n);
    std::vector<VerificationReport> out;
    for (const auto& d : identityTable()) {
        if (opt.n > d.maxN) continue;
        auto rs = d.run(c, opt);
        out.insert(out.end(), rs.begin(), rs.end());
    }
    return out;
}

namespace {

json shiftOperatorJson(const ShiftOperator& op) {
    json terms = json::array();
    for (const auto& [v, f] : op.terms())
        terms.push_back({{"shift", v}, {"coeff", f.toString()}});
    return {{"terms", terms}};
}

json matrixJson(const TensorMatrix& m) { return json::parse(m.toJson()); }

} // namespace

std::string buildArtifact(const std::string& what, const std::string& paramsJson) {
    json p = paramsJson.empty() ? json::object() : json::parse(paramsJson);
    int n = p.value("n", 2);
    if (n < 2) throw Error("build: n must be at least 2");
    Ctx c = makeCtx(n);
    CheckMode mode; // builder verification is always exact
    json out;
    if (what == "bcd-from-a") {
        ABCDQuadruple q = buildBCDFromA(c.model.A, c.quad.sig, p.value("strict", true), mode);
        out = {{"A", matrixJson(q.A)}, {"B", matrixJson(q.B)},
               {"C", matrixJson(q.C)}, {"D", matrixJson(q.D)}};
    } else if (what == "dual") {
        ABCDQuadruple d = buildDualABCD(c.quad, p.value("strict", true), mode);
        out = {{"A", matrixJson(d.A)}, {"B", matrixJson(d.B)},
               {"C", matrixJson(d.C)}, {"D", matrixJson(d.D)}};
    } else if (what == "fuse") {
        FuseSide side = p.value("side", "left") == std::string("right") ? FuseSide::Right
                                                                        : FuseSide::Left;
        auto K = gammaSolution(c.model, kindByName(p.value("k", "antisym")));
        auto Kp = gammaSolution(c.model, kindByName(p.value("kprime", "rank-one")));
        FusedSolution f = fuse(K, Kp, c.quad, side, p.value("strict", true), mode);
        out = {{"K", matrixJson(f.K)},      {"A", matrixJson(f.A)}, {"B", matrixJson(f.B)},
               {"C", matrixJson(f.C)},      {"D", matrixJson(f.D)},
               {"composite", f.composite},  {"other", f.other}};
    } else if (what == "dress") {
        DressingPair d = buildDressingQS(c.quad, p.value("spaces", 2), p.value("strict", true),
                                         mode);
        out = {{"Q", matrixJson(d.Q)}, {"S", matrixJson(d.S)}, {"legs", d.legsN}};
    } else if (what == "monodromy") {
        TensorMatrix T = monodromy(c.model.A, p.value("sites", 2), c.quad,
                                   p.value("strict", true), mode);
        out = {{"T", matrixJson(T)}};
    } else if (what == "hamiltonian") {
        ShiftOperator H = hamiltonianClosedForm(c.model);
        out = {{"H", shiftOperatorJson(H)}};
    } else {
        throw Error("unknown builder: " + what);
    }
    out["n"] = n;
    out["builder"] = what;
    return out.dump(2);
}

std::string eigenSweepCsv(const std::string& paramsJson, std::string& summaryJson) {
    json p = paramsJson.empty() ? json::object() : json::parse(paramsJson);
    Eigenfunction e;
    e.k = p.value("k", 1);
    e.parity = p.value("parity", "cos") == std::string("sin") ? Parity::Sin : Parity::Cos;
    e.m1 = p.value("m1", 1.0);
    e.m2 = p.value("m2", 1.0);
    e.mu = p.value("mu", 1.0);
    e.mode = p.value("exponent", "derived") == std::string("paper") ? ExponentMode::Paper
                                                                    : ExponentMode::Derived;
    int samples = p.value("samples", 20);
    uint64_t seed = p.value("seed", 0);
    if (e.mu <= 0) throw Error("eigen: mu must be positive");
    if (samples < 1) throw Error("eigen: need at least one sample");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::ostringstream csv;
    csv.setf(std::ios::scientific);
    csv.precision(12);
    csv << "q,value,residual\n";
    double maxResidual = 0.0;
    for (int i = 0; i < samples; ++i) {
        // sample away from the poles at q = +-mu and the window midpoint
        double u = uni(rng) * 0.8 + 0.05;
        if (u > 0.45) u += 0.10;
        double q = u * e.mu;
        double t1 = e.m1 * e.m1 / (q + e.mu) * e.value(q + 2 * e.mu);
        double t2 = e.m2 * e.m2 / (q - e.mu) * e.value(q - 2 * e.mu);
        double scale = std::max({std::fabs(t1), std::fabs(t2), 1e-30});
        double residual = std::fabs(t1 - t2) / scale;
        maxResidual = std::max(maxResidual, residual);
        csv << q << "," << e.value(q) << "," << residual << "\n";
    }
    json summary = {{"samples", samples},
                    {"seed", seed},
                    {"max_relative_residual", maxResidual},
                    {"zero_mode", maxResidual <= 1e-9}};
    summaryJson = summary.dump(2);
    return csv.str();
}

} // namespace dynrefl
