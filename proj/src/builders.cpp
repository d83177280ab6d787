#include "builders.hpp"

#include <sstream>

namespace dynrefl {

namespace {

TensorMatrix shifted(const TensorMatrix& m, const std::string& leg, int eps) {
    if (eps == 0) return m;
    return m.dynamicalShift({leg, eps > 0 ? 1 : -1, std::abs(eps)});
}

std::vector<std::string> quantumLegIds(const TensorMatrix& m) {
    std::vector<std::string> ids;
    for (const auto& l : m.legs())
        if (l.role == LegRole::Quantum) ids.push_back(l.id);
    return ids;
}

void require(const VerificationReport& r, const std::string& what) {
    if (r.pass) return;
    std::ostringstream os;
    os << what << " failed";
    if (r.witness) {
        os << " at row (";
        for (size_t i = 0; i < r.witness->row.size(); ++i) os << (i ? "," : "") << r.witness->row[i];
        os << ") col (";
        for (size_t i = 0; i < r.witness->col.size(); ++i) os << (i ? "," : "") << r.witness->col[i];
        os << "): " << r.witness->residual;
    }
    if (!r.note.empty()) os << " [" << r.note << "]";
    throw Error(os.str());
}

} // namespace

std::vector<EntryDiff> entrywiseDiff(const TensorMatrix& built, const TensorMatrix& reference) {
    TensorMatrix d = built - reference;
    std::vector<EntryDiff> out;
    for (const auto& [k, v] : d.entries()) {
        ShiftOperator b = built.at(k.first, k.second);
        ShiftOperator r = reference.at(k.first, k.second);
        out.push_back({k.first, k.second, residualString(b), residualString(r)});
    }
    return out;
}

ABCDQuadruple buildBCDFromA(const TensorMatrix& A, AlgebraSignature sig, bool strict,
                            const CheckMode& mode) {
    ABCDQuadruple q;
    q.reg = A.registry();
    q.legTemplate = A.legs();
    q.sig = sig;
    q.A = A.withRoleTag("A");
    if (strict) {
        ABCDQuadruple pre = q;
        pre.B = pre.C = pre.D = A; // placeholders; only the A-relations are used
        require(compareProducts("unitarity_A", "A12 A21 = I", {A, swapTemplateLegs(A)},
                                {TensorMatrix::identity(q.reg, q.legTemplate)}, mode),
                "premise: unitarity of A");
        require(A.zeroWeightCheck({{"1", 1}, {"2", 1}}), "premise: zero weight of A");
        require(checkDYBE(pre, 'a', sig, mode), "premise: A-equation");
    }
    TensorMatrix A21 = swapTemplateLegs(A);
    const std::string l1 = q.legTemplate[0].id, l2 = q.legTemplate[1].id;
    q.B = A.partialTranspose({l1}).scShift(l1).withRoleTag("B");
    q.C = A21.partialTranspose({l2}).scShift(l2).withRoleTag("C");
    q.D = A21.partialTranspose({l1, l2}).slShift(l1).slShift(l2).withRoleTag("D");
    if (strict) {
        require(compareProducts("B12 = C21", "theo:BCD", {q.B}, {swapTemplateLegs(q.C)}, mode),
                "postcondition: B12 = C21");
        for (char v : {'a', 'b', 'c', 'd'})
            require(checkDYBE(q, v, sig, mode), std::string("postcondition: equation ") + v);
        require(compareProducts("unitarity_D", "D12 D21 = I", {q.D, swapTemplateLegs(q.D)},
                                {TensorMatrix::identity(q.reg, q.legTemplate)}, mode),
                "postcondition: unitarity of D");
    }
    return q;
}

TensorMatrix buildTransposedLax(const TensorMatrix& T, const ABCDQuadruple& q, bool strict,
                                const CheckMode& mode) {
    if (strict) require(checkRLL(T, q, mode), "premise: Lax exchange relation");
    return T.partialTranspose({"1"}).scShift("1").withRoleTag("Tc");
}

GammaAdmission admitGamma(const TensorMatrix& gamma, const ABCDQuadruple& q,
                          const CheckMode& mode) {
    GammaAdmission adm;
    adm.reflection = checkReflection(gamma, q, q.sig, mode);
    // shiftless exchange condition: A g1 B g2 = g2 C g1 D on the bare template
    const auto& amb = q.legTemplate;
    TensorMatrix g1 = gamma.embed(amb);
    TensorMatrix g2 = gamma.relabel({{"1", "2"}}).embed(amb);
    adm.shiftless = compareProducts("gamma_condition", "theo:tau gamma",
                                    {q.A, g1, q.B, g2}, {g2, q.C, g1, q.D}, mode);
    return adm;
}

TensorMatrix buildKFromTGamma(const TensorMatrix& T, const TensorMatrix& gamma,
                              const ABCDQuadruple& q, bool strict, const CheckMode& mode) {
    auto qlegs = quantumLegIds(T);
    if (strict) {
        // gamma solving the reflection equation is the right premise for the
        // minus-shift sandwich below; with a plus shift the construction
        // needs the stronger shiftless exchange condition instead, which the
        // diagonal gamma family fails
        auto adm = admitGamma(gamma, q, mode);
        require(adm.reflection, "premise: gamma reflection equation");
    }
    TensorMatrix g = gamma.embed(T.legs());
    for (const auto& id : qlegs) g = shifted(g, id, -1);
    TensorMatrix Tc = buildTransposedLax(T, q, strict, mode);
    TensorMatrix K = (T * g * Tc).withRoleTag("K");
    if (strict) require(checkReflection(K, q, q.sig, mode), "postcondition: reflection equation");
    return K;
}

TensorMatrix coactionDress(const TensorMatrix& K, const TensorMatrix& L,
                           const TensorMatrix& J, int alpha, const ABCDQuadruple& q,
                           bool strict, const CheckMode& mode) {
    if (strict) require(checkCoaction(L, J, q, alpha, mode), "premise: coaction relations");
    TensorMatrix Ke = K.embed(L.legs());
    for (const auto& id : quantumLegIds(L)) Ke = shifted(Ke, id, alpha);
    TensorMatrix Kt = (L * Ke * J).withRoleTag("K");
    if (strict) require(checkReflection(Kt, q, q.sig, mode), "postcondition: reflection equation");
    return Kt;
}

TensorMatrix monodromy(const TensorMatrix& A, int sites, const ABCDQuadruple& q,
                       bool strict, const CheckMode& mode) {
    if (sites < 1) throw Error("monodromy: need at least one site");
    const RegistryPtr& reg = A.registry();
    int n = A.legs()[0].dim;
    std::vector<Leg> amb = {{"1", n, LegRole::Auxiliary}};
    for (int i = 1; i <= sites; ++i)
        amb.push_back({"a" + std::to_string(i), n, LegRole::Quantum});
    // site i factor carries the cumulative shift by the sites to its right;
    // the site-m factor is leftmost (see the exchange-relation certification)
    TensorMatrix T = TensorMatrix::identity(reg, amb);
    for (int i = sites; i >= 1; --i) {
        TensorMatrix f = A.relabel({{"2", "a" + std::to_string(i)}})
                             .withLegRole("a" + std::to_string(i), LegRole::Quantum)
                             .embed(amb);
        for (int j = i + 1; j <= sites; ++j) f = shifted(f, "a" + std::to_string(j), -1);
        T = T * f;
    }
    T = T.withRoleTag("T");
    if (strict) require(checkRLL(T, q, mode), "postcondition: Lax exchange relation");
    return T;
}

ABCDQuadruple buildDualABCD(const ABCDQuadruple& q, bool strict, const CheckMode& mode) {
    const std::string l1 = q.legTemplate[0].id, l2 = q.legTemplate[1].id;
    ABCDQuadruple d;
    d.reg = q.reg;
    d.legTemplate = q.legTemplate;
    d.sig = q.sig;
    d.A = q.A.inverse().partialTranspose({l1, l2}).withRoleTag("A");
    d.B = q.B.partialTranspose({l2}).inverse().partialTranspose({l1}).withRoleTag("B");
    d.C = q.C.partialTranspose({l1}).inverse().partialTranspose({l2}).withRoleTag("C");
    d.D = q.D.partialTranspose({l1, l2}).inverse().withRoleTag("D");
    if (strict) {
        require(compareProducts("Ct12 = Bt21", "theo:dual", {d.C}, {swapTemplateLegs(d.B)}, mode),
                "postcondition: dual C12 = B21");
        require(compareProducts("dual_unitarity", "theo:dual",
                                {d.A, swapTemplateLegs(d.A)},
                                {TensorMatrix::identity(d.reg, d.legTemplate)}, mode),
                "postcondition: dual A unitarity");
        // D-from-A inter-relation survives dualization; see dualInterRelations
        // for the full recorded verdict
        require(dualInterRelations(d)[2], "postcondition: dual D from dual A");
    }
    return d;
}

std::vector<VerificationReport> dualInterRelations(const ABCDQuadruple& d,
                                                   const CheckMode& mode) {
    const std::string l1 = d.legTemplate[0].id, l2 = d.legTemplate[1].id;
    TensorMatrix A21 = swapTemplateLegs(d.A);
    std::vector<VerificationReport> out;
    out.push_back(compareProducts("dual_interrelations", "cor:dual B", {d.B},
                                  {d.A.partialTranspose({l1}).scShift(l1)}, mode));
    out.push_back(compareProducts("dual_interrelations", "cor:dual C", {d.C},
                                  {A21.partialTranspose({l2}).scShift(l2)}, mode));
    out.push_back(compareProducts("dual_interrelations", "cor:dual D", {d.D},
                                  {A21.partialTranspose({l1, l2}).slShift(l1).slShift(l2)}, mode));
    return out;
}

TensorMatrix fusedCoefficient(const ABCDQuadruple& q, char which, FuseSide side,
                              const std::string& a, const std::string& ap,
                              const std::string& b, const std::vector<Leg>& ambient) {
    const TensorMatrix* src = nullptr;
    switch (which) {
    case 'A': src = &q.A; break;
    case 'B': src = &q.B; break;
    case 'C': src = &q.C; break;
    case 'D': src = &q.D; break;
    default: throw Error("fused coefficient: which must be one of A,B,C,D");
    }
    if (side == FuseSide::Left) {
        // composite <a ap> in the first slot against b
        switch (which) {
        case 'A': return shifted(onLegs(*src, ap, b, ambient), a, -1) * onLegs(*src, a, b, ambient);
        case 'C': return shifted(onLegs(*src, ap, b, ambient), a, -1) * onLegs(*src, a, b, ambient);
        case 'D': return onLegs(*src, ap, b, ambient) * shifted(onLegs(*src, a, b, ambient), ap, 1);
        case 'B': return onLegs(*src, ap, b, ambient) * shifted(onLegs(*src, a, b, ambient), ap, 1);
        }
    }
    // composite <a ap> in the second slot against b; this side follows from
    // the first by relabelling the base relation, which lands the composite K
    // in the leading position, and then flipping back with unitarity -- hence
    // the inverse-like shape (B built from the base C's placement and the
    // second-factor shifts sitting on the legs the unitarity flip exposes)
    switch (which) {
    case 'A': return onLegs(*src, b, a, ambient) * shifted(onLegs(*src, b, ap, ambient), a, -1);
    case 'D': return shifted(onLegs(*src, b, a, ambient), ap, 1) * onLegs(*src, b, ap, ambient);
    case 'C': return onLegs(*src, b, ap, ambient) * shifted(onLegs(*src, b, a, ambient), ap, 1);
    case 'B': return shifted(onLegs(*src, b, ap, ambient), a, -1) * onLegs(*src, b, a, ambient);
    }
    throw Error("unreachable");
}

TensorMatrix doubleFusedCoefficient(const ABCDQuadruple& q, char which, bool leftFirst,
                                    const std::vector<Leg>& ambient) {
    if (leftFirst) {
        // fuse <11'> against a single leg, then fuse the second slot <22'>
        auto fl = [&](const std::string& y) {
            return fusedCoefficient(q, which, FuseSide::Left, "1", "1p", y, ambient);
        };
        switch (which) {
        case 'A': return fl("2") * shifted(fl("2p"), "2", -1);
        case 'D': return shifted(fl("2"), "2p", 1) * fl("2p");
        case 'B': return shifted(fl("2p"), "2", -1) * fl("2");
        case 'C': return fl("2p") * shifted(fl("2"), "2p", 1);
        }
    } else {
        auto fr = [&](const std::string& x) {
            return fusedCoefficient(q, which, FuseSide::Right, "2", "2p", x, ambient);
        };
        switch (which) {
        case 'A': return shifted(fr("1p"), "1", -1) * fr("1");
        case 'C': return shifted(fr("1p"), "1", -1) * fr("1");
        case 'D': return fr("1p") * shifted(fr("1"), "1p", 1);
        case 'B': return fr("1p") * shifted(fr("1"), "1p", 1);
        }
    }
    throw Error("double fused coefficient: which must be one of A,B,C,D");
}

FusedSolution fuse(const TensorMatrix& K, const TensorMatrix& Kprime,
                   const ABCDQuadruple& q, FuseSide side, bool strict,
                   const CheckMode& mode) {
    int n = q.legTemplate[0].dim;
    FusedSolution f;
    if (side == FuseSide::Left) {
        f.composite = {"1", "1p"};
        f.other = {"2"};
    } else {
        f.composite = {"2", "2p"};
        f.other = {"1"};
    }
    const std::string& a = f.composite[0];
    const std::string& ap = f.composite[1];
    const std::string& b = f.other[0];
    std::vector<Leg> cl = {{a, n, LegRole::Auxiliary}, {ap, n, LegRole::Auxiliary}};
    std::vector<Leg> amb = cl;
    amb.push_back({b, n, LegRole::Auxiliary});

    // K_<aa'> = K'_{a'}(q - h^(a))  B_{a'a}(q)  K_a(q + h^(a')); the middle
    // factor carries the new leg first on both sides (certified against two
    // inequivalent opposite-slot solutions)
    TensorMatrix Kp = shifted(Kprime.relabel({{"1", ap}}).embed(cl), a, -1);
    TensorMatrix Bc = onLegs(q.B, ap, a, cl);
    TensorMatrix Ka = shifted(K.relabel({{"1", a}}).embed(cl), ap, 1);
    f.K = (Kp * Bc * Ka).withRoleTag("K");

    std::vector<Leg> amb4 = {{"1", n, LegRole::Auxiliary},
                             {"1p", n, LegRole::Auxiliary},
                             {"2", n, LegRole::Auxiliary},
                             {"2p", n, LegRole::Auxiliary}};
    bool leftFirst = side == FuseSide::Left;
    f.A = doubleFusedCoefficient(q, 'A', leftFirst, amb4);
    f.B = doubleFusedCoefficient(q, 'B', leftFirst, amb4);
    f.C = doubleFusedCoefficient(q, 'C', leftFirst, amb4);
    f.D = doubleFusedCoefficient(q, 'D', leftFirst, amb4);

    if (strict) {
        // opposite-slot K must solve the base exchange algebra
        require(checkReflection(K, q, q.sig, mode), "premise: K reflection equation");
        require(checkReflection(Kprime, q, q.sig, mode), "premise: K' reflection equation");
        TensorMatrix Kb = K.relabel({{"1", b}}).embed(amb);
        require(checkFusedExchange(f, Kb, q, mode), "postcondition: fused exchange relation");
    }
    return f;
}

VerificationReport checkFusedExchange(const FusedSolution& f, const TensorMatrix& Kother,
                                      const ABCDQuadruple& q, const CheckMode& mode) {
    int n = q.legTemplate[0].dim;
    std::vector<Leg> amb;
    for (const auto& id : f.composite) amb.push_back({id, n, LegRole::Auxiliary});
    amb.push_back({f.other[0], n, LegRole::Auxiliary});
    FuseSide side = f.composite[0] == "1" ? FuseSide::Left : FuseSide::Right;
    TensorMatrix cA = fusedCoefficient(q, 'A', side, f.composite[0], f.composite[1], f.other[0], amb);
    TensorMatrix cB = fusedCoefficient(q, 'B', side, f.composite[0], f.composite[1], f.other[0], amb);
    TensorMatrix cC = fusedCoefficient(q, 'C', side, f.composite[0], f.composite[1], f.other[0], amb);
    TensorMatrix cD = fusedCoefficient(q, 'D', side, f.composite[0], f.composite[1], f.other[0], amb);
    TensorMatrix Kc = f.K.embed(amb);
    TensorMatrix Kb = Kother.embed(amb);
    auto compShift = [&](const TensorMatrix& m, int eps) {
        TensorMatrix r = m;
        for (const auto& id : f.composite) r = shifted(r, id, eps);
        return r;
    };
    auto otherShift = [&](const TensorMatrix& m, int eps) {
        return shifted(m, f.other[0], eps);
    };
    // the fused K sits in the slot it was fused into; each K is shifted by
    // the weight of the opposite slot on the left, its own on the right
    std::vector<TensorMatrix> lhs, rhs;
    if (side == FuseSide::Left) {
        lhs = {cA, otherShift(Kc, -1), cB, compShift(Kb, 1)};
        rhs = {compShift(Kb, -1), cC, otherShift(Kc, 1), cD};
    } else {
        lhs = {cA, compShift(Kb, -1), cB, otherShift(Kc, 1)};
        rhs = {otherShift(Kc, -1), cC, compShift(Kb, 1), cD};
    }
    return compareProducts("fused_exchange", "lem:fus exchange", lhs, rhs, mode);
}

VerificationReport checkFusedUnitarity(const ABCDQuadruple& q, const CheckMode& mode) {
    int n = q.legTemplate[0].dim;
    std::vector<Leg> amb4 = {{"1", n, LegRole::Auxiliary},
                             {"1p", n, LegRole::Auxiliary},
                             {"2", n, LegRole::Auxiliary},
                             {"2p", n, LegRole::Auxiliary}};
    std::map<std::string, std::string> swapSlots = {
        {"1", "2"}, {"1p", "2p"}, {"2", "1"}, {"2p", "1p"}};
    std::vector<std::string> order = {"1", "1p", "2", "2p"};
    auto swapped = [&](const TensorMatrix& m) {
        return m.relabel(swapSlots).reorderLegs(order);
    };
    TensorMatrix id4 = TensorMatrix::identity(q.reg, amb4);
    TensorMatrix A12 = doubleFusedCoefficient(q, 'A', true, amb4);
    auto r = compareProducts("fused_unitarity", "lem:fus unitarity",
                             {A12, swapped(A12)}, {id4}, mode);
    if (!r.pass) return r;
    TensorMatrix D12 = doubleFusedCoefficient(q, 'D', true, amb4);
    r = compareProducts("fused_unitarity", "lem:fus unitarity",
                        {D12, swapped(D12)}, {id4}, mode);
    if (!r.pass) return r;
    TensorMatrix B12 = doubleFusedCoefficient(q, 'B', true, amb4);
    TensorMatrix C12 = doubleFusedCoefficient(q, 'C', true, amb4);
    r = compareProducts("fused_unitarity", "lem:fus C=B swapped",
                        {C12}, {swapped(B12)}, mode);
    r.identity = "fused_unitarity";
    return r;
}

std::vector<VerificationReport> fusedOrderIndependence(const ABCDQuadruple& q,
                                                       const CheckMode& mode) {
    int n = q.legTemplate[0].dim;
    std::vector<Leg> amb4 = {{"1", n, LegRole::Auxiliary},
                             {"1p", n, LegRole::Auxiliary},
                             {"2", n, LegRole::Auxiliary},
                             {"2p", n, LegRole::Auxiliary}};
    std::vector<VerificationReport> out;
    for (char which : {'A', 'B', 'C', 'D'}) {
        out.push_back(compareProducts("fused_order", std::string("order independence ") + which,
                                      {doubleFusedCoefficient(q, which, true, amb4)},
                                      {doubleFusedCoefficient(q, which, false, amb4)}, mode));
    }
    return out;
}

DressingPair buildDressingQS(const ABCDQuadruple& q, int spaces, bool strict,
                             const CheckMode& mode) {
    if (spaces < 2) throw Error("dressing: need at least two spaces");
    const RegistryPtr& reg = q.reg;
    int n = q.legTemplate[0].dim;
    DressingPair out;
    std::vector<Leg> legsN;
    for (int i = 1; i <= spaces; ++i) {
        out.legsN.push_back(std::to_string(i));
        legsN.push_back({std::to_string(i), n, LegRole::Auxiliary});
    }
    auto check = [&](int i, int j) {
        // Mc_{ij} = P_{ij} M_{ij}
        return std::pair<TensorMatrix, TensorMatrix>{
            permutationMatrix(reg, std::to_string(i), std::to_string(j), legsN) *
                onLegs(q.A, std::to_string(i), std::to_string(j), legsN),
            permutationMatrix(reg, std::to_string(i), std::to_string(j), legsN) *
                onLegs(q.D, std::to_string(i), std::to_string(j), legsN)};
    };
    TensorMatrix Q = TensorMatrix::identity(reg, legsN);
    TensorMatrix S = TensorMatrix::identity(reg, legsN);
    for (int i = 2; i <= spaces; ++i) {
        auto [Ac, Dc] = check(i, i - 1);
        // the Q factors accumulate *negative* weight shifts; the positive
        // choice breaks the commutation relations from three spaces on
        TensorMatrix fq = Ac;
        for (int j = 1; j <= i - 2; ++j) fq = shifted(fq, std::to_string(j), -1);
        Q = Q * fq;
        TensorMatrix fs = Dc;
        for (int j = i + 1; j <= spaces; ++j) fs = shifted(fs, std::to_string(j), 1);
        S = S * fs;
    }
    out.Q = Q.withRoleTag("Q");
    out.S = S.withRoleTag("S");

    if (strict) require(verifyDressing(out, q, mode), "postcondition: dressing relations");
    return out;
}

VerificationReport verifyDressing(const DressingPair& p, const ABCDQuadruple& q,
                                  const CheckMode& mode) {
    int spaces = static_cast<int>(p.legsN.size());
    int n = q.legTemplate[0].dim;
    // fuse all N legs iteratively against one extra space
    std::string m = std::to_string(spaces + 1);
    std::vector<Leg> amb;
    for (const auto& id : p.legsN) amb.push_back({id, n, LegRole::Auxiliary});
    amb.push_back({m, n, LegRole::Auxiliary});
    auto iterate = [&](const TensorMatrix& base, char which) {
        TensorMatrix acc = onLegs(base, "1", m, amb);
        for (int x = 2; x <= spaces; ++x) {
            TensorMatrix nf = onLegs(base, std::to_string(x), m, amb);
            if (which == 'A' || which == 'C') {
                for (int j = 1; j < x; ++j) nf = shifted(nf, std::to_string(j), -1);
                acc = nf * acc;
            } else {
                acc = onLegs(base, std::to_string(x), m, amb) *
                      shifted(acc, std::to_string(x), 1);
            }
        }
        return acc;
    };
    TensorMatrix Anm = iterate(q.A, 'A'), Bnm = iterate(q.B, 'B');
    TensorMatrix Cnm = iterate(q.C, 'C'), Dnm = iterate(q.D, 'D');
    return checkDressing(p.Q, p.S, Anm, Bnm, Cnm, Dnm, p.legsN, {m}, mode);
}

TensorMatrix buildKplusCrossing(const TensorMatrix& KK, int zVar, const Polynomial& eta) {
    const RegistryPtr& reg = KK.registry();
    if (zVar < 0 || zVar >= reg->size() || reg->isQ(zVar) || zVar == reg->muIndex())
        throw Error("crossing: zVar must name a spectral variable");
    Polynomial repl = Polynomial::variable(reg, zVar) + eta * mpq_class(1, 2);
    return KK.partialTranspose({KK.legs()[0].id})
        .substitute(zVar, repl)
        .inverse()
        .scShift(KK.legs()[0].id, -1)
        .withRoleTag("K+");
}

} // namespace dynrefl
