#include "models.hpp"

#include <cmath>

namespace dynrefl {

namespace {

Polynomial qvar(const RegistryPtr& reg, int i) { return Polynomial::variable(reg, i); }

Polynomial muPoly(const RegistryPtr& reg) {
    return Polynomial::variable(reg, reg->muIndex());
}

Polynomial massPoly(const RegistryPtr& reg, int i) {
    int idx = reg->indexOf("m" + std::to_string(i + 1));
    if (idx < 0) throw Error("registry carries no mass m" + std::to_string(i + 1));
    return Polynomial::variable(reg, idx);
}

// I + sum over i != j of coeff(i,j) * (E_{r1(i,j)} (x) E_{r2(i,j)})-style terms
struct TwoLegTerm {
    int r1, c1, r2, c2;
    RationalFunction coeff;
};

TensorMatrix twoLegMatrix(const RegistryPtr& reg, const std::vector<Leg>& legs,
                          const std::vector<TwoLegTerm>& terms) {
    TensorMatrix m = TensorMatrix::identity(reg, legs);
    for (const auto& t : terms) m.add({t.r1, t.r2}, {t.c1, t.c2}, ShiftOperator::fromRational(t.coeff));
    return m;
}

} // namespace

RationalModel rationalModel(int n) {
    if (n < 2) throw Error("rational model needs n >= 2");
    std::vector<std::string> params;
    for (int i = 1; i <= n; ++i) params.push_back("m" + std::to_string(i));
    RationalModel m;
    m.n = n;
    m.reg = VariableRegistry::make(n, params);
    m.legTemplate = {{"1", n, LegRole::Auxiliary}, {"2", n, LegRole::Auxiliary}};
    const RegistryPtr& reg = m.reg;
    Polynomial mu = muPoly(reg);

    // D carries + on the Cartan term: the value produced by the B,C,D
    // construction from A, and the one for which the D-side Yang-Baxter
    // equations and the reflection solutions actually close.
    std::vector<TwoLegTerm> aTerms, bTerms, cTerms, dTerms;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            RationalFunction g = RationalFunction::fraction(mu, qvar(reg, i) - qvar(reg, j));
            RationalFunction gs = RationalFunction::fraction(mu, qvar(reg, i) - qvar(reg, j) + mu);
            aTerms.push_back({i, j, j, i, g});    //  E_ij (x) E_ji
            aTerms.push_back({i, i, j, j, -g});   // -E_ii (x) E_jj
            bTerms.push_back({j, i, j, i, gs});   //  E_ji (x) E_ji
            bTerms.push_back({i, i, j, j, -gs});  // -E_ii (x) E_jj
            cTerms.push_back({j, i, j, i, gs});   //  E_ji (x) E_ji
            cTerms.push_back({j, j, i, i, -gs});  // -E_jj (x) E_ii
            dTerms.push_back({i, j, j, i, g});    //  E_ij (x) E_ji
            dTerms.push_back({i, i, j, j, g});    // +E_ii (x) E_jj
        }
    m.A = twoLegMatrix(reg, m.legTemplate, aTerms).withRoleTag("A");
    m.B = twoLegMatrix(reg, m.legTemplate, bTerms).withRoleTag("B");
    m.C = twoLegMatrix(reg, m.legTemplate, cTerms).withRoleTag("C");
    m.D = twoLegMatrix(reg, m.legTemplate, dTerms).withRoleTag("D");
    return m;
}

TensorMatrix onLegs(const TensorMatrix& tmpl, const std::string& legA,
                    const std::string& legB, const std::vector<Leg>& ambient) {
    return tmpl.relabel({{"1", legA}, {"2", legB}}).embed(ambient);
}

TensorMatrix gammaSolution(const RationalModel& model, GammaKind kind,
                           const std::optional<Polynomial>& f) {
    const RegistryPtr& reg = model.reg;
    const int n = model.n;
    std::vector<Leg> leg = {{"1", n, LegRole::Auxiliary}};
    TensorMatrix g(reg, leg);
    switch (kind) {
    case GammaKind::RankOne:
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                g.set({i}, {j}, RationalFunction(massPoly(reg, i) * massPoly(reg, j)));
        break;
    case GammaKind::AntisymScaled:
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                g.set({i}, {j}, RationalFunction((qvar(reg, i) - qvar(reg, j)) *
                                                 massPoly(reg, i) * massPoly(reg, j)));
            }
        break;
    case GammaKind::Diagonal: {
        Polynomial fp = f ? *f : Polynomial::constant(reg, 1);
        for (int i = 0; i < n; ++i) {
            std::vector<int> ei(n, 0);
            ei[i] = 1;
            std::vector<int> mei(n, 0);
            mei[i] = -1;
            RationalFunction ratio = RationalFunction::fraction(fp.shiftQ(ei), fp.shiftQ(mei));
            Polynomial prod = Polynomial::constant(reg, 1);
            for (int k = 0; k < n; ++k)
                if (k != i) prod = prod * (qvar(reg, i) - qvar(reg, k));
            g.set({i}, {i}, ratio * RationalFunction(prod));
        }
        break;
    }
    }
    return g.withRoleTag("gamma");
}

ShiftOperator hamiltonianFromPair(const TensorMatrix& K, const TensorMatrix& KK) {
    if (K.legs().size() != 1 || KK.legs() != K.legs())
        throw Error("hamiltonian: one-leg K and KK over the same leg required");
    const std::string& leg = K.legs()[0].id;
    TensorMatrix E = expShiftMatrix(K.registry(), leg, K.legs(), 1);
    TensorMatrix inner = E * K * KK.inverse() * E;
    return inner.traceOverLeg(leg).scalar();
}

ShiftOperator hamiltonianClosedForm(const RationalModel& model) {
    const RegistryPtr& reg = model.reg;
    const int n = model.n;
    Polynomial mu = muPoly(reg);
    ShiftOperator h(reg);
    for (int l = 0; l < n; ++l) {
        Polynomial num = mu * massPoly(reg, l) * massPoly(reg, l);
        Polynomial den = Polynomial::constant(reg, 1);
        for (int k = 0; k < n; ++k) den = den * (qvar(reg, l) - qvar(reg, k) + mu);
        std::vector<int> v(n, 0);
        v[l] = 2;
        h.addTerm(v, RationalFunction::fraction(num, den));
    }
    return h;
}

RegistryPtr relativeRegistry() {
    return VariableRegistry::makeNamed({"q", "Q"}, {"m1", "m2"});
}

namespace {

// variable-by-variable image of a polynomial in the (q,Q) registry
Polynomial mapToRelative(const Polynomial& p, const RegistryPtr& target) {
    const RegistryPtr& src = p.registry();
    if (src->qCount() != 2) throw Error("relative coordinates are an n=2 reduction");
    std::vector<Polynomial> image;
    mpq_class half(1, 2);
    Polynomial q = Polynomial::variable(target, 0);
    Polynomial Q = Polynomial::variable(target, 1);
    for (int i = 0; i < src->size(); ++i) {
        const std::string& nm = src->name(i);
        if (nm == "q1") image.push_back((Q + q) * half);
        else if (nm == "q2") image.push_back((Q - q) * half);
        else {
            int t = target->indexOf(nm);
            if (t < 0) throw Error("variable " + nm + " missing from the relative registry");
            image.push_back(Polynomial::variable(target, t));
        }
    }
    Polynomial out = Polynomial::constant(target, 0);
    for (const auto& [e, c] : p.terms()) {
        Polynomial term = Polynomial::constant(target, c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) term = term * image[i];
        out = out + term;
    }
    return out;
}

} // namespace

ShiftOperator reduceN2(const ShiftOperator& H, const RegistryPtr& target) {
    const RegistryPtr& src = H.registry();
    if (src->qCount() != 2) throw Error("relative coordinates are an n=2 reduction");
    ShiftOperator out(target);
    for (const auto& [v, f] : H.terms()) {
        if (!rfEqualExact(f, f.shiftQ({1, 1})))
            throw Error("operator is not invariant under simultaneous translation");
        RationalFunction coeff = RationalFunction::fraction(
            mapToRelative(f.numerator(), target),
            mapToRelative(f.denominatorPolynomial(), target));
        out.addTerm({v[0] - v[1], v[0] + v[1]}, coeff);
    }
    return out;
}

// ---------------- numerics ----------------

double logGamma(double x) {
    // Lanczos, g = 7, 9 terms
    static const double c[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(M_PI / std::fabs(std::sin(M_PI * x))) - logGamma(1.0 - x);
    }
    double z = x - 1.0;
    double a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
    double t = z + 7.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

namespace {

// sign of Gamma(y) for non-integer y (reflection: Gamma(1-y) > 0 for y < 0)
double gammaSign(double y) {
    if (y > 0.0) return 1.0;
    return std::sin(M_PI * y) > 0.0 ? 1.0 : -1.0;
}

} // namespace

double gammaFn(double x) { return gammaSign(x) * std::exp(logGamma(x)); }

double Eigenfunction::value(double q) const {
    double x = (q + mu) / (4.0 * mu);
    double g = gammaSign(x + 0.5) * gammaSign(x) * std::exp(logGamma(x + 0.5) - logGamma(x));
    double c = (mode == ExponentMode::Paper) ? 1.0 / (4.0 * mu) : 1.0 / (2.0 * mu);
    double ex = std::exp(-c * q * std::log(m1 / m2));
    double arg = k * M_PI * q / mu;
    double trig = (parity == Parity::Sin) ? std::sin(arg) : std::cos(arg);
    return g * ex * trig;
}

double applyRelativeHamiltonian(const Eigenfunction& e, double q) {
    return e.m1 * e.m1 / (q + e.mu) * e.value(q + 2.0 * e.mu) -
           e.m2 * e.m2 / (q - e.mu) * e.value(q - 2.0 * e.mu);
}

} // namespace dynrefl
