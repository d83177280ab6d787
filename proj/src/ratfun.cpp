#include "ratfun.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace dynrefl {

// ---------------- LinearForm ----------------

LinearForm::LinearForm(std::vector<mpz_class> coeffs, mpz_class constant)
    : coeffs_(std::move(coeffs)), constant_(std::move(constant)) {
    // primitive, positive leading coefficient
    mpz_class g = 0;
    for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), constant_.get_mpz_t());
    if (g == 0) throw Error("linear form: zero form");
    int sign = 0;
    for (const auto& c : coeffs_) {
        if (c != 0) { sign = (c > 0) ? 1 : -1; break; }
    }
    if (sign == 0) sign = (constant_ > 0) ? 1 : -1;
    if (sign < 0) g = -g;
    for (auto& c : coeffs_) c /= g;
    constant_ /= g;
}

std::optional<std::pair<mpq_class, LinearForm>> LinearForm::fromPolynomial(const Polynomial& p) {
    if (p.isZero() || p.isConstant() || p.totalDegree() > 1) return std::nullopt;
    const RegistryPtr& reg = p.registry();
    std::vector<mpq_class> coeffs(reg->size(), 0);
    mpq_class constant = 0;
    for (const auto& [e, c] : p.terms()) {
        int var = -1;
        for (int i = 0; i < reg->size(); ++i) {
            if (e[i] == 1) var = i;
            else if (e[i] != 0) return std::nullopt;
        }
        if (var < 0) constant = c;
        else coeffs[var] = c;
    }
    // common denominator, then primitive integer form; scalar carries the rest
    mpz_class lcm = 1;
    for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), constant.get_den().get_mpz_t());
    std::vector<mpz_class> zc(reg->size());
    for (int i = 0; i < reg->size(); ++i) {
        mpq_class t = coeffs[i] * mpq_class(lcm);
        zc[i] = t.get_num();
    }
    mpq_class tc = constant * mpq_class(lcm);
    LinearForm form(zc, tc.get_num());
    // scalar = p / form: compare any nonzero coefficient
    mpq_class scalar;
    bool found = false;
    for (int i = 0; i < reg->size() && !found; ++i) {
        if (form.coeffs_[i] != 0) {
            scalar = coeffs[i] / mpq_class(form.coeffs_[i]);
            found = true;
        }
    }
    if (!found) scalar = constant / mpq_class(form.constant_);
    return std::make_pair(scalar, form);
}

Polynomial LinearForm::toPolynomial(const RegistryPtr& reg) const {
    Polynomial p(reg);
    for (int i = 0; i < reg->size(); ++i)
        if (coeffs_[i] != 0) p = p + Polynomial::variable(reg, i) * mpq_class(coeffs_[i]);
    if (constant_ != 0) p = p + Polynomial::constant(reg, mpq_class(constant_));
    return p;
}

LinearForm LinearForm::shiftQ(const RegistryPtr& reg, const std::vector<int>& v) const {
    LinearForm r = *this;
    mpz_class delta = 0;
    for (int k = 0; k < reg->qCount(); ++k) delta += coeffs_[k] * v[k];
    r.coeffs_[reg->muIndex()] += delta;
    return r;
}

mpq_class LinearForm::eval(const std::vector<mpq_class>& point) const {
    mpq_class acc(constant_);
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) acc += mpq_class(coeffs_[i]) * point[i];
    return acc;
}

uint64_t LinearForm::evalMod(const std::vector<uint64_t>& point, uint64_t p) const {
    uint64_t acc = modp::rationalMod(mpq_class(constant_), p);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        uint64_t c = modp::rationalMod(mpq_class(coeffs_[i]), p);
        acc = (acc + modp::mulmod(c, point[i], p)) % p;
    }
    return acc;
}

std::string LinearForm::toString(const RegistryPtr& reg) const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < reg->size(); ++i) {
        if (coeffs_[i] == 0) continue;
        mpz_class c = coeffs_[i];
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? "-" : "+");
        }
        first = false;
        mpz_class ac = abs(c);
        if (ac != 1) os << ac.get_str() << "*";
        os << reg->name(i);
    }
    if (constant_ != 0) {
        if (first) os << constant_.get_str();
        else os << (constant_ < 0 ? "-" : "+") << mpz_class(abs(constant_)).get_str();
        first = false;
    }
    return os.str();
}

bool LinearForm::operator<(const LinearForm& o) const {
    if (coeffs_ != o.coeffs_) return coeffs_ < o.coeffs_;
    return constant_ < o.constant_;
}

// ---------------- RationalFunction ----------------

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)) {
    denPoly_ = Polynomial::constant(num_.registry(), 1);
}

RationalFunction::RationalFunction(Polynomial num, std::map<LinearForm, int> den, Polynomial denPoly)
    : num_(std::move(num)), den_(std::move(den)), denPoly_(std::move(denPoly)) {
    if (denPoly_.isZero()) throw Error("rational function: zero denominator");
    normalize();
}

RationalFunction RationalFunction::zero(const RegistryPtr& reg) {
    return RationalFunction(Polynomial(reg));
}
RationalFunction RationalFunction::one(const RegistryPtr& reg) {
    return RationalFunction(Polynomial::constant(reg, 1));
}
RationalFunction RationalFunction::constant(const RegistryPtr& reg, const mpq_class& c) {
    return RationalFunction(Polynomial::constant(reg, c));
}
RationalFunction RationalFunction::variable(const RegistryPtr& reg, int var) {
    return RationalFunction(Polynomial::variable(reg, var));
}
RationalFunction RationalFunction::fraction(Polynomial num, Polynomial den) {
    if (den.isZero()) throw Error("rational function: zero denominator");
    return RationalFunction(std::move(num), {}, std::move(den));
}

Polynomial RationalFunction::denominatorPolynomial() const {
    Polynomial d = denPoly_;
    for (const auto& [f, e] : den_) d = d * f.toPolynomial(registry()).pow(e);
    return d;
}

namespace {

/// Candidate linear forms to peel off a general denominator: the paper's
/// denominators are products of q_i - q_j + c*mu, q_i + c*mu and mu.
std::vector<LinearForm> linearCandidates(const RegistryPtr& reg) {
    std::vector<LinearForm> out;
    const int n = reg->qCount();
    const int mu = reg->muIndex();
    // q_i - q_j + c*mu (i < j suffices: canonical sign flips the rest)
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int cm = -4; cm <= 4; ++cm) {
                std::vector<mpz_class> c(reg->size(), 0);
                c[i] = 1;
                c[j] = -1;
                c[mu] = cm;
                out.push_back(LinearForm(std::move(c), 0));
            }
    for (int i = 0; i < n; ++i)
        for (int cm = -4; cm <= 4; ++cm) {
            if (cm == 0) continue; // plain q_i handled by the degree-1 path
            std::vector<mpz_class> c(reg->size(), 0);
            c[i] = 1;
            c[mu] = cm;
            out.push_back(LinearForm(std::move(c), 0));
        }
    {
        std::vector<mpz_class> c(reg->size(), 0);
        c[mu] = 1;
        out.push_back(LinearForm(std::move(c), 0));
    }
    return out;
}

} // namespace

void RationalFunction::normalize() {
    const RegistryPtr& reg = num_.registry();
    if (!reg) throw Error("rational function: no registry");

    if (num_.isZero()) {
        den_.clear();
        denPoly_ = Polynomial::constant(reg, 1);
        return;
    }

    // 1. pull linear factors out of the general denominator part
    if (!denPoly_.isConstant()) {
        if (auto lin = LinearForm::fromPolynomial(denPoly_)) {
            num_ = num_ * (1 / lin->first);
            den_[lin->second] += 1;
            denPoly_ = Polynomial::constant(reg, 1);
        } else {
            for (const auto& cand : linearCandidates(reg)) {
                Polynomial cp = cand.toPolynomial(reg);
                while (!denPoly_.isConstant()) {
                    auto q = denPoly_.divideExact(cp);
                    if (!q) break;
                    denPoly_ = *q;
                    den_[cand] += 1;
                }
                if (denPoly_.isConstant()) break;
            }
            if (auto lin = LinearForm::fromPolynomial(denPoly_)) {
                num_ = num_ * (1 / lin->first);
                den_[lin->second] += 1;
                denPoly_ = Polynomial::constant(reg, 1);
            }
        }
    }
    if (denPoly_.isConstant()) {
        mpq_class c = denPoly_.constantValue();
        if (c != 1) {
            num_ = num_ * (1 / c);
            denPoly_ = Polynomial::constant(reg, 1);
        }
    } else {
        // primitive, positive-leading tail; scalar folds into the numerator
        mpq_class c = denPoly_.content();
        if (denPoly_.leadingCoeff() < 0) c = -c;
        if (c != 1) {
            denPoly_ = denPoly_ * (1 / c);
            num_ = num_ * (1 / c);
        }
    }

    // 2. cancel linear denominator factors against the numerator
    for (auto it = den_.begin(); it != den_.end();) {
        Polynomial f = it->first.toPolynomial(reg);
        while (it->second > 0) {
            auto q = num_.divideExact(f);
            if (!q) break;
            num_ = *q;
            it->second -= 1;
        }
        if (it->second == 0) it = den_.erase(it);
        else ++it;
    }

    // 3. general tail: gcd reduction
    if (!denPoly_.isConstant()) {
        Polynomial g = Polynomial::gcd(num_, denPoly_);
        if (!g.isConstant()) {
            auto qn = num_.divideExact(g);
            auto qd = denPoly_.divideExact(g);
            if (qn && qd) {
                num_ = *qn;
                denPoly_ = *qd;
                if (denPoly_.isConstant()) {
                    mpq_class c = denPoly_.constantValue();
                    num_ = num_ * (1 / c);
                    denPoly_ = Polynomial::constant(reg, 1);
                }
            }
        }
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    requireSameRegistry(registry(), o.registry());
    const RegistryPtr& reg = registry();
    // common linear denominator: per-factor max exponent
    std::map<LinearForm, int> den = den_;
    for (const auto& [f, e] : o.den_) den[f] = std::max(den[f], e);
    Polynomial numA = num_, numB = o.num_;
    for (const auto& [f, e] : den) {
        auto ita = den_.find(f);
        int ea = (ita == den_.end()) ? 0 : ita->second;
        auto itb = o.den_.find(f);
        int eb = (itb == o.den_.end()) ? 0 : itb->second;
        Polynomial fp = f.toPolynomial(reg);
        if (e > ea) numA = numA * fp.pow(e - ea);
        if (e > eb) numB = numB * fp.pow(e - eb);
    }
    Polynomial denPoly(reg);
    if (denPoly_ == o.denPoly_) {
        denPoly = denPoly_;
    } else {
        denPoly = denPoly_ * o.denPoly_;
        numA = numA * o.denPoly_;
        numB = numB * denPoly_;
    }
    return RationalFunction(numA + numB, std::move(den), std::move(denPoly));
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    requireSameRegistry(registry(), o.registry());
    std::map<LinearForm, int> den = den_;
    for (const auto& [f, e] : o.den_) den[f] += e;
    return RationalFunction(num_ * o.num_, std::move(den), denPoly_ * o.denPoly_);
}

RationalFunction RationalFunction::operator*(const mpq_class& c) const {
    if (c == 0) return zero(registry());
    RationalFunction r = *this;
    r.num_ = r.num_ * c;
    return r;
}

RationalFunction RationalFunction::reciprocal() const {
    if (isZero()) throw Error("rational function: division by zero");
    return RationalFunction(denominatorPolynomial(), {}, num_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    return *this * o.reciprocal();
}

RationalFunction RationalFunction::shiftQ(const std::vector<int>& v) const {
    const RegistryPtr& reg = registry();
    if (static_cast<int>(v.size()) != reg->qCount())
        throw Error("rf_shift: vector length must equal q-block length");
    RationalFunction r;
    r.num_ = num_.shiftQ(v);
    r.denPoly_ = denPoly_.shiftQ(v);
    for (const auto& [f, e] : den_) r.den_[f.shiftQ(reg, v)] += e;
    return r;
}

RationalFunction RationalFunction::derivative(int var) const {
    // (n/d)' = (n'd - nd')/d^2
    Polynomial d = denominatorPolynomial();
    Polynomial numd = num_.derivative(var) * d - num_ * d.derivative(var);
    std::map<LinearForm, int> den = den_;
    for (auto& [f, e] : den) e *= 2;
    return RationalFunction(std::move(numd), std::move(den), denPoly_ * denPoly_);
}

RationalFunction RationalFunction::substitute(int var, const Polynomial& repl) const {
    Polynomial num = num_.substitute(var, repl);
    Polynomial den = denominatorPolynomial().substitute(var, repl);
    return fraction(std::move(num), std::move(den));
}

mpq_class RationalFunction::eval(const std::vector<mpq_class>& point) const {
    mpq_class d = 1;
    for (const auto& [f, e] : den_) {
        mpq_class v = f.eval(point);
        if (v == 0) throw PoleError("pole at evaluation point: factor (" + f.toString(registry()) + ")");
        for (int k = 0; k < e; ++k) d *= v;
    }
    mpq_class tail = denPoly_.eval(point);
    if (tail == 0) throw PoleError("pole at evaluation point: denominator tail vanishes");
    return num_.eval(point) / (d * tail);
}

uint64_t RationalFunction::evalMod(const std::vector<uint64_t>& point, uint64_t p,
                                   const std::vector<int>* qShift) const {
    const RegistryPtr& reg = registry();
    std::vector<uint64_t> pt = point;
    if (qShift) {
        uint64_t mu = point[reg->muIndex()];
        for (int k = 0; k < reg->qCount(); ++k) {
            int s = (*qShift)[k];
            if (s == 0) continue;
            uint64_t delta = modp::mulmod((s > 0 ? s : -s) % p, mu, p);
            pt[k] = (s > 0) ? (pt[k] + delta) % p : (pt[k] + p - delta) % p;
        }
    }
    uint64_t den = 1;
    for (const auto& [f, e] : den_) {
        uint64_t v = f.evalMod(pt, p);
        if (v == 0) throw PoleError("pole at sample point: factor (" + f.toString(reg) + ")");
        den = modp::mulmod(den, modp::powmod(v, e, p), p);
    }
    uint64_t tail = denPoly_.evalMod(pt, p);
    if (tail == 0) throw PoleError("pole at sample point: denominator tail vanishes");
    den = modp::mulmod(den, tail, p);
    return modp::mulmod(num_.evalMod(pt, p), modp::invmod(den, p), p);
}

int64_t RationalFunction::degreeBound() const {
    int64_t d = num_.totalDegree() + denPoly_.totalDegree();
    for (const auto& [f, e] : den_) d += e;
    return d;
}

std::string RationalFunction::toString() const {
    if (den_.empty() && denPoly_.isConstant()) return num_.toString();
    std::ostringstream os;
    bool parenNum = num_.terms().size() > 1;
    if (parenNum) os << "(" << num_.toString() << ")";
    else os << num_.toString();
    os << " / (";
    bool first = true;
    for (const auto& [f, e] : den_) {
        if (!first) os << "*";
        first = false;
        os << "(" << f.toString(registry()) << ")^" << e;
    }
    if (!denPoly_.isConstant()) {
        if (!first) os << "*";
        os << "(" << denPoly_.toString() << ")^1";
    }
    os << ")";
    return os.str();
}

// ---------------- equality ----------------

bool rfEqualExact(const RationalFunction& a, const RationalFunction& b) {
    requireSameRegistry(a.registry(), b.registry());
    if (a == b) return true;
    Polynomial lhs = a.numerator() * b.denominatorPolynomial();
    Polynomial rhs = b.numerator() * a.denominatorPolynomial();
    return lhs == rhs;
}

EqualityCertificate rfEqualRandom(const RationalFunction& a, const RationalFunction& b,
                                  int trials, uint64_t seed) {
    requireSameRegistry(a.registry(), b.registry());
    const RegistryPtr& reg = a.registry();
    const uint64_t p = modp::kPrime;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint64_t> dist(1, p - 1);
    EqualityCertificate cert;
    cert.exact = false;
    cert.trials = trials;
    cert.seed = seed;
    cert.degreeBound = a.degreeBound() + b.degreeBound();
    {
        std::ostringstream os;
        os << "(" << cert.degreeBound << "/" << p << ")^" << trials;
        cert.failureBound = os.str();
    }
    for (int t = 0; t < trials; ++t) {
        int resamples = 0;
        while (true) {
            std::vector<uint64_t> pt(reg->size());
            for (auto& x : pt) x = dist(rng);
            try {
                uint64_t va = a.evalMod(pt, p);
                uint64_t vb = b.evalMod(pt, p);
                if (va != vb) {
                    cert.equal = false;
                    return cert;
                }
                break;
            } catch (const PoleError&) {
                if (++resamples > 100)
                    throw Error("random equality: resampling exhausted (degenerate identity)");
            }
        }
    }
    return cert;
}

EqualityCertificate rfEqual(const RationalFunction& a, const RationalFunction& b,
                            bool exact, int trials, uint64_t seed) {
    if (exact) {
        EqualityCertificate cert;
        cert.equal = rfEqualExact(a, b);
        return cert;
    }
    return rfEqualRandom(a, b, trials, seed);
}

// ---------------- series expansion ----------------

std::vector<RationalFunction> seriesExpand(const RationalFunction& a, int var, int order) {
    const RegistryPtr& reg = a.registry();
    if (var < 0 || var >= reg->size()) throw Error("series_expand: bad variable");
    if (order < 0) throw Error("series_expand: negative order");
    auto numC = a.numerator().coefficientsIn(var);
    auto denC = a.denominatorPolynomial().coefficientsIn(var);
    if (denC.front().isZero()) throw PoleError("series_expand: pole at " + reg->name(var) + "=0");
    RationalFunction d0(denC.front());
    std::vector<RationalFunction> out;
    out.reserve(order + 1);
    for (int k = 0; k <= order; ++k) {
        RationalFunction nk = (k < static_cast<int>(numC.size()))
                                  ? RationalFunction(numC[k])
                                  : RationalFunction::zero(reg);
        for (int j = 1; j <= k; ++j) {
            if (j >= static_cast<int>(denC.size())) break;
            nk = nk - RationalFunction(denC[j]) * out[k - j];
        }
        out.push_back(nk / d0);
    }
    return out;
}

// ---------------- parsing ----------------

namespace {

// split "num / (f1^e1*f2^e2*...)" at the top-level '/'
bool splitTopLevel(const std::string& s, std::string& num, std::string& den) {
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (s[i] == '/' && depth == 0) {
            num = s.substr(0, i);
            den = s.substr(i + 1);
            return true;
        }
    }
    return false;
}

std::string stripOuterParens(std::string s) {
    auto trim = [](std::string& t) {
        size_t b = t.find_first_not_of(" \t");
        size_t e = t.find_last_not_of(" \t");
        t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
    };
    trim(s);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        bool outer = true;
        for (size_t i = 0; i + 1 < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            else if (s[i] == ')') --depth;
            if (depth == 0) { outer = false; break; }
        }
        if (!outer) break;
        s = s.substr(1, s.size() - 2);
        trim(s);
    }
    return s;
}

} // namespace

RationalFunction parseRationalFunction(const RegistryPtr& reg, const std::string& text) {
    std::string numPart, denPart;
    if (!splitTopLevel(text, numPart, denPart)) {
        return RationalFunction(parsePolynomial(reg, stripOuterParens(text)));
    }
    Polynomial num = parsePolynomial(reg, stripOuterParens(numPart));
    std::string den = stripOuterParens(denPart);
    // den := (poly)^e * (poly)^e * ...
    Polynomial denAll = Polynomial::constant(reg, 1);
    size_t i = 0;
    auto skipWs = [&] { while (i < den.size() && std::isspace(static_cast<unsigned char>(den[i]))) ++i; };
    while (true) {
        skipWs();
        if (i >= den.size()) break;
        if (den[i] != '(') throw Error("parse: expected '(' in denominator");
        int depth = 0;
        size_t start = i;
        for (; i < den.size(); ++i) {
            if (den[i] == '(') ++depth;
            else if (den[i] == ')') {
                if (--depth == 0) { ++i; break; }
            }
        }
        Polynomial f = parsePolynomial(reg, den.substr(start + 1, i - start - 2));
        int e = 1;
        skipWs();
        if (i < den.size() && den[i] == '^') {
            ++i;
            size_t es = i;
            while (i < den.size() && std::isdigit(static_cast<unsigned char>(den[i]))) ++i;
            e = std::stoi(den.substr(es, i - es));
        }
        denAll = denAll * f.pow(e);
        skipWs();
        if (i < den.size() && den[i] == '*') ++i;
    }
    return RationalFunction::fraction(std::move(num), std::move(denAll));
}

} // namespace dynrefl
