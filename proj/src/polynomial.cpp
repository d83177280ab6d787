#include "polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dynrefl {

Polynomial Polynomial::constant(RegistryPtr reg, const mpq_class& c) {
    Polynomial p(std::move(reg));
    if (c != 0) p.terms_[Exponents(p.reg_->size(), 0)] = c;
    return p;
}

Polynomial Polynomial::variable(RegistryPtr reg, int varIndex, int power) {
    Polynomial p(std::move(reg));
    if (varIndex < 0 || varIndex >= p.reg_->size()) throw Error("polynomial: bad variable index");
    Exponents e(p.reg_->size(), 0);
    e[varIndex] = power;
    p.terms_[e] = 1;
    return p;
}

bool Polynomial::isConstant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](int32_t x) { return x == 0; });
}

mpq_class Polynomial::constantValue() const {
    if (terms_.empty()) return 0;
    if (!isConstant()) throw Error("polynomial: not constant");
    return terms_.begin()->second;
}

int64_t Polynomial::totalDegree() const {
    int64_t d = 0;
    for (const auto& [e, c] : terms_) {
        int64_t t = 0;
        for (auto x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

int Polynomial::degreeIn(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

void Polynomial::addTerm(const Exponents& e, const mpq_class& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_[e] = c;
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(reg_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    requireSameRegistry(reg_, o.reg_);
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.addTerm(e, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    requireSameRegistry(reg_, o.reg_);
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.addTerm(e, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    requireSameRegistry(reg_, o.reg_);
    Polynomial r(reg_);
    Exponents sum(reg_->size(), 0);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < reg_->size(); ++i) sum[i] = ea[i] + eb[i];
            r.addTerm(sum, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator*(const mpq_class& c) const {
    Polynomial r(reg_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
}

Polynomial Polynomial::pow(int e) const {
    if (e < 0) throw Error("polynomial: negative power");
    Polynomial r = constant(reg_, 1);
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(reg_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        r.addTerm(d, c * e[var]);
    }
    return r;
}

Polynomial Polynomial::shiftQ(const std::vector<int>& v) const {
    if (static_cast<int>(v.size()) != reg_->qCount())
        throw Error("shiftQ: vector length must equal q-block length");
    bool trivial = std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
    if (trivial) return *this;
    const int mu = reg_->muIndex();
    Polynomial r(reg_);
    for (const auto& [e, c] : terms_) {
        // expand prod_k (q_k + v_k mu)^{e_k} * rest
        Polynomial term = constant(reg_, c);
        Exponents rest = e;
        for (int k = 0; k < reg_->qCount(); ++k) {
            if (e[k] == 0 || v[k] == 0) continue;
            rest[k] = 0;
            Polynomial base(reg_);
            Exponents eq(reg_->size(), 0);
            eq[k] = 1;
            base.terms_[eq] = 1;
            Exponents em(reg_->size(), 0);
            em[mu] = 1;
            base.terms_[em] = v[k];
            term = term * base.pow(e[k]);
        }
        Polynomial mono(reg_);
        mono.terms_[rest] = 1;
        Polynomial expanded = term * mono;
        for (const auto& [te, tc] : expanded.terms()) r.addTerm(te, tc);
    }
    return r;
}

Polynomial Polynomial::substitute(int var, const Polynomial& repl) const {
    requireSameRegistry(reg_, repl.reg_);
    Polynomial r(reg_);
    for (const auto& [e, c] : terms_) {
        Polynomial term = constant(reg_, c);
        if (e[var] > 0) term = term * repl.pow(e[var]);
        Exponents rest = e;
        rest[var] = 0;
        Polynomial mono(reg_);
        mono.terms_[rest] = 1;
        Polynomial expanded = term * mono;
        for (const auto& [te, tc] : expanded.terms()) r.addTerm(te, tc);
    }
    return r;
}

std::vector<Polynomial> Polynomial::coefficientsIn(int var) const {
    std::vector<Polynomial> out(static_cast<size_t>(degreeIn(var)) + 1, Polynomial(reg_));
    for (const auto& [e, c] : terms_) {
        Exponents rest = e;
        int k = rest[var];
        rest[var] = 0;
        out[k].addTerm(rest, c);
    }
    return out;
}

mpq_class Polynomial::eval(const std::vector<mpq_class>& point) const {
    if (static_cast<int>(point.size()) != reg_->size())
        throw Error("eval: point must assign every registry variable");
    mpq_class acc = 0;
    for (const auto& [e, c] : terms_) {
        mpq_class t = c;
        for (int i = 0; i < reg_->size(); ++i) {
            for (int k = 0; k < e[i]; ++k) t *= point[i];
        }
        acc += t;
    }
    return acc;
}

uint64_t Polynomial::evalMod(const std::vector<uint64_t>& point, uint64_t p) const {
    uint64_t acc = 0;
    for (const auto& [e, c] : terms_) {
        uint64_t t = modp::rationalMod(c, p);
        for (int i = 0; i < reg_->size(); ++i) {
            if (e[i] == 0) continue;
            t = modp::mulmod(t, modp::powmod(point[i], e[i], p), p);
        }
        acc += t;
        if (acc >= p) acc -= p;
    }
    return acc;
}

mpq_class Polynomial::leadingCoeff() const {
    if (terms_.empty()) return 0;
    return terms_.rbegin()->second;
}

mpq_class Polynomial::content() const {
    mpz_class num = 0, den = 1;
    for (const auto& [e, c] : terms_) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
        num = g;
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
        den = l;
    }
    if (num == 0) return 0;
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

std::optional<Polynomial> Polynomial::divideExact(const Polynomial& divisor) const {
    requireSameRegistry(reg_, divisor.reg_);
    if (divisor.isZero()) throw Error("polynomial: division by zero");
    Polynomial rem = *this;
    Polynomial quot(reg_);
    const auto& dlt = *divisor.terms_.rbegin();
    while (!rem.isZero()) {
        const Exponents rle = rem.terms_.rbegin()->first; // copy: rem changes below
        const mpq_class rlc = rem.terms_.rbegin()->second;
        Exponents qe(reg_->size(), 0);
        for (int i = 0; i < reg_->size(); ++i) {
            qe[i] = rle[i] - dlt.first[i];
            if (qe[i] < 0) return std::nullopt;
        }
        mpq_class qc = rlc / dlt.second;
        Polynomial mono(reg_);
        mono.terms_[qe] = qc;
        quot.addTerm(qe, qc);
        rem = rem - divisor * mono;
        if (!rem.isZero() && GradedLexLess{}(rle, rem.terms_.rbegin()->first))
            return std::nullopt; // no progress: not divisible in this order
    }
    return quot;
}

// ---- gcd via primitive PRS, recursing on the last active variable ----

namespace {

// View a polynomial as univariate in `var` with Polynomial coefficients.
std::vector<Polynomial> asUnivariate(const Polynomial& p, int var) {
    return p.coefficientsIn(var);
}

Polynomial fromUnivariate(const RegistryPtr& reg, const std::vector<Polynomial>& coeffs, int var) {
    Polynomial r(reg);
    Polynomial x = Polynomial::variable(reg, var);
    Polynomial xp = Polynomial::constant(reg, 1);
    for (size_t k = 0; k < coeffs.size(); ++k) {
        r = r + coeffs[k] * xp;
        xp = xp * x;
    }
    return r;
}

Polynomial gcdRec(const Polynomial& a, const Polynomial& b, int var);

// gcd of the coefficient list (content w.r.t. var), recursing on var-1.
Polynomial coeffGcd(const std::vector<Polynomial>& coeffs, int var) {
    Polynomial g = coeffs.front().registry() ? Polynomial(coeffs.front().registry()) : Polynomial();
    for (const auto& c : coeffs) {
        if (c.isZero()) continue;
        g = g.isZero() ? c : gcdRec(g, c, var - 1);
        if (g.isConstant()) break;
    }
    return g;
}

Polynomial gcdRec(const Polynomial& a, const Polynomial& b, int var) {
    const RegistryPtr& reg = a.registry();
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.isConstant() || b.isConstant()) return Polynomial::constant(reg, 1);
    while (var >= 0 && !a.dependsOn(var) && !b.dependsOn(var)) --var;
    if (var < 0) return Polynomial::constant(reg, 1);
    if (!a.dependsOn(var) || !b.dependsOn(var)) {
        // gcd divides the content of the one that does depend on var
        const Polynomial& dep = a.dependsOn(var) ? a : b;
        const Polynomial& other = a.dependsOn(var) ? b : a;
        auto cont = coeffGcd(asUnivariate(dep, var), var);
        return gcdRec(cont, other, var - 1);
    }

    auto ua = asUnivariate(a, var);
    auto ub = asUnivariate(b, var);
    Polynomial ca = coeffGcd(ua, var);
    Polynomial cb = coeffGcd(ub, var);
    Polynomial cont = gcdRec(ca, cb, var - 1);

    auto primitive = [&](const Polynomial& p, const Polynomial& c) {
        auto q = p.divideExact(c);
        return q ? *q : p;
    };
    Polynomial f = primitive(a, ca);
    Polynomial g = primitive(b, cb);

    // primitive PRS
    int guard = 0;
    while (true) {
        if (++guard > 64) return Polynomial::constant(reg, 1); // give up, gcd=1 is always safe
        int df = f.degreeIn(var), dg = g.degreeIn(var);
        if (df < dg) { std::swap(f, g); std::swap(df, dg); }
        if (g.isZero()) break;
        if (dg == 0) return cont; // nontrivial gcd must involve var; content only
        // pseudo-remainder: lc(g)^(df-dg+1) * f  mod g
        auto uf = asUnivariate(f, var);
        auto ug = asUnivariate(g, var);
        Polynomial lcg = ug.back();
        Polynomial r = f * lcg.pow(df - dg + 1);
        // eliminate leading terms
        while (true) {
            int dr = r.degreeIn(var);
            if (r.isZero() || dr < dg) break;
            auto ur = asUnivariate(r, var);
            auto q = ur.back().divideExact(lcg);
            if (!q) return Polynomial::constant(reg, 1); // shouldn't happen after pseudo-mult
            Polynomial mono = *q * Polynomial::variable(reg, var, dr - dg);
            r = r - g * mono;
        }
        f = g;
        if (!r.isZero()) {
            auto cr = coeffGcd(asUnivariate(r, var), var);
            auto pr = r.divideExact(cr);
            g = pr ? *pr : r;
        } else {
            g = r;
        }
    }
    return cont * f;
}

} // namespace

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    requireSameRegistry(a.reg_, b.reg_);
    const RegistryPtr& reg = a.reg_;
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.totalDegree() + b.totalDegree() > 40 ||
        a.terms_.size() * b.terms_.size() > 40000)
        return constant(reg, 1);
    Polynomial g = gcdRec(a, b, reg->size() - 1);
    if (g.isZero()) return constant(reg, 1);
    // normalize: primitive, positive leading coefficient
    mpq_class c = g.content();
    if (c != 0) g = g * (1 / c);
    if (g.leadingCoeff() < 0) g = -g;
    return g;
}

// ---- printing ----

std::string Polynomial::toString() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // descending graded lex
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        mpq_class c = it->second;
        bool neg = c < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        mpq_class ac = abs(c);
        bool anyVar = false;
        std::ostringstream vars;
        for (int i = 0; i < reg_->size(); ++i) {
            if (it->first[i] == 0) continue;
            if (anyVar) vars << "*";
            vars << reg_->name(i);
            if (it->first[i] > 1) vars << "^" << it->first[i];
            anyVar = true;
        }
        if (!anyVar) {
            os << ac.get_str();
        } else if (ac == 1) {
            os << vars.str();
        } else {
            os << ac.get_str() << "*" << vars.str();
        }
    }
    return os.str();
}

// ---- parsing ----

namespace {

struct PolyParser {
    const RegistryPtr& reg;
    const std::string& s;
    size_t pos = 0;

    void skipWs() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skipWs();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) { ++pos; return true; }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw Error(std::string("parse: expected '") + c + "' at offset " + std::to_string(pos));
    }

    mpq_class number() {
        skipWs();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
            ++pos;
        if (start == pos) throw Error("parse: expected number at offset " + std::to_string(pos));
        mpq_class q(s.substr(start, pos - start));
        q.canonicalize();
        return q;
    }

    int identifier() {
        skipWs();
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (start == pos) throw Error("parse: expected identifier at offset " + std::to_string(pos));
        std::string name = s.substr(start, pos - start);
        int idx = reg->indexOf(name);
        if (idx < 0) throw Error("parse: unknown variable " + name);
        return idx;
    }

    int integer() {
        skipWs();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        return std::stoi(s.substr(start, pos - start));
    }

    // term := [number '*'] factor ('*' factor)*  |  number
    Polynomial term() {
        Polynomial t = Polynomial::constant(reg, 1);
        bool any = false;
        skipWs();
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            t = t * number();
            any = true;
            if (!accept('*')) return t;
        }
        do {
            skipWs();
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                t = t * number();
            } else {
                int v = identifier();
                int e = 1;
                if (accept('^')) e = integer();
                t = t * Polynomial::variable(reg, v, e);
            }
            any = true;
        } while (accept('*'));
        if (!any) throw Error("parse: empty term");
        return t;
    }

    Polynomial poly() {
        Polynomial r(reg);
        skipWs();
        bool neg = false;
        if (accept('-')) neg = true;
        else accept('+');
        Polynomial t = term();
        r = neg ? r - t : r + t;
        while (true) {
            skipWs();
            if (accept('+')) r = r + term();
            else if (accept('-')) r = r - term();
            else break;
        }
        return r;
    }
};

} // namespace

Polynomial parsePolynomial(const RegistryPtr& reg, const std::string& text) {
    PolyParser p{reg, text};
    Polynomial r = p.poly();
    p.skipWs();
    if (p.pos != text.size()) throw Error("parse: trailing characters in polynomial");
    return r;
}

// ---- prime field helpers ----

namespace modp {

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t p) {
    if (a % p == 0) throw Error("modp: inverse of zero");
    return powmod(a, p - 2, p);
}

uint64_t rationalMod(const mpq_class& q, uint64_t p) {
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class n = q.get_num() % pz;
    if (n < 0) n += pz;
    mpz_class d = q.get_den() % pz;
    uint64_t nu = mpz_get_ui(n.get_mpz_t());
    uint64_t du = mpz_get_ui(d.get_mpz_t());
    if (du == 0) throw Error("modp: coefficient denominator divisible by p");
    return mulmod(nu, invmod(du, p), p);
}

} // namespace modp

} // namespace dynrefl
