#include "shiftop.hpp"

namespace dynrefl {

ShiftOperator ShiftOperator::fromRational(RationalFunction f) {
    ShiftOperator s(f.registry());
    if (!f.isZero()) s.terms_[std::vector<int>(f.registry()->qCount(), 0)] = std::move(f);
    return s;
}

ShiftOperator ShiftOperator::pureShift(const RegistryPtr& reg, const std::vector<int>& v) {
    if (static_cast<int>(v.size()) != reg->qCount())
        throw Error("shift operator: lattice vector length must equal q-block length");
    ShiftOperator s(reg);
    s.terms_[v] = RationalFunction::one(reg);
    return s;
}

bool ShiftOperator::isMultiplication() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& v = terms_.begin()->first;
    return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

RationalFunction ShiftOperator::rationalPart() const {
    std::vector<int> zero(reg_->qCount(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? RationalFunction::zero(reg_) : it->second;
}

void ShiftOperator::addTerm(const std::vector<int>& v, const RationalFunction& f) {
    if (f.isZero()) return;
    if (static_cast<int>(v.size()) != reg_->qCount())
        throw Error("shift operator: lattice vector length must equal q-block length");
    auto it = terms_.find(v);
    if (it == terms_.end()) {
        terms_[v] = f;
    } else {
        it->second = it->second + f;
        if (it->second.isZero()) terms_.erase(it);
    }
}

ShiftOperator ShiftOperator::operator-() const {
    ShiftOperator r(reg_);
    for (const auto& [v, f] : terms_) r.terms_[v] = -f;
    return r;
}

ShiftOperator ShiftOperator::operator+(const ShiftOperator& o) const {
    requireSameRegistry(reg_, o.reg_);
    ShiftOperator r = *this;
    for (const auto& [v, f] : o.terms_) r.addTerm(v, f);
    return r;
}

ShiftOperator ShiftOperator::operator-(const ShiftOperator& o) const {
    requireSameRegistry(reg_, o.reg_);
    ShiftOperator r = *this;
    for (const auto& [v, f] : o.terms_) r.addTerm(v, -f);
    return r;
}

ShiftOperator ShiftOperator::operator*(const ShiftOperator& o) const {
    requireSameRegistry(reg_, o.reg_);
    ShiftOperator r(reg_);
    std::vector<int> sum(reg_->qCount(), 0);
    for (const auto& [v, f] : terms_) {
        for (const auto& [w, g] : o.terms_) {
            for (int i = 0; i < reg_->qCount(); ++i) sum[i] = v[i] + w[i];
            r.addTerm(sum, f * g.shiftQ(v));
        }
    }
    return r;
}

ShiftOperator ShiftOperator::commutator(const ShiftOperator& o) const {
    return (*this) * o - o * (*this);
}

ShiftOperator ShiftOperator::shiftCoefficients(const std::vector<int>& w) const {
    ShiftOperator r(reg_);
    for (const auto& [v, f] : terms_) r.terms_[v] = f.shiftQ(w);
    return r;
}

RationalFunction ShiftOperator::apply(const RationalFunction& g) const {
    RationalFunction acc = RationalFunction::zero(reg_);
    for (const auto& [v, f] : terms_) acc = acc + f * g.shiftQ(v);
    return acc;
}

EqualityCertificate ShiftOperator::equal(const ShiftOperator& o, bool exact,
                                         int trials, uint64_t seed) const {
    requireSameRegistry(reg_, o.reg_);
    EqualityCertificate cert;
    cert.exact = exact;
    std::map<std::vector<int>, int> keys;
    for (const auto& [v, f] : terms_) keys[v] = 1;
    for (const auto& [v, f] : o.terms_) keys[v] = 1;
    uint64_t s = seed;
    for (const auto& [v, one] : keys) {
        auto ita = terms_.find(v);
        auto itb = o.terms_.find(v);
        RationalFunction fa = (ita == terms_.end()) ? RationalFunction::zero(reg_) : ita->second;
        RationalFunction fb = (itb == o.terms_.end()) ? RationalFunction::zero(reg_) : itb->second;
        auto c = rfEqual(fa, fb, exact, trials, s++);
        if (!c.equal) {
            c.exact = exact;
            return c;
        }
    }
    cert.equal = true;
    cert.trials = exact ? 0 : trials;
    cert.seed = seed;
    return cert;
}

} // namespace dynrefl
