#include "tensor.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <json.hpp>

namespace dynrefl {

namespace {

std::vector<MultiIndex> allIndices(const std::vector<Leg>& legs) {
    std::vector<MultiIndex> out;
    MultiIndex cur(legs.size(), 0);
    while (true) {
        out.push_back(cur);
        int pos = static_cast<int>(legs.size()) - 1;
        while (pos >= 0) {
            if (++cur[pos] < legs[pos].dim) break;
            cur[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    if (legs.empty()) out.assign(1, MultiIndex{});
    return out;
}

std::vector<int> oneBased(const MultiIndex& idx) {
    std::vector<int> r(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) r[i] = idx[i] + 1;
    return r;
}

} // namespace

TensorMatrix::TensorMatrix(RegistryPtr reg, std::vector<Leg> legs)
    : reg_(std::move(reg)), legs_(std::move(legs)) {
    for (const auto& l : legs_) {
        if (l.dim != reg_->qCount())
            throw Error("leg " + l.id + ": dimension must equal the q-block length");
        for (const auto& m : legs_)
            if (&l != &m && l.id == m.id) throw Error("duplicate leg id " + l.id);
    }
}

TensorMatrix TensorMatrix::identity(const RegistryPtr& reg, const std::vector<Leg>& legs) {
    TensorMatrix m(reg, legs);
    for (const auto& idx : allIndices(legs))
        m.entries_[{idx, idx}] = ShiftOperator::fromRational(RationalFunction::one(reg));
    return m;
}

TensorMatrix TensorMatrix::withRoleTag(std::string tag) const {
    TensorMatrix m = *this;
    m.roleTag_ = std::move(tag);
    return m;
}

int TensorMatrix::legPos(const std::string& id) const {
    for (size_t i = 0; i < legs_.size(); ++i)
        if (legs_[i].id == id) return static_cast<int>(i);
    throw Error("unknown leg " + id);
}

int TensorMatrix::dimension() const {
    int d = 1;
    for (const auto& l : legs_) d *= l.dim;
    return d;
}

void TensorMatrix::checkIndex(const MultiIndex& idx) const {
    if (idx.size() != legs_.size()) throw Error("multi-index length does not match leg count");
    for (size_t i = 0; i < idx.size(); ++i)
        if (idx[i] < 0 || idx[i] >= legs_[i].dim) throw Error("index out of range on leg " + legs_[i].id);
}

void TensorMatrix::set(const MultiIndex& row, const MultiIndex& col, ShiftOperator value) {
    checkIndex(row);
    checkIndex(col);
    if (value.isZero()) entries_.erase({row, col});
    else entries_[{row, col}] = std::move(value);
}

void TensorMatrix::set(const MultiIndex& row, const MultiIndex& col, RationalFunction value) {
    set(row, col, ShiftOperator::fromRational(std::move(value)));
}

void TensorMatrix::add(const MultiIndex& row, const MultiIndex& col, const ShiftOperator& value) {
    checkIndex(row);
    checkIndex(col);
    auto key = EntryKey{row, col};
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        if (!value.isZero()) entries_[key] = value;
    } else {
        it->second = it->second + value;
        if (it->second.isZero()) entries_.erase(it);
    }
}

ShiftOperator TensorMatrix::at(const MultiIndex& row, const MultiIndex& col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? ShiftOperator::zero(reg_) : it->second;
}

bool TensorMatrix::isRationalValued() const {
    for (const auto& [k, v] : entries_)
        if (!v.isMultiplication()) return false;
    return true;
}

TensorMatrix TensorMatrix::operator+(const TensorMatrix& o) const {
    requireSameRegistry(reg_, o.reg_);
    if (legs_ != o.legs_) throw Error("tensor add: leg mismatch");
    TensorMatrix r = *this;
    for (const auto& [k, v] : o.entries_) r.add(k.first, k.second, v);
    return r;
}

TensorMatrix TensorMatrix::operator-() const {
    TensorMatrix r(reg_, legs_);
    for (const auto& [k, v] : entries_) r.entries_[k] = -v;
    r.roleTag_ = roleTag_;
    return r;
}

TensorMatrix TensorMatrix::operator-(const TensorMatrix& o) const { return *this + (-o); }

TensorMatrix TensorMatrix::operator*(const TensorMatrix& o) const {
    requireSameRegistry(reg_, o.reg_);
    if (legs_ != o.legs_) throw Error("tensor matmul: identical ordered leg lists required");
    // index o's entries by row multi-index
    std::map<MultiIndex, std::vector<const EntryMap::value_type*>> byRow;
    for (const auto& e : o.entries_) byRow[e.first.first].push_back(&e);
    TensorMatrix r(reg_, legs_);
    for (const auto& [k, v] : entries_) {
        auto it = byRow.find(k.second);
        if (it == byRow.end()) continue;
        for (const auto* e : it->second)
            r.add(k.first, e->first.second, v * e->second);
    }
    return r;
}

TensorMatrix TensorMatrix::embed(const std::vector<Leg>& ambient) const {
    // position of each ambient leg in this matrix, or -1 if new
    std::vector<int> src(ambient.size(), -1);
    std::vector<bool> used(legs_.size(), false);
    for (size_t i = 0; i < ambient.size(); ++i) {
        for (size_t j = 0; j < legs_.size(); ++j) {
            if (ambient[i].id == legs_[j].id) {
                if (!(ambient[i] == legs_[j])) throw Error("embed: leg " + ambient[i].id + " differs");
                src[i] = static_cast<int>(j);
                used[j] = true;
            }
        }
    }
    for (size_t j = 0; j < legs_.size(); ++j)
        if (!used[j]) throw Error("embed: ambient missing leg " + legs_[j].id);

    std::vector<Leg> newLegs;
    for (size_t i = 0; i < ambient.size(); ++i)
        if (src[i] < 0) newLegs.push_back(ambient[i]);

    TensorMatrix r(reg_, ambient);
    r.roleTag_ = roleTag_;
    for (const auto& diag : allIndices(newLegs)) {
        for (const auto& [k, v] : entries_) {
            MultiIndex row(ambient.size()), col(ambient.size());
            size_t newPos = 0;
            for (size_t i = 0; i < ambient.size(); ++i) {
                if (src[i] >= 0) {
                    row[i] = k.first[src[i]];
                    col[i] = k.second[src[i]];
                } else {
                    row[i] = col[i] = diag[newPos];
                }
                if (src[i] < 0) ++newPos;
            }
            r.entries_[{row, col}] = v;
        }
    }
    return r;
}

TensorMatrix TensorMatrix::relabel(const std::map<std::string, std::string>& mapping) const {
    std::vector<Leg> legs = legs_;
    for (auto& l : legs) {
        auto it = mapping.find(l.id);
        if (it != mapping.end()) l.id = it->second;
    }
    TensorMatrix r(reg_, legs);
    r.entries_ = entries_;
    r.roleTag_ = roleTag_;
    return r;
}

TensorMatrix TensorMatrix::reorderLegs(const std::vector<std::string>& newOrder) const {
    if (newOrder.size() != legs_.size()) throw Error("reorder: wrong leg count");
    std::vector<int> perm(newOrder.size());
    std::vector<Leg> legs(newOrder.size());
    for (size_t i = 0; i < newOrder.size(); ++i) {
        perm[i] = legPos(newOrder[i]);
        legs[i] = legs_[perm[i]];
    }
    TensorMatrix r(reg_, legs);
    r.roleTag_ = roleTag_;
    for (const auto& [k, v] : entries_) {
        MultiIndex row(legs.size()), col(legs.size());
        for (size_t i = 0; i < legs.size(); ++i) {
            row[i] = k.first[perm[i]];
            col[i] = k.second[perm[i]];
        }
        r.entries_[{row, col}] = v;
    }
    return r;
}

TensorMatrix TensorMatrix::dynamicalShift(const ShiftSpec& spec) const {
    int pos = legPos(spec.legId);
    if (spec.multiplicity < 1) throw Error("dynamical shift: multiplicity must be >= 1");
    TensorMatrix r(reg_, legs_);
    r.roleTag_ = roleTag_;
    const int n = reg_->qCount();
    for (const auto& [k, v] : entries_) {
        if (k.first[pos] != k.second[pos])
            throw Error("dynamical shift: matrix does not act as identity on leg " + spec.legId);
        std::vector<int> w(n, 0);
        w[k.first[pos]] = spec.sign * spec.multiplicity;
        r.entries_[k] = v.shiftCoefficients(w);
    }
    return r;
}

TensorMatrix TensorMatrix::dynamicalShift(const std::vector<ShiftSpec>& specs) const {
    TensorMatrix r = *this;
    for (const auto& s : specs) r = r.dynamicalShift(s);
    return r;
}

TensorMatrix TensorMatrix::slShift(const std::string& legId, int sign) const {
    int pos = legPos(legId);
    TensorMatrix r(reg_, legs_);
    r.roleTag_ = roleTag_;
    const int n = reg_->qCount();
    for (const auto& [k, v] : entries_) {
        std::vector<int> w(n, 0);
        w[k.first[pos]] += sign;
        r.entries_[k] = v.shiftCoefficients(w);
    }
    return r;
}

TensorMatrix TensorMatrix::scShift(const std::string& legId, int sign) const {
    int pos = legPos(legId);
    TensorMatrix r(reg_, legs_);
    r.roleTag_ = roleTag_;
    const int n = reg_->qCount();
    for (const auto& [k, v] : entries_) {
        std::vector<int> w(n, 0);
        w[k.second[pos]] += sign;
        r.entries_[k] = v.shiftCoefficients(w);
    }
    return r;
}

TensorMatrix TensorMatrix::partialTranspose(const std::vector<std::string>& legIds) const {
    std::vector<int> pos;
    for (const auto& id : legIds) pos.push_back(legPos(id));
    TensorMatrix r(reg_, legs_);
    r.roleTag_ = roleTag_;
    for (const auto& [k, v] : entries_) {
        MultiIndex row = k.first, col = k.second;
        for (int p : pos) std::swap(row[p], col[p]);
        r.entries_[{row, col}] = v;
    }
    return r;
}

TensorMatrix TensorMatrix::shiftAllQ(const std::vector<int>& v) const {
    TensorMatrix r(reg_, legs_);
    r.roleTag_ = roleTag_;
    for (const auto& [k, val] : entries_) r.entries_[k] = val.shiftCoefficients(v);
    return r;
}

TensorMatrix TensorMatrix::substitute(int var, const Polynomial& repl) const {
    if (!isRationalValued()) throw Error("substitute: entries must be rational-valued");
    TensorMatrix r(reg_, legs_);
    r.roleTag_ = roleTag_;
    for (const auto& [k, val] : entries_) {
        RationalFunction f = val.rationalPart().substitute(var, repl);
        if (!f.isZero()) r.set(k.first, k.second, f);
    }
    return r;
}

TensorMatrix TensorMatrix::withLegRole(const std::string& legId, LegRole role) const {
    int pos = legPos(legId);
    TensorMatrix r = *this;
    r.legs_[pos].role = role;
    return r;
}

TensorMatrix TensorMatrix::traceOverLeg(const std::string& legId) const {
    int pos = legPos(legId);
    std::vector<Leg> legs;
    for (size_t i = 0; i < legs_.size(); ++i)
        if (static_cast<int>(i) != pos) legs.push_back(legs_[i]);
    TensorMatrix r(reg_, legs);
    for (const auto& [k, v] : entries_) {
        if (k.first[pos] != k.second[pos]) continue;
        MultiIndex row, col;
        for (size_t i = 0; i < legs_.size(); ++i) {
            if (static_cast<int>(i) == pos) continue;
            row.push_back(k.first[i]);
            col.push_back(k.second[i]);
        }
        r.add(row, col, v);
    }
    return r;
}

ShiftOperator TensorMatrix::scalar() const {
    if (!legs_.empty()) throw Error("scalar: matrix still has legs");
    return at({}, {});
}

TensorMatrix TensorMatrix::inverse() const {
    if (!isRationalValued()) throw Error("inverse: entries must be rational-valued");
    auto idx = allIndices(legs_);
    const int d = static_cast<int>(idx.size());
    std::map<MultiIndex, int> flat;
    for (int i = 0; i < d; ++i) flat[idx[i]] = i;

    std::vector<std::vector<RationalFunction>> a(d, std::vector<RationalFunction>(d, RationalFunction::zero(reg_)));
    std::vector<std::vector<RationalFunction>> inv(d, std::vector<RationalFunction>(d, RationalFunction::zero(reg_)));
    for (const auto& [k, v] : entries_) a[flat[k.first]][flat[k.second]] = v.rationalPart();
    for (int i = 0; i < d; ++i) inv[i][i] = RationalFunction::one(reg_);

    for (int col = 0; col < d; ++col) {
        // pivot: prefer structurally light nonzero entries
        int pivot = -1;
        size_t best = SIZE_MAX;
        for (int r = col; r < d; ++r) {
            if (a[r][col].isZero()) continue;
            size_t w = a[r][col].numerator().terms().size() + a[r][col].denFactors().size();
            if (w < best) { best = w; pivot = r; }
        }
        if (pivot < 0) throw Error("inverse: singular matrix (vanishing determinant)");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        RationalFunction pr = a[col][col].reciprocal();
        for (int c = 0; c < d; ++c) {
            if (!a[col][c].isZero()) a[col][c] = a[col][c] * pr;
            if (!inv[col][c].isZero()) inv[col][c] = inv[col][c] * pr;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col || a[r][col].isZero()) continue;
            RationalFunction f = a[r][col];
            for (int c = 0; c < d; ++c) {
                if (!a[col][c].isZero()) a[r][c] = a[r][c] - f * a[col][c];
                if (!inv[col][c].isZero()) inv[r][c] = inv[r][c] - f * inv[col][c];
            }
        }
    }
    TensorMatrix r(reg_, legs_);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!inv[i][j].isZero()) r.set(idx[i], idx[j], inv[i][j]);
    return r;
}

VerificationReport TensorMatrix::zeroWeightCheck(const std::map<std::string, int>& weighting) const {
    VerificationReport rep;
    rep.identity = "zero_weight";
    rep.pass = true;
    const int n = reg_->qCount();
    std::vector<std::pair<int, int>> active; // (leg position, coefficient)
    for (const auto& [id, c] : weighting) {
        if (c != 0) active.emplace_back(legPos(id), c);
    }
    for (const auto& [k, v] : entries_) {
        std::vector<int> bal(n, 0);
        for (auto [pos, c] : active) {
            bal[k.first[pos]] += c;
            bal[k.second[pos]] -= c;
        }
        bool ok = std::all_of(bal.begin(), bal.end(), [](int x) { return x == 0; });
        if (!ok) {
            rep.pass = false;
            rep.witness = VerificationReport::Witness{oneBased(k.first), oneBased(k.second),
                                                      v.rationalPart().toString()};
            return rep;
        }
    }
    return rep;
}

std::map<TensorMatrix::EntryKey, uint64_t>
TensorMatrix::evalMod(const std::vector<uint64_t>& point, uint64_t p) const {
    std::map<EntryKey, uint64_t> out;
    for (const auto& [k, v] : entries_) {
        if (!v.isMultiplication())
            throw Error("numeric evaluation requires rational-valued entries");
        uint64_t val = v.rationalPart().evalMod(point, p);
        if (val != 0) out[k] = val;
    }
    return out;
}

// ---------------- JSON ----------------

std::string TensorMatrix::toJson() const {
    nlohmann::ordered_json j;
    j["legs"] = nlohmann::ordered_json::array();
    for (const auto& l : legs_) {
        j["legs"].push_back({{"id", l.id},
                             {"dim", l.dim},
                             {"role", l.role == LegRole::Quantum ? "quantum" : "auxiliary"}});
    }
    if (!roleTag_.empty()) j["role_tag"] = roleTag_;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& [k, v] : entries_) {
        nlohmann::ordered_json e;
        e["row"] = oneBased(k.first);
        e["col"] = oneBased(k.second);
        if (v.isMultiplication()) {
            e["coeff"] = v.rationalPart().toString();
        } else {
            nlohmann::ordered_json shifts = nlohmann::ordered_json::array();
            for (const auto& [vec, f] : v.terms())
                shifts.push_back({{"v", vec}, {"coeff", f.toString()}});
            e["coeff"] = {{"shifts", shifts}};
        }
        j["entries"].push_back(e);
    }
    return j.dump(2);
}

TensorMatrix TensorMatrix::fromJson(const RegistryPtr& reg, const std::string& json) {
    auto j = nlohmann::json::parse(json);
    std::vector<Leg> legs;
    for (const auto& l : j.at("legs")) {
        legs.push_back({l.at("id").get<std::string>(), l.at("dim").get<int>(),
                        l.at("role").get<std::string>() == "quantum" ? LegRole::Quantum
                                                                     : LegRole::Auxiliary});
    }
    TensorMatrix m(reg, legs);
    if (j.contains("role_tag")) m = m.withRoleTag(j["role_tag"].get<std::string>());
    for (const auto& e : j.at("entries")) {
        MultiIndex row, col;
        for (int x : e.at("row")) row.push_back(x - 1);
        for (int x : e.at("col")) col.push_back(x - 1);
        const auto& c = e.at("coeff");
        if (c.is_string()) {
            m.set(row, col, parseRationalFunction(reg, c.get<std::string>()));
        } else {
            ShiftOperator op(reg);
            for (const auto& t : c.at("shifts")) {
                std::vector<int> v = t.at("v").get<std::vector<int>>();
                op.addTerm(v, parseRationalFunction(reg, t.at("coeff").get<std::string>()));
            }
            m.set(row, col, op);
        }
    }
    return m;
}

// ---------------- free builders ----------------

TensorMatrix permutationMatrix(const RegistryPtr& reg, const std::string& legA,
                               const std::string& legB, const std::vector<Leg>& ambient) {
    TensorMatrix p(reg, ambient);
    int pa = p.legPos(legA), pb = p.legPos(legB);
    if (ambient[pa].dim != ambient[pb].dim) throw Error("permutation: dimension mismatch");
    std::vector<Leg> rest;
    for (size_t i = 0; i < ambient.size(); ++i)
        if (static_cast<int>(i) != pa && static_cast<int>(i) != pb) rest.push_back(ambient[i]);
    const int n = ambient[pa].dim;
    // iterate over i,j on the two legs and diagonal elsewhere
    TensorMatrix idRest = rest.empty() ? TensorMatrix(reg, rest) : TensorMatrix::identity(reg, rest);
    std::vector<std::pair<MultiIndex, MultiIndex>> diag;
    if (rest.empty()) diag.push_back({{}, {}});
    else
        for (const auto& [k, v] : idRest.entries()) diag.push_back(k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& dk : diag) {
                MultiIndex row(ambient.size()), col(ambient.size());
                size_t rpos = 0;
                for (size_t t = 0; t < ambient.size(); ++t) {
                    if (static_cast<int>(t) == pa) { row[t] = i; col[t] = j; }
                    else if (static_cast<int>(t) == pb) { row[t] = j; col[t] = i; }
                    else { row[t] = dk.first[rpos]; col[t] = dk.second[rpos]; ++rpos; }
                }
                p.set(row, col, RationalFunction::one(reg));
            }
    return p.withRoleTag("P");
}

TensorMatrix expShiftMatrix(const RegistryPtr& reg, const std::string& legId,
                            const std::vector<Leg>& ambient, int multiplicity) {
    TensorMatrix m = TensorMatrix::identity(reg, ambient);
    if (multiplicity == 0) return m;
    int pos = m.legPos(legId);
    TensorMatrix r(reg, ambient);
    const int n = reg->qCount();
    for (const auto& [k, v] : m.entries()) {
        std::vector<int> shift(n, 0);
        shift[k.first[pos]] = multiplicity;
        r.set(k.first, k.second, ShiftOperator::pureShift(reg, shift));
    }
    return r;
}

TensorMatrix tildeMatrix(const TensorMatrix& m) {
    if (m.legs().size() != 2) throw Error("tilde: a two-leg matrix is required");
    const std::string& l1 = m.legs()[0].id;
    const std::string& l2 = m.legs()[1].id;
    auto zw = m.zeroWeightCheck({{l1, 1}, {l2, 1}});
    if (!zw.pass) throw Error("tilde: zero-weight precondition violated");
    TensorMatrix a = m.slShift(l1).slShift(l2);
    TensorMatrix b = m.scShift(l1).scShift(l2);
    if (!(a - b).isZero()) throw Error("tilde: sl/sc shift routes disagree");
    // conjugation identity e^{h1 d} M e^{-h2 d} = e^{-h2 d} ~M e^{h1 d}
    const RegistryPtr& reg = m.registry();
    TensorMatrix e1 = expShiftMatrix(reg, l1, m.legs(), 1);
    TensorMatrix e2m = expShiftMatrix(reg, l2, m.legs(), -1);
    TensorMatrix lhs = e1 * m * e2m;
    TensorMatrix rhs = e2m * a * e1;
    if (!(lhs - rhs).isZero()) throw Error("tilde: conjugation identity failed");
    return a;
}

} // namespace dynrefl
