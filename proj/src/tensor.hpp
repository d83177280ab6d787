#pragma once

#include <map>
#include <string>
#include <vector>

#include "report.hpp"
#include "shiftop.hpp"

namespace dynrefl {

enum class LegRole { Auxiliary, Quantum };

/// One tensor factor: an n-dimensional diagonalizable Cartan module whose
/// basis vector j carries weight e_j. Dimension always equals the registry's
/// q-block length.
struct Leg {
    std::string id;
    int dim = 0;
    LegRole role = LegRole::Auxiliary;

    bool operator==(const Leg& o) const { return id == o.id && dim == o.dim && role == o.role; }
};

/// Dynamical shift q -> q + sign*multiplicity*mu*h^(leg): defined only where
/// the matrix acts as identity on the target leg.
struct ShiftSpec {
    std::string legId;
    int sign = 1;         // +1 or -1
    int multiplicity = 1; // >= 1
};

using MultiIndex = std::vector<int>; // one 0-based basis index per leg

/// Sparse matrix over an ordered list of legs, entries in the skew
/// difference-operator algebra. Immutable by convention: operations return
/// new values.
class TensorMatrix {
public:
    using EntryKey = std::pair<MultiIndex, MultiIndex>;
    using EntryMap = std::map<EntryKey, ShiftOperator>;

    TensorMatrix() = default;
    TensorMatrix(RegistryPtr reg, std::vector<Leg> legs);

    static TensorMatrix identity(const RegistryPtr& reg, const std::vector<Leg>& legs);

    const RegistryPtr& registry() const { return reg_; }
    const std::vector<Leg>& legs() const { return legs_; }
    const EntryMap& entries() const { return entries_; }
    const std::string& roleTag() const { return roleTag_; }
    TensorMatrix withRoleTag(std::string tag) const;

    int legPos(const std::string& id) const; // throws on unknown leg
    int dimension() const;                   // product of leg dims

    void set(const MultiIndex& row, const MultiIndex& col, ShiftOperator value);
    void set(const MultiIndex& row, const MultiIndex& col, RationalFunction value);
    void add(const MultiIndex& row, const MultiIndex& col, const ShiftOperator& value);
    ShiftOperator at(const MultiIndex& row, const MultiIndex& col) const;

    bool isZero() const { return entries_.empty(); }
    /// All entries are plain multiplication operators (no lattice part).
    bool isRationalValued() const;

    TensorMatrix operator+(const TensorMatrix& o) const;
    TensorMatrix operator-(const TensorMatrix& o) const;
    TensorMatrix operator-() const;
    TensorMatrix operator*(const TensorMatrix& o) const; // skew matrix product

    /// Identity on the added legs; existing entries unchanged.
    TensorMatrix embed(const std::vector<Leg>& ambient) const;

    /// Rename legs (structure untouched); used to instantiate a template
    /// matrix on concrete ambient legs, e.g. K on auxiliary space 2.
    TensorMatrix relabel(const std::map<std::string, std::string>& mapping) const;

    /// Reorder the leg list (pure bookkeeping permutation of indices).
    TensorMatrix reorderLegs(const std::vector<std::string>& newOrder) const;

    TensorMatrix dynamicalShift(const ShiftSpec& spec) const;
    TensorMatrix dynamicalShift(const std::vector<ShiftSpec>& specs) const;

    /// Row-weight (sl) / column-weight (sc) shift on one leg.
    TensorMatrix slShift(const std::string& legId, int sign = 1) const;
    TensorMatrix scShift(const std::string& legId, int sign = 1) const;

    TensorMatrix partialTranspose(const std::vector<std::string>& legIds) const;

    /// Substitute q_k -> q_k + v_k mu in every coefficient.
    TensorMatrix shiftAllQ(const std::vector<int>& v) const;

    /// Substitute one registry variable by a polynomial in every coefficient
    /// (entries must be multiplication operators).
    TensorMatrix substitute(int var, const Polynomial& repl) const;

    /// Same legs with one leg's role changed.
    TensorMatrix withLegRole(const std::string& legId, LegRole role) const;

    /// Trace over one leg; result keeps the remaining legs (possibly none).
    TensorMatrix traceOverLeg(const std::string& legId) const;
    /// Scalar content of a zero-leg matrix.
    ShiftOperator scalar() const;

    /// Inverse over the rational-function field (entries must be
    /// multiplication operators). Throws on a singular matrix.
    TensorMatrix inverse() const;

    /// [sum_a c_a h^(a), M] = 0, entrywise weight balance.
    VerificationReport zeroWeightCheck(const std::map<std::string, int>& weighting) const;

    /// Numeric snapshot over F_p at a sample point (requires rational-valued
    /// entries); optional extra q-shift applied to every entry.
    std::map<EntryKey, uint64_t> evalMod(const std::vector<uint64_t>& point, uint64_t p) const;

    std::string toJson() const;
    static TensorMatrix fromJson(const RegistryPtr& reg, const std::string& json);

private:
    void checkIndex(const MultiIndex& idx) const;

    RegistryPtr reg_;
    std::vector<Leg> legs_;
    EntryMap entries_;
    std::string roleTag_;
};

/// P = sum_ij E_ij (x) E_ji on two legs of equal dimension, embedded in ambient.
TensorMatrix permutationMatrix(const RegistryPtr& reg, const std::string& legA,
                               const std::string& legB, const std::vector<Leg>& ambient);

/// Diagonal matrix e^{multiplicity * mu * d_{q_i}} on one leg, identity elsewhere.
TensorMatrix expShiftMatrix(const RegistryPtr& reg, const std::string& legId,
                            const std::vector<Leg>& ambient, int multiplicity);

/// ~M for a two-leg zero-weight matrix: the coadjoint action of
/// exp(mu sum_j (h1_j + h2_j) d_{q_j}), i.e. M^{sl1,sl2}. Certifies the
/// equality of the two shift routes (sl1,sl2 vs sc1,sc2 -- equivalent to the
/// zero-weight condition) and the conjugation identity
/// e^{h1 d} M e^{-h2 d} = e^{-h2 d} ~M e^{h1 d} before returning.
TensorMatrix tildeMatrix(const TensorMatrix& m);

} // namespace dynrefl
