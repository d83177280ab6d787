#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynrefl {

/// Thrown on any contract violation (registry mismatch, pole, malformed input...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class VariableRegistry;
using RegistryPtr = std::shared_ptr<const VariableRegistry>;

/// Ordered variable table shared by every symbolic value of a computation.
///
/// Layout: q1..qn | mu | model parameters | spectral variables.
/// The q-block is contiguous and mu is always present; shift substitution
/// only ever adds integer multiples of mu to q-variables.
class VariableRegistry {
public:
    static RegistryPtr make(int qCount,
                            std::vector<std::string> params = {},
                            int spectralCount = 0) {
        if (qCount < 1) throw Error("registry: need at least one q variable");
        auto r = std::make_shared<VariableRegistry>();
        r->qCount_ = qCount;
        for (int i = 1; i <= qCount; ++i) r->names_.push_back("q" + std::to_string(i));
        r->muIndex_ = static_cast<int>(r->names_.size());
        r->names_.push_back("mu");
        for (auto& p : params) r->names_.push_back(std::move(p));
        for (int i = 1; i <= spectralCount; ++i) r->names_.push_back("z" + std::to_string(i));
        for (size_t i = 0; i < r->names_.size(); ++i)
            for (size_t j = i + 1; j < r->names_.size(); ++j)
                if (r->names_[i] == r->names_[j])
                    throw Error("registry: duplicate variable name " + r->names_[i]);
        return r;
    }

    /// Registry with explicit q-block names (used by the n=2 reduction, q/Q coordinates).
    static RegistryPtr makeNamed(std::vector<std::string> qNames,
                                 std::vector<std::string> params = {}) {
        auto r = std::make_shared<VariableRegistry>();
        r->qCount_ = static_cast<int>(qNames.size());
        if (r->qCount_ < 1) throw Error("registry: need at least one q variable");
        r->names_ = std::move(qNames);
        r->muIndex_ = static_cast<int>(r->names_.size());
        r->names_.push_back("mu");
        for (auto& p : params) r->names_.push_back(std::move(p));
        return r;
    }

    int size() const { return static_cast<int>(names_.size()); }
    int qCount() const { return qCount_; }
    int muIndex() const { return muIndex_; }
    const std::string& name(int i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    int indexOf(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool isQ(int i) const { return i >= 0 && i < qCount_; }

private:
    std::vector<std::string> names_;
    int qCount_ = 0;
    int muIndex_ = 0;
};

inline void requireSameRegistry(const RegistryPtr& a, const RegistryPtr& b) {
    if (a != b) throw Error("registry mismatch between operands");
}

} // namespace dynrefl
