#pragma once

// Finite reference probability space (X, F, mu), measures on it and the
// L1 geometry used by every ergodicity notion. Measures always live on the
// full state space, not only on supp(mu): weak/strong ergodicity quantify
// over every state while the L1 notions quantify over the set M of
// mu-absolutely-continuous probabilities only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "numeric.hpp"

namespace nhdmp {

class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t n_states, bool filled = false) : mask_(n_states, filled) {}

    static StateSet full(std::size_t n) { return StateSet(n, true); }
    static StateSet empty(std::size_t n) { return StateSet(n, false); }
    static StateSet of(std::size_t n, std::span<const std::size_t> members) {
        StateSet s(n);
        for (auto i : members) s.insert(i);
        return s;
    }
    static StateSet of(std::size_t n, std::initializer_list<std::size_t> members) {
        return of(n, std::span<const std::size_t>(members.begin(), members.size()));
    }

    std::size_t n_states() const { return mask_.size(); }
    bool contains(std::size_t i) const { return i < mask_.size() && mask_[i]; }

    void insert(std::size_t i) {
        if (i >= mask_.size())
            throw Error(ErrorKind::invalid_argument,
                        "state " + std::to_string(i) + " outside a space of " +
                            std::to_string(mask_.size()) + " states");
        mask_[i] = true;
    }

    std::size_t count() const {
        return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
    }
    bool is_empty() const { return count() == 0; }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < mask_.size(); ++i)
            if (mask_[i]) out.push_back(i);
        return out;
    }

    StateSet complement() const {
        StateSet c(mask_.size());
        for (std::size_t i = 0; i < mask_.size(); ++i) c.mask_[i] = !mask_[i];
        return c;
    }

    StateSet intersect(const StateSet& other) const {
        StateSet c(mask_.size());
        for (std::size_t i = 0; i < mask_.size(); ++i) c.mask_[i] = mask_[i] && other.contains(i);
        return c;
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    std::vector<bool> mask_;
};

class Measure {
public:
    Measure() = default;
    explicit Measure(std::size_t n_states) : weights_(n_states, 0.0) {}
    explicit Measure(std::vector<double> weights) : weights_(std::move(weights)) {
        for (std::size_t i = 0; i < weights_.size(); ++i)
            if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
                throw Error(ErrorKind::invalid_argument,
                            "measure weight " + std::to_string(i) + " is negative or not finite");
    }
    Measure(std::initializer_list<double> weights) : Measure(std::vector<double>(weights)) {}

    static Measure point_mass(std::size_t n_states, std::size_t state) {
        if (state >= n_states) throw Error(ErrorKind::invalid_argument, "point mass outside space");
        Measure m(n_states);
        m.weights_[state] = 1.0;
        return m;
    }

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    std::span<const double> view() const { return weights_; }

    double mass() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }
    bool is_probability() const { return std::abs(mass() - 1.0) <= tolerance(); }

    Measure scaled(double factor) const {
        if (!(factor >= 0.0)) throw Error(ErrorKind::invalid_argument, "negative scale factor");
        std::vector<double> w(weights_);
        for (auto& x : w) x *= factor;
        return Measure(std::move(w));
    }

    StateSet support() const {
        StateSet s(weights_.size());
        for (std::size_t i = 0; i < weights_.size(); ++i)
            if (weights_[i] > 0.0) s.insert(i);
        return s;
    }

    friend bool operator==(const Measure&, const Measure&) = default;

private:
    std::vector<double> weights_;
};

class ReferenceSpace {
public:
    ReferenceSpace() = default;
    explicit ReferenceSpace(std::vector<double> mu) : mu_(std::move(mu)) {
        if (mu_.weights().empty())
            throw Error(ErrorKind::invalid_argument, "reference space needs at least one state");
        if (std::abs(mu_.mass() - 1.0) > tolerance())
            throw Error(ErrorKind::invalid_argument, "reference measure must sum to 1");
        support_ = mu_.support();
        if (support_.is_empty()) throw Error(ErrorKind::invalid_argument, "empty support");
    }

    static ReferenceSpace uniform(std::size_t n) {
        return ReferenceSpace(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    std::size_t n_states() const { return mu_.size(); }
    const Measure& mu() const { return mu_; }
    const StateSet& support() const { return support_; }
    std::vector<std::size_t> support_states() const { return support_.members(); }

private:
    Measure mu_;
    StateSet support_;
};

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw Error(ErrorKind::dimension_mismatch, std::string(what) + ": " + std::to_string(a) +
                                                       " vs " + std::to_string(b) + " states");
}

// Sum_i |a_i - b_i|, accumulated in index order.
inline double l1_distance(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "l1_distance");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return total;
}

inline double l1_distance(const Measure& a, const Measure& b) { return l1_distance(a.view(), b.view()); }

inline bool is_abs_continuous(std::span<const double> m, const ReferenceSpace& ref) {
    require_same_size(m.size(), ref.n_states(), "is_abs_continuous");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] != 0.0 && !ref.support().contains(i)) return false;
    return true;
}

inline bool is_abs_continuous(const Measure& m, const ReferenceSpace& ref) {
    return is_abs_continuous(m.view(), ref);
}

// Membership in M: a probability measure absolutely continuous w.r.t. mu.
inline bool in_m(const Measure& m, const ReferenceSpace& ref) {
    return m.is_probability() && is_abs_continuous(m, ref);
}

// (m 1_B)(Y) = m(Y cap B).
inline Measure restrict(const Measure& m, const StateSet& b) {
    require_same_size(m.size(), b.n_states(), "restrict");
    std::vector<double> w(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (b.contains(i)) w[i] = m[i];
    return Measure(std::move(w));
}

inline Measure convex_combination(std::span<const Measure> parts, std::span<const double> coeffs) {
    if (parts.empty() || parts.size() != coeffs.size())
        throw Error(ErrorKind::invalid_argument, "convex_combination needs matching nonempty inputs");
    std::vector<double> w(parts.front().size(), 0.0);
    for (std::size_t p = 0; p < parts.size(); ++p) {
        require_same_size(parts[p].size(), w.size(), "convex_combination");
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += coeffs[p] * parts[p][i];
    }
    return Measure(std::move(w));
}

// JSON: {"mu": [...]} and {"weights": [...]}. nlohmann emits shortest
// round-trip decimal so binary64 values survive a save/load cycle.
inline void to_json(nlohmann::json& j, const Measure& m) { j = nlohmann::json{{"weights", m.weights()}}; }

inline void from_json(const nlohmann::json& j, Measure& m) {
    if (!j.is_object() || !j.contains("weights") || !j.at("weights").is_array())
        throw Error(ErrorKind::schema, "measure needs a \"weights\" array");
    m = Measure(j.at("weights").get<std::vector<double>>());
}

inline void to_json(nlohmann::json& j, const ReferenceSpace& r) {
    j = nlohmann::json{{"mu", r.mu().weights()}};
}

inline void from_json(const nlohmann::json& j, ReferenceSpace& r) {
    if (!j.is_object() || !j.contains("mu") || !j.at("mu").is_array())
        throw Error(ErrorKind::schema, "reference space needs a \"mu\" array");
    r = ReferenceSpace(j.at("mu").get<std::vector<double>>());
}

} // namespace nhdmp
