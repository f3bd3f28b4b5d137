#pragma once

// Discrete quadratic stochastic processes of type (A).
//
// The user supplies one-step tensors Q^{[k,k+1]}(x, y, {j}) and an initial
// measure mu_0 in M. Longer spans are defined by the type-(A) composition
//
//   Q^{[k,n]}(x,y,j) = sum_{u,v} Q^{[k,m]}(x,y,u) Q^{[m,n]}(u,v,j) mu_m(v),
//   mu_m(j)          = sum_{x,y} Q^{[0,m]}(x,y,j) mu_0(x) mu_0(y),
//
// evaluated recursively with m = n - 1, so the composition law holds by
// construction. Spans n - k >= 1 only.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ergodicity.hpp"
#include "kernels.hpp"
#include "minorization.hpp"
#include "process_io.hpp"

namespace nhdmp {

class QspTensor {
public:
    QspTensor() = default;
    explicit QspTensor(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}
    QspTensor(std::size_t n, std::vector<double> flat) : n_(n), data_(std::move(flat)) {
        if (data_.size() != n * n * n)
            throw Error(ErrorKind::dimension_mismatch, "tensor needs " + std::to_string(n * n * n) + " entries, got " +
                                                           std::to_string(data_.size()));
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t x, std::size_t y, std::size_t j) const { return data_[index(x, y, j)]; }
    double& operator()(std::size_t x, std::size_t y, std::size_t j) { return data_[index(x, y, j)]; }
    std::span<const double> fiber(std::size_t x, std::size_t y) const {
        return std::span<const double>(data_).subspan(index(x, y, 0), n_);
    }
    const std::vector<double>& flat() const { return data_; }

private:
    std::size_t index(std::size_t x, std::size_t y, std::size_t j) const { return (x * n_ + y) * n_ + j; }

    std::size_t n_ = 0;
    std::vector<double> data_;
};

// Symmetry and fiber normalization, with the offending (k, x, y) named.
inline void validate_qsp_tensor(const QspTensor& t, const ReferenceSpace& ref, Time k) {
    require_same_size(t.size(), ref.n_states(), "qsp step");
    const std::size_t n = t.size();
    const auto where = [k](std::size_t x, std::size_t y) {
        return "step " + std::to_string(k) + " fiber (" + std::to_string(x) + "," + std::to_string(y) + ")";
    };
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double v = t(x, y, j);
                if (!(v >= 0.0) || !std::isfinite(v))
                    throw Error(ErrorKind::non_stochastic, where(x, y) + " has a negative entry");
                if (v != 0.0 && !ref.support().contains(j))
                    throw Error(ErrorKind::measurability,
                                where(x, y) + " puts mass on state " + std::to_string(j) + " outside supp(mu)");
                if (std::abs(v - t(y, x, j)) > tolerance())
                    throw Error(ErrorKind::asymmetric_tensor, where(x, y) + " differs from its transpose");
                sum += v;
            }
            if (std::abs(sum - 1.0) > tolerance())
                throw Error(ErrorKind::non_stochastic, where(x, y) + " sums to " + std::to_string(sum));
        }
    }
}

class PairMeasure {
public:
    PairMeasure() = default;
    explicit PairMeasure(std::size_t n) : n_(n), w_(n * n, 0.0) {}
    PairMeasure(std::size_t n, std::vector<double> weights) : n_(n), w_(std::move(weights)) {
        if (w_.size() != n * n) throw Error(ErrorKind::dimension_mismatch, "pair measure size");
        for (double v : w_)
            if (!(v >= 0.0)) throw Error(ErrorKind::invalid_argument, "pair measure weights must be nonnegative");
    }

    static PairMeasure point(std::size_t n, std::size_t x, std::size_t y) {
        PairMeasure p(n);
        p.w_[x * n + y] = 1.0;
        return p;
    }
    static PairMeasure product(const Measure& a, const Measure& b) {
        require_same_size(a.size(), b.size(), "product measure");
        PairMeasure p(a.size());
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < a.size(); ++y) p.w_[x * a.size() + y] = a[x] * b[y];
        return p;
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t x, std::size_t y) const { return w_[x * n_ + y]; }
    double mass() const {
        double s = 0.0;
        for (double v : w_) s += v;
        return s;
    }
    PairMeasure transposed() const {
        PairMeasure t(n_);
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t y = 0; y < n_; ++y) t.w_[y * n_ + x] = w_[x * n_ + y];
        return t;
    }

    // Membership in M^2: probability on supp(mu) x supp(mu).
    bool in_m2(const ReferenceSpace& ref) const {
        if (n_ != ref.n_states() || std::abs(mass() - 1.0) > tolerance()) return false;
        for (std::size_t x = 0; x < n_; ++x)
            for (std::size_t y = 0; y < n_; ++y)
                if (w_[x * n_ + y] != 0.0 && !(ref.support().contains(x) && ref.support().contains(y))) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> w_;
};

enum class Composition { type_a, type_b };

class QspProcess {
public:
    // Steps 0..L-1; a homogeneous process repeats its single step forever.
    QspProcess(ReferenceSpace ref, std::vector<QspTensor> steps, Measure initial, bool homogeneous = false,
               Composition composition = Composition::type_a)
        : ref_(std::move(ref)), steps_(std::make_shared<const std::vector<QspTensor>>(std::move(steps))),
          initial_(std::move(initial)), homogeneous_(homogeneous), memo_(std::make_shared<Memo>()) {
        if (composition != Composition::type_a)
            throw Error(ErrorKind::unsupported, "type B composition unsupported");
        if (steps_->empty()) throw Error(ErrorKind::invalid_argument, "qsp needs at least one step");
        if (homogeneous_ && steps_->size() != 1)
            throw Error(ErrorKind::invalid_argument, "homogeneous qsp takes exactly one step");
        for (std::size_t k = 0; k < steps_->size(); ++k) validate_qsp_tensor((*steps_)[k], ref_, k);
        require_same_size(initial_.size(), ref_.n_states(), "initial measure");
        if (!in_m(initial_, ref_))
            throw Error(ErrorKind::not_in_m, "initial measure must be a mu-absolutely-continuous probability");
    }

    const ReferenceSpace& ref() const { return ref_; }
    std::size_t n_states() const { return ref_.n_states(); }
    const Measure& initial() const { return initial_; }
    bool is_homogeneous() const { return homogeneous_; }
    std::size_t stored_steps() const { return steps_->size(); }
    bool has_step(Time k) const { return homogeneous_ || k < steps_->size(); }

    const QspTensor& step(Time k) const {
        if (!has_step(k))
            throw Error(ErrorKind::step_unavailable, "qsp step " + std::to_string(k) + " not supplied");
        return homogeneous_ ? steps_->front() : (*steps_)[k];
    }

    // mu_m; mu_0 is the initial measure.
    Measure marginal(Time m) const {
        if (m == 0) return initial_;
        {
            std::lock_guard lock(memo_->mutex);
            auto it = memo_->marginals.find(m);
            if (it != memo_->marginals.end()) return it->second;
        }
        const QspTensor& q = extended(0, m);
        const std::size_t n = n_states();
        std::vector<double> w(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) {
            if (initial_[x] == 0.0) continue;
            for (std::size_t y = 0; y < n; ++y) {
                const double c = initial_[x] * initial_[y];
                if (c == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j) w[j] += q(x, y, j) * c;
            }
        }
        // The quadratic map doubles any mass defect per step (mass 1+e goes
        // to (1+e)^2), so rounding is projected back onto the simplex.
        double total = 0.0;
        for (double v : w) total += v;
        for (auto& v : w) v /= total;
        Measure mu_m(std::move(w));
        std::lock_guard lock(memo_->mutex);
        return memo_->marginals.emplace(m, std::move(mu_m)).first->second;
    }

    // Q^{[k,n]}, memoized, built by splitting at n - 1.
    const QspTensor& extended(Time k, Time n) const {
        require_interval(k, n);
        if (n == k + 1) return step(k);
        {
            std::lock_guard lock(memo_->mutex);
            auto it = memo_->tensors.find({k, n});
            if (it != memo_->tensors.end()) return *it->second;
        }
        auto built = std::make_shared<const QspTensor>(compose_split(k, n - 1, n));
        std::lock_guard lock(memo_->mutex);
        return *memo_->tensors.emplace(std::make_pair(k, n), std::move(built)).first->second;
    }

    // sum_{u,v} Q^{[k,m]}(x,y,u) Q^{[m,n]}(u,v,j) mu_m(v) for any k < m < n.
    QspTensor compose_split(Time k, Time m, Time n) const {
        if (!(k < m && m < n)) throw Error(ErrorKind::invalid_argument, "need k < m < n");
        const QspTensor& left = extended(k, m);
        const QspTensor& right = extended(m, n);
        const Measure mu_m = marginal(m);
        const std::size_t sz = n_states();
        // inner(u, j) = sum_v Q^{[m,n]}(u,v,j) mu_m(v)
        std::vector<double> inner(sz * sz, 0.0);
        for (std::size_t u = 0; u < sz; ++u)
            for (std::size_t v = 0; v < sz; ++v) {
                if (mu_m[v] == 0.0) continue;
                for (std::size_t j = 0; j < sz; ++j) inner[u * sz + j] += right(u, v, j) * mu_m[v];
            }
        QspTensor out(sz);
        for (std::size_t x = 0; x < sz; ++x)
            for (std::size_t y = 0; y < sz; ++y)
                for (std::size_t u = 0; u < sz; ++u) {
                    const double a = left(x, y, u);
                    if (a == 0.0) continue;
                    for (std::size_t j = 0; j < sz; ++j) out(x, y, j) += a * inner[u * sz + j];
                }
        return out;
    }

private:
    struct Memo {
        std::mutex mutex;
        std::map<Time, Measure> marginals;
        std::map<std::pair<Time, Time>, std::shared_ptr<const QspTensor>> tensors;
    };

    ReferenceSpace ref_;
    std::shared_ptr<const std::vector<QspTensor>> steps_;
    Measure initial_;
    bool homogeneous_;
    std::shared_ptr<Memo> memo_;
};

inline const QspTensor& extend_qsp(const QspProcess& q, Time k, Time n) { return q.extended(k, n); }

inline Measure propagate_marginal(const QspProcess& q, Time m) {
    if (m == 0) throw Error(ErrorKind::invalid_argument, "marginals are propagated for m >= 1");
    return q.marginal(m);
}

inline Measure qsp_push_forward(const QspProcess& q, Time k, Time n, const PairMeasure& pm) {
    if (!pm.in_m2(q.ref())) throw Error(ErrorKind::not_in_m, "pair measure is not in M^2");
    const QspTensor& t = q.extended(k, n);
    const std::size_t sz = q.n_states();
    std::vector<double> w(sz, 0.0);
    for (std::size_t x = 0; x < sz; ++x)
        for (std::size_t y = 0; y < sz; ++y) {
            const double c = pm(x, y);
            if (c == 0.0) continue;
            for (std::size_t j = 0; j < sz; ++j) w[j] += t(x, y, j) * c;
        }
    return Measure(std::move(w));
}

// P_Q^{[k,n]}(x, .) = sum_y Q^{[k,n]}(x,y,.) mu_k(y)
inline KernelMatrix marginal_kernel(const QspProcess& q, Time k, Time n) {
    const QspTensor& t = q.extended(k, n);
    const Measure mu_k = q.marginal(k);
    const std::size_t sz = q.n_states();
    std::vector<std::vector<double>> rows(sz, std::vector<double>(sz, 0.0));
    for (std::size_t x = 0; x < sz; ++x)
        for (std::size_t y = 0; y < sz; ++y) {
            if (mu_k[y] == 0.0) continue;
            for (std::size_t j = 0; j < sz; ++j) rows[x][j] += t(x, y, j) * mu_k[y];
        }
    return KernelMatrix::from_rows(rows);
}

// One-step marginal kernels for k = 0..horizon-1 as an ordinary Process.
inline Process marginal_process(const QspProcess& q, Time horizon) {
    if (horizon == 0) throw Error(ErrorKind::invalid_argument, "marginal process needs a positive horizon");
    std::vector<KernelMatrix> steps;
    for (Time k = 0; k < horizon; ++k) steps.push_back(marginal_kernel(q, k, k + 1));
    return Process::from_steps(q.ref(), std::move(steps));
}

struct QspGap {
    double qsp_gap = 0.0;       // sup over extreme points of M^2
    double marginal_gap = 0.0;  // l1_weak_gap of P_Q over the same span
};

inline QspGap qsp_l1_weak_gap(const QspProcess& q, Time k, Time n) {
    const QspTensor& t = q.extended(k, n);
    const auto supp = q.ref().support_states();
    std::vector<std::span<const double>> fibers;
    for (auto x : supp)
        for (auto y : supp) fibers.push_back(t.fiber(x, y));
    QspGap g;
    for (std::size_t a = 0; a < fibers.size(); ++a)
        for (std::size_t b = a + 1; b < fibers.size(); ++b)
            g.qsp_gap = std::max(g.qsp_gap, l1_distance(fibers[a], fibers[b]));
    g.marginal_gap = gap_of(marginal_kernel(q, k, n), q.ref(), Notion::l1_weak);
    return g;
}

// ---------------------------------------------------------------------------
// Set criterion: Q^{[k-1,k]}(x, y, A_k) >= alpha_k
// ---------------------------------------------------------------------------

struct QspCriterionRow {
    Time k;                 // the criterion index; the step used is k - 1
    double alpha;           // min_{(x,y)} Q^{[k-1,k]}(x,y,A_k)
    double pq_min;          // min_x P_Q^{[k-1,k]}(x, A_k)
    bool pq_holds;          // pq_min >= alpha
    double certificate_mass;
};

struct QspCriterionReport {
    std::vector<QspCriterionRow> rows;
    double sum_alpha = 0.0;
    double sum_one_minus_half_alpha = 0.0;
    bool certificates_verified = true;  // each certificate minorizes the marginal process
    Verdict verdict;
};

// The positive support of the fiber-wise minimum of step k - 1.
inline StateSet default_criterion_set(const QspProcess& q, Time k) {
    const QspTensor& t = q.step(k - 1);
    const auto supp = q.ref().support_states();
    StateSet a(q.n_states());
    for (std::size_t j = 0; j < q.n_states(); ++j) {
        double lo = 1.0;
        for (auto x : supp)
            for (auto y : supp) lo = std::min(lo, t(x, y, j));
        if (lo > 0.0) a.insert(j);
    }
    return a;
}

// Certificates come from nu_k(j) = min_{(x,y) in supp^2} Q^{[k-1,k]}(x,y,j) on
// A_k. They minorize both every fiber and every row of P_Q (a mu_{k-1}
// average of fibers), so the product bound holds for the QSP gap and for the
// marginal process gap alike. alpha_k is reported as well; nu_k(A_k) equals
// alpha_k for singleton sets and can be smaller otherwise.
inline QspCriterionReport check_we_pq(const QspProcess& q, const std::vector<StateSet>& sets, Time horizon,
                                      double epsilon) {
    if (horizon == 0) throw Error(ErrorKind::invalid_argument, "horizon must be >= 1");
    if (sets.size() < horizon) throw Error(ErrorKind::invalid_argument, "need one set per k = 1..K");
    const auto supp = q.ref().support_states();
    const Process marginal = marginal_process(q, horizon);
    QspCriterionReport r;
    std::vector<MinorizationCertificate> certs;
    for (Time k = 1; k <= horizon; ++k) {
        const StateSet& a = sets[k - 1];
        require_same_size(a.n_states(), q.n_states(), "criterion set");
        if (a.is_empty()) throw Error(ErrorKind::invalid_argument, "empty set A_" + std::to_string(k));
        const QspTensor& t = q.step(k - 1);
        QspCriterionRow row{k, 1.0, 1.0, true, 0.0};
        std::vector<double> nu(q.n_states(), 0.0);
        for (auto j : a.members()) nu[j] = 1.0;
        for (auto x : supp)
            for (auto y : supp) {
                double mass = 0.0;
                for (auto j : a.members()) {
                    mass += t(x, y, j);
                    nu[j] = std::min(nu[j], t(x, y, j));
                }
                row.alpha = std::min(row.alpha, mass);
            }
        const auto& pq = marginal.step(k - 1).matrix();
        for (auto x : supp) {
            double mass = 0.0;
            for (auto j : a.members()) mass += pq(x, j);
            row.pq_min = std::min(row.pq_min, mass);
        }
        row.pq_holds = row.pq_min >= row.alpha - tolerance();
        auto cert = make_certificate(k - 1, 1, Measure(std::move(nu)), a);
        row.certificate_mass = cert.mass;
        r.certificates_verified = r.certificates_verified && verify_certificate(marginal, cert);
        certs.push_back(std::move(cert));
        r.sum_alpha += row.alpha;
        r.sum_one_minus_half_alpha += 1.0 - row.alpha / 2.0;
        r.rows.push_back(row);
    }
    r.verdict = divergence_verdict(certs, epsilon);
    return r;
}

inline std::vector<StateSet> default_criterion_sets(const QspProcess& q, Time horizon) {
    std::vector<StateSet> sets;
    for (Time k = 1; k <= horizon; ++k) sets.push_back(default_criterion_set(q, k));
    return sets;
}

// ---------------------------------------------------------------------------
// QSP files:
//   {"n_states": N, "mu": [...], "initial": [...], "steps": [[n^3 numbers], ...],
//    "composition": "A", "homogeneous": false}
// Tensors are flattened row-major over (x, y, j).
// ---------------------------------------------------------------------------

inline QspProcess qsp_from_json(const nlohmann::json& j) {
    try {
        const auto& n_field = detail::require_field(j, "n_states");
        if (!n_field.is_number_unsigned() || n_field.get<std::size_t>() == 0)
            throw Error(ErrorKind::schema, "n_states must be a positive integer");
        const auto n = n_field.get<std::size_t>();
        const std::string composition = j.value("composition", std::string("A"));
        if (composition != "A") throw Error(ErrorKind::unsupported, "type B unsupported (composition \"" + composition + "\")");
        ReferenceSpace ref(detail::number_array(detail::require_field(j, "mu"), "mu"));
        if (ref.n_states() != n) throw Error(ErrorKind::schema, "mu length differs from n_states");
        Measure initial(detail::number_array(detail::require_field(j, "initial"), "initial"));
        const auto& steps = detail::require_field(j, "steps");
        if (!steps.is_array() || steps.empty()) throw Error(ErrorKind::schema, "steps must be a nonempty array");
        std::vector<QspTensor> tensors;
        for (std::size_t s = 0; s < steps.size(); ++s) {
            auto flat = detail::number_array(steps[s], "step " + std::to_string(s));
            if (flat.size() != n * n * n)
                throw Error(ErrorKind::schema, "step " + std::to_string(s) + " needs n^3 = " +
                                                   std::to_string(n * n * n) + " numbers");
            tensors.emplace_back(n, std::move(flat));
        }
        return QspProcess(std::move(ref), std::move(tensors), std::move(initial), j.value("homogeneous", false));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, e.what());
    }
}

inline nlohmann::json qsp_to_json(const QspProcess& q) {
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t s = 0; s < q.stored_steps(); ++s) steps.push_back(q.step(s).flat());
    return nlohmann::json{{"n_states", q.n_states()}, {"mu", q.ref().mu().weights()},
                          {"initial", q.initial().weights()}, {"steps", std::move(steps)},
                          {"composition", "A"}, {"homogeneous", q.is_homogeneous()}};
}

inline QspProcess load_qsp(const std::string& path) { return qsp_from_json(detail::parse_file(path)); }

inline void save_qsp(const QspProcess& q, const std::string& path) { detail::write_file(path, qsp_to_json(q)); }

// ---------------------------------------------------------------------------
// Built-in QSPs
// ---------------------------------------------------------------------------

// Every fiber equals r; homogeneous.
inline QspProcess constant_fiber_qsp(const Measure& r, const ReferenceSpace& ref, const Measure& initial) {
    const std::size_t n = ref.n_states();
    require_same_size(r.size(), n, "fiber");
    QspTensor t(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t j = 0; j < n; ++j) t(x, y, j) = r[j];
    return QspProcess(ref, {t}, initial, true);
}

// Two states, homogeneous, uniform mu and initial measure. Fibers
//   Q(0,0,.) = (0.3, 0.7), Q(0,1,.) = Q(1,0,.) = (0.5, 0.5), Q(1,1,.) = (0.8, 0.2),
// so min_{(x,y)} Q(x,y,{0}) = 0.3.
inline QspProcess mixing_qsp() {
    QspTensor t(2);
    const double fibers[2][2][2] = {{{0.3, 0.7}, {0.5, 0.5}}, {{0.5, 0.5}, {0.8, 0.2}}};
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t j = 0; j < 2; ++j) t(x, y, j) = fibers[x][y][j];
    return QspProcess(ReferenceSpace::uniform(2), {t}, Measure{0.5, 0.5}, true);
}

} // namespace nhdmp
