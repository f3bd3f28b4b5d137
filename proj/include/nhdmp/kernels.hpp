#pragma once

// Nonhomogeneous kernel families P^{[k,n]}.
//
// Convention: step k is the row-stochastic matrix of P^{[k,k+1]}, entry
// (i,j) = P^{[k,k+1]}(x_i, {x_j}). Measures are row vectors and act from the
// left, so the composed matrix is
//
//     compose(k, n) = step(k) * step(k+1) * ... * step(n-1)
//
// which is the operator identity P^{[k,n]}_* = P^{[m,n]}_* P^{[k,m]}_* read
// as compose(k,n) = compose(k,m) * compose(m,n). Functions are column
// vectors and act from the right (apply_function).

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matrix.hpp"
#include "numeric.hpp"
#include "state_space.hpp"

namespace nhdmp {

using Time = std::size_t;

// Throws non_stochastic / measurability errors naming the offending entry.
inline void validate_kernel(const KernelMatrix& m, const ReferenceSpace& ref, Time k) {
    require_same_size(m.size(), ref.n_states(), "kernel step");
    const auto where = [k](std::size_t i) {
        return "step " + std::to_string(k) + " row " + std::to_string(i);
    };
    for (std::size_t i = 0; i < m.size(); ++i) {
        double sum = 0.0;
        m.for_each_in_row(i, [&](std::size_t j, double v) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw Error(ErrorKind::non_stochastic,
                            where(i) + " column " + std::to_string(j) + " has entry " + std::to_string(v));
            if (ref.support().contains(i) && !ref.support().contains(j))
                throw Error(ErrorKind::measurability, where(i) + " puts mass on column " + std::to_string(j) +
                                                          " outside supp(mu)");
            sum += v;
        });
        if (std::abs(sum - 1.0) > tolerance())
            throw Error(ErrorKind::non_stochastic, where(i) + " sums to " + std::to_string(sum));
    }
}

class KernelStep {
public:
    KernelStep(Time time, KernelMatrix matrix, const ReferenceSpace& ref, double leaked_mass = 0.0)
        : time_(time), matrix_(std::move(matrix)), leaked_mass_(leaked_mass) {
        validate_kernel(matrix_, ref, time_);
    }

    Time time() const { return time_; }
    const KernelMatrix& matrix() const { return matrix_; }
    double operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }
    // Mass a generator would have assigned outside the truncation.
    double leaked_mass() const { return leaked_mass_; }

private:
    Time time_;
    KernelMatrix matrix_;
    double leaked_mass_;
};

class Process {
public:
    using Generator = std::function<KernelMatrix(Time)>;

    // Steps first_time, first_time+1, ... taken from the list.
    static Process from_steps(ReferenceSpace ref, std::vector<KernelMatrix> steps, Time first_time = 0) {
        if (steps.empty()) throw Error(ErrorKind::invalid_argument, "process needs at least one step");
        auto shared = std::make_shared<std::vector<KernelMatrix>>(std::move(steps));
        const Time last = first_time + shared->size() - 1;
        Process p(std::move(ref), [shared, first_time](Time k) { return (*shared)[k - first_time]; },
                  first_time, last, false);
        p.kind_ = "explicit";
        for (Time k = first_time; k <= last; ++k) p.step(k);  // validate eagerly
        return p;
    }

    static Process homogeneous(ReferenceSpace ref, KernelMatrix step) {
        Process p(std::move(ref), [step](Time) { return step; }, 0, std::nullopt, true);
        p.kind_ = "explicit";
        p.params_ = nlohmann::json{{"homogeneous", true}};
        p.step(0);
        return p;
    }

    static Process generated(ReferenceSpace ref, Generator gen, Time first_time, std::optional<Time> last_time,
                             bool homogeneous, std::string kind, nlohmann::json params) {
        Process p(std::move(ref), std::move(gen), first_time, last_time, homogeneous);
        p.kind_ = std::move(kind);
        p.params_ = std::move(params);
        return p;
    }

    const ReferenceSpace& ref() const { return ref_; }
    std::size_t n_states() const { return ref_.n_states(); }
    Time first_time() const { return first_; }
    std::optional<Time> last_time() const { return last_; }
    bool is_homogeneous() const { return homogeneous_; }
    const std::string& kind() const { return kind_; }
    const nlohmann::json& params() const { return params_; }

    bool has_step(Time k) const { return k >= first_ && (!last_ || k <= *last_); }

    // Memoized; concurrent callers may race to insert the same step, the
    // first insertion wins and both observe identical values.
    const KernelStep& step(Time k) const {
        if (!has_step(k))
            throw Error(ErrorKind::step_unavailable,
                        "step " + std::to_string(k) + " outside [" + std::to_string(first_) + ", " +
                            (last_ ? std::to_string(*last_) : std::string("inf")) + "]");
        {
            std::shared_lock lock(memo_->mutex);
            auto it = memo_->steps.find(k);
            if (it != memo_->steps.end()) return *it->second;
        }
        auto built = std::make_shared<const KernelStep>(k, generator_(k), ref_);
        std::unique_lock lock(memo_->mutex);
        auto [it, inserted] = memo_->steps.emplace(k, std::move(built));
        return *it->second;
    }

private:
    struct Memo {
        std::shared_mutex mutex;
        std::map<Time, std::shared_ptr<const KernelStep>> steps;
    };

    Process(ReferenceSpace ref, Generator gen, Time first, std::optional<Time> last, bool homogeneous)
        : ref_(std::move(ref)), generator_(std::move(gen)), first_(first), last_(last),
          homogeneous_(homogeneous), memo_(std::make_shared<Memo>()) {
        if (last_ && *last_ < first_) throw Error(ErrorKind::invalid_argument, "empty step range");
    }

    ReferenceSpace ref_;
    Generator generator_;
    Time first_;
    std::optional<Time> last_;
    bool homogeneous_;
    std::string kind_;
    nlohmann::json params_ = nlohmann::json::object();
    std::shared_ptr<Memo> memo_;
};

inline void require_interval(Time k, Time n) {
    if (k >= n)
        throw Error(ErrorKind::invalid_argument,
                    "need k < n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
}

// P^{[k,n]} as a matrix; left fold from step k so results are reproducible
// bit for bit whichever caller asks.
inline KernelMatrix compose(const Process& p, Time k, Time n) {
    require_interval(k, n);
    KernelMatrix out = p.step(k).matrix();
    for (Time t = k + 1; t < n; ++t) out = out * p.step(t).matrix();
    return out;
}

// Signed-vector form of P^{[k,n]}_*, stepping one kernel at a time.
inline std::vector<double> push_forward(const Process& p, Time k, Time n, std::span<const double> v) {
    require_interval(k, n);
    require_same_size(v.size(), p.n_states(), "push_forward");
    std::vector<double> cur(v.begin(), v.end());
    for (Time t = k; t < n; ++t) cur = p.step(t).matrix().left_multiply(cur);
    return cur;
}

inline Measure push_forward(const Process& p, Time k, Time n, const Measure& m) {
    return Measure(push_forward(p, k, n, m.view()));
}

// (P^{[k,n]} f)(x) = sum_y P^{[k,n]}(x,y) f(y).
inline std::vector<double> apply_function(const Process& p, Time k, Time n, std::span<const double> f) {
    require_interval(k, n);
    require_same_size(f.size(), p.n_states(), "apply_function");
    std::vector<double> cur(f.begin(), f.end());
    for (Time t = n; t-- > k;) cur = p.step(t).matrix().right_multiply(cur);
    return cur;
}

inline double pairing(std::span<const double> m, std::span<const double> f) {
    require_same_size(m.size(), f.size(), "pairing");
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * f[i];
    return s;
}

// ---------------------------------------------------------------------------
// Built-in families
// ---------------------------------------------------------------------------

// Four states, mu = (1/2, 1/2, 0, 0), homogeneous step
//   p q 0 0
//   q p 0 0
//   0 0 1 0
//   0 0 0 1
inline Process block_example(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::invalid_argument, "block example needs p in (0,1)");
    const double q = 1.0 - p;
    auto step = KernelMatrix::from_rows({{p, q, 0, 0}, {q, p, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    auto proc = Process::generated(ReferenceSpace({0.5, 0.5, 0.0, 0.0}), [step](Time) { return step; }, 0,
                                   std::nullopt, true, "block_example", nlohmann::json{{"p", p}});
    proc.step(0);
    return proc;
}

inline Process identity_process(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::invalid_argument, "identity process needs states");
    return Process::homogeneous(ReferenceSpace::uniform(n), KernelMatrix::identity(n));
}

// A countable drifting chain on {0, 1, 2, ...}: step k pulls mass onto
// states k-1 and k and otherwise holds in place. Truncated to `size`
// states. State labels coincide with storage indices and include the
// Poisson atom 0: kDriftChainLabelOffset maps storage index s to label
// s + kDriftChainLabelOffset. With label 0 present the step k = 1 (whose
// column k-1 is label 0) is stochastic like every other step.
inline constexpr std::size_t kDriftChainLabelOffset = 0;

struct DriftChainCoefficients {
    double r;       // r_{k,i} = 1/(k+i)
    double alpha;   // lambda_{k,k-1} = 1/k
    double beta;    // lambda_{k,k} = sqrt((k-1)/k)
    double q_prev;  // q_{i,k-1} from the row-normalization identity
    double q_k;     // q_{i,k} = beta
};

inline DriftChainCoefficients drift_chain_coefficients(Time k, std::size_t i) {
    if (k < 1) throw Error(ErrorKind::invalid_argument, "drift chain starts at k = 1");
    const double kd = static_cast<double>(k);
    const double id = static_cast<double>(i + kDriftChainLabelOffset);
    DriftChainCoefficients c{};
    c.r = 1.0 / (kd + id);
    c.alpha = 1.0 / kd;
    c.beta = std::sqrt((kd - 1.0) / kd);
    c.q_prev = (c.alpha - c.r) / c.alpha;  // (1 - r - (k-1)/k) / alpha with 1 - (k-1)/k = alpha
    c.q_k = c.beta;
    return c;
}

inline KernelMatrix drift_chain_matrix(Time k, std::size_t size,
                                     KernelMatrix::Layout layout = KernelMatrix::Layout::dense) {
    if (k < 1) throw Error(ErrorKind::invalid_argument, "drift chain starts at k = 1");
    if (size <= k + 1)
        throw Error(ErrorKind::invalid_argument, "truncation of " + std::to_string(size) +
                                                     " states too small for step " + std::to_string(k));
    const double kd = static_cast<double>(k);
    std::vector<std::vector<KernelMatrix::Entry>> rows(size);
    for (std::size_t s = 0; s < size; ++s) {
        const std::size_t i = s + kDriftChainLabelOffset;
        const double id = static_cast<double>(i);
        const double inv = 1.0 / (kd + id);
        const double prev = inv * (id / kd + (i == k - 1 ? 1.0 : 0.0));
        const double cur = (kd - 1.0) / kd + (i == k ? inv : 0.0);
        auto& row = rows[s];
        if (prev != 0.0) row.push_back({k - 1 - kDriftChainLabelOffset, prev});
        if (cur != 0.0) row.push_back({k - kDriftChainLabelOffset, cur});
        if (i != k - 1 && i != k) row.push_back({s, inv});
    }
    return KernelMatrix::from_sparse_rows(size, std::move(rows), layout);
}

// Poisson(rate) restricted to {0, ..., n-1} and renormalized.
inline ReferenceSpace truncated_poisson(std::size_t n, double rate) {
    if (n == 0 || !(rate > 0.0)) throw Error(ErrorKind::invalid_argument, "poisson truncation");
    std::vector<double> w(n);
    double term = std::exp(-rate);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = term;
        term *= rate / static_cast<double>(i + 1);
    }
    double total = 0.0;
    for (double x : w) total += x;
    for (auto& x : w) x /= total;
    if (w.back() == 0.0)
        throw Error(ErrorKind::invalid_argument,
                    "poisson weights underflow at " + std::to_string(n) + " states; use a uniform reference");
    return ReferenceSpace(std::move(w));
}

// poisson_rate <= 0 selects the uniform reference measure instead.
inline Process drift_chain_process(std::size_t size, double poisson_rate = 1.0) {
    if (size < 3) throw Error(ErrorKind::invalid_argument, "drift chain truncation needs >= 3 states");
    const auto layout = KernelMatrix::default_layout(size);
    auto ref = poisson_rate > 0.0 ? truncated_poisson(size, poisson_rate) : ReferenceSpace::uniform(size);
    return Process::generated(
        std::move(ref), [size, layout](Time k) { return drift_chain_matrix(k, size, layout); }, 1, size - 2, false,
        "drift_chain", nlohmann::json{{"poisson_rate", poisson_rate}});
}

} // namespace nhdmp
