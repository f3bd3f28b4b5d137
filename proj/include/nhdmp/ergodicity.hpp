#pragma once

// Finite-horizon gaps for the four ergodicity notions.
//
//   weak       sup_{x,y in X}      |P^{[k,n]}(x,.) - P^{[k,n]}(y,.)|_1
//   l1_weak    sup_{lambda,nu in M} |P^{[k,n]}_* lambda - P^{[k,n]}_* nu|_1
//   strong     sup_{x in X}        |P^{[k,n]}(x,.) - target|_1
//   l1_strong  sup_{lambda in M}   |P^{[k,n]}_* lambda - target|_1
//
// The L1 notions range over M, which is the convex hull of the point masses
// on supp(mu). (lambda, nu) -> |P_*lambda - P_*nu|_1 is convex, so its sup
// over M x M is attained at a pair of extreme points and the gap is a max
// over rows x, y in supp(mu). The same argument reduces l1_strong to rows in
// supp(mu). Every gap is therefore exact, not sampled.
//
// Gaps are measurements only. Verdicts about ergodicity come from
// minorization certificates.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kernels.hpp"

namespace nhdmp {

enum class Notion { weak, l1_weak, strong, l1_strong };

inline const char* to_string(Notion n) {
    switch (n) {
    case Notion::weak: return "weak";
    case Notion::l1_weak: return "l1_weak";
    case Notion::strong: return "strong";
    case Notion::l1_strong: return "l1_strong";
    }
    return "?";
}

inline Notion parse_notion(const std::string& s) {
    if (s == "weak") return Notion::weak;
    if (s == "l1_weak") return Notion::l1_weak;
    if (s == "strong") return Notion::strong;
    if (s == "l1_strong") return Notion::l1_strong;
    throw Error(ErrorKind::invalid_argument, "unknown notion \"" + s + "\"");
}

inline bool is_strong(Notion n) { return n == Notion::strong || n == Notion::l1_strong; }

// Max pairwise L1 distance between the listed rows.
inline double max_row_distance(const KernelMatrix& m, const std::vector<std::size_t>& rows) {
    std::vector<std::vector<double>> dense;
    dense.reserve(rows.size());
    for (auto r : rows) dense.push_back(m.row(r));
    double best = 0.0;
    for (std::size_t a = 0; a < dense.size(); ++a)
        for (std::size_t b = a + 1; b < dense.size(); ++b) best = std::max(best, l1_distance(dense[a], dense[b]));
    return best;
}

inline double max_row_distance_to(const KernelMatrix& m, const std::vector<std::size_t>& rows,
                                  std::span<const double> target) {
    double best = 0.0;
    for (auto r : rows) best = std::max(best, l1_distance(m.row(r), target));
    return best;
}

inline std::vector<std::size_t> all_states(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

inline void require_probability_target(const Measure& target, std::size_t n) {
    require_same_size(target.size(), n, "target");
    if (!target.is_probability()) throw Error(ErrorKind::invalid_argument, "target must be a probability");
}

// Gap of an already composed matrix.
inline double gap_of(const KernelMatrix& composed, const ReferenceSpace& ref, Notion notion,
                     const Measure* target = nullptr) {
    const auto rows = (notion == Notion::l1_weak || notion == Notion::l1_strong) ? ref.support_states()
                                                                                 : all_states(ref.n_states());
    if (!is_strong(notion)) return max_row_distance(composed, rows);
    if (target == nullptr) throw Error(ErrorKind::invalid_argument, "strong notions need a target");
    require_probability_target(*target, ref.n_states());
    return max_row_distance_to(composed, rows, target->view());
}

inline double weak_gap(const Process& p, Time k, Time n) { return gap_of(compose(p, k, n), p.ref(), Notion::weak); }

inline double l1_weak_gap(const Process& p, Time k, Time n) {
    return gap_of(compose(p, k, n), p.ref(), Notion::l1_weak);
}

inline double strong_gap(const Process& p, Time k, Time n, const Measure& target) {
    return gap_of(compose(p, k, n), p.ref(), Notion::strong, &target);
}

inline double l1_strong_gap(const Process& p, Time k, Time n, const Measure& target) {
    return gap_of(compose(p, k, n), p.ref(), Notion::l1_strong, &target);
}

// delta(P) = 1/2 max_{x,y} |P(x,.) - P(y,.)|_1
inline double dobrushin(const KernelMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        double sum = 0.0;
        m.for_each_in_row(i, [&](std::size_t j, double v) {
            if (!(v >= 0.0))
                throw Error(ErrorKind::non_stochastic,
                            "row " + std::to_string(i) + " column " + std::to_string(j) + " negative");
            sum += v;
        });
        if (std::abs(sum - 1.0) > tolerance())
            throw Error(ErrorKind::non_stochastic, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
    return 0.5 * max_row_distance(m, all_states(m.size()));
}

struct GapReport {
    Notion notion = Notion::l1_weak;
    Time k = 0;
    std::vector<Time> horizons;
    std::vector<double> gaps;
    std::optional<Measure> candidate_limit;
};

// Horizons are absolute end times n > k, strictly increasing. The composed
// matrix is extended one step at a time, which reproduces compose(k, n)
// exactly for every n.
inline GapReport decay_table(const Process& p, Time k, const std::vector<Time>& horizons, Notion notion,
                             std::optional<Measure> target = std::nullopt) {
    if (horizons.empty()) throw Error(ErrorKind::invalid_argument, "no horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] <= k)
            throw Error(ErrorKind::invalid_argument, "horizon " + std::to_string(horizons[i]) + " not after k");
        if (i > 0 && horizons[i] <= horizons[i - 1])
            throw Error(ErrorKind::invalid_argument, "horizons must be strictly increasing");
    }
    GapReport report;
    report.notion = notion;
    report.k = k;
    report.horizons = horizons;
    if (is_strong(notion)) {
        if (!target) target = push_forward(p, k, horizons.back(), p.ref().mu());
        require_probability_target(*target, p.n_states());
        report.candidate_limit = target;
    }
    KernelMatrix m = p.step(k).matrix();
    Time reached = k + 1;
    for (Time n : horizons) {
        for (; reached < n; ++reached) m = m * p.step(reached).matrix();
        report.gaps.push_back(gap_of(m, p.ref(), notion, report.candidate_limit ? &*report.candidate_limit : nullptr));
    }
    return report;
}

inline std::string format_real(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline void write_csv(std::ostream& os, const GapReport& r) {
    os << "notion,k,n,gap\n";
    for (std::size_t i = 0; i < r.horizons.size(); ++i)
        os << to_string(r.notion) << ',' << r.k << ',' << r.horizons[i] << ',' << format_real(r.gaps[i]) << '\n';
}

inline nlohmann::json to_json_value(const GapReport& r) {
    nlohmann::json j{{"notion", to_string(r.notion)}, {"k", r.k}, {"horizons", r.horizons}, {"gaps", r.gaps}};
    if (r.candidate_limit) j["candidate_limit"] = r.candidate_limit->weights();
    return j;
}

} // namespace nhdmp
