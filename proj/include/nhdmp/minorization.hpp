#pragma once

// Minorization certificates and the coupling bound.
//
// A certificate (k, n_k, mu_k, X_k) asserts
//
//     P^{[k,k+n_k]}_* lambda >= mu_k 1_{X_k}   for every lambda in M.
//
// At finite scale the largest such measure is the columnwise minimum of
// the rows of P^{[k,k+n_k]} indexed by supp(mu): M is the convex hull of
// those rows' point masses and the inequality is linear in lambda. The
// certificate is therefore uniform in lambda, and X_k is taken maximal
// (every column with a positive minimum), so the pairwise sets X_k, Y_k
// and Z = X_k cap Y_k of the general definition all coincide with it.
//
// Masses are kept strictly below 1/2 by repeated halving. With that,
// each coupling step subtracts mu_k from both pushed-forward measures and
// rescales by gamma = 1 - |mu_k|_1, giving 1/2 <= gamma <= 1 - |mu_k|_1 / 2
// and the exact factorization
//
//     |P^{[k,n]}_* lambda - P^{[k,n]}_* nu|_1
//         = gamma |P^{[k+n_k,n]}_* lambda_1 - P^{[k+n_k,n]}_* nu_1|_1 .
//
// Chaining certificates over consecutive intervals bounds the L1-weak gap
// by 2 prod_i (1 - |mu_i|_1 / 2).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergodicity.hpp"
#include "kernels.hpp"

namespace nhdmp {

struct MinorizationCertificate {
    Time k = 0;
    Time n_k = 1;
    Measure mu_k;      // already restricted to X_k
    StateSet X_k;
    double mass = 0.0;
    bool halved = false;
    int halvings = 0;

    bool is_empty() const { return mass <= 0.0; }
    Time end() const { return k + n_k; }
};

// Restricts `raw` to `x_set` and halves until the mass is below 1/2.
inline MinorizationCertificate make_certificate(Time k, Time n_k, const Measure& raw, const StateSet& x_set) {
    if (n_k == 0) throw Error(ErrorKind::invalid_argument, "certificate needs n_k >= 1");
    MinorizationCertificate c;
    c.k = k;
    c.n_k = n_k;
    c.X_k = x_set;
    c.mu_k = restrict(raw, x_set);
    c.mass = c.mu_k.mass();
    while (c.mass >= 0.5) {
        c.mu_k = c.mu_k.scaled(0.5);
        c.mass = c.mu_k.mass();
        c.halved = true;
        ++c.halvings;
    }
    return c;
}

// min over rows r in `rows` of m(r, j), for every column j.
inline Measure row_min_measure(const KernelMatrix& m, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw Error(ErrorKind::invalid_argument, "row minimum over no rows");
    std::vector<double> mins = m.row(rows.front());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto row = m.row(rows[r]);
        for (std::size_t j = 0; j < mins.size(); ++j) mins[j] = std::min(mins[j], row[j]);
    }
    return Measure(std::move(mins));
}

inline MinorizationCertificate certificate_from_matrix(const KernelMatrix& composed, const ReferenceSpace& ref,
                                                       Time k, Time n_k) {
    const Measure mins = row_min_measure(composed, ref.support_states());
    return make_certificate(k, n_k, mins, mins.support());
}

// One-step certificate from P^{[k,k+1]}. A zero-mass result is a flagged
// empty certificate, not an error.
inline MinorizationCertificate extract_one_step_certificate(const Process& p, Time k) {
    return certificate_from_matrix(p.step(k).matrix(), p.ref(), k, 1);
}

// Scans n = 1..window and returns the first certificate whose (halved)
// mass reaches target_mass, else the heaviest one (earliest on ties).
inline MinorizationCertificate extract_certificate_windowed(const Process& p, Time k, Time window,
                                                            double target_mass) {
    if (window == 0) throw Error(ErrorKind::invalid_argument, "window must be >= 1");
    KernelMatrix m = p.step(k).matrix();
    std::optional<MinorizationCertificate> best;
    for (Time n = 1; n <= window; ++n) {
        if (n > 1) {
            if (!p.has_step(k + n - 1)) break;
            m = m * p.step(k + n - 1).matrix();
        }
        auto cert = certificate_from_matrix(m, p.ref(), k, n);
        if (cert.mass >= target_mass - tolerance()) return cert;
        if (!best || cert.mass > best->mass) best = std::move(cert);
    }
    return *best;
}

inline void require_in_m(const Measure& m, const ReferenceSpace& ref, const char* what) {
    require_same_size(m.size(), ref.n_states(), what);
    if (!in_m(m, ref))
        throw Error(ErrorKind::not_in_m, std::string(what) + " is not a mu-absolutely-continuous probability");
}

inline bool dominates(std::span<const double> pushed, const Measure& mu_k) {
    for (std::size_t j = 0; j < pushed.size(); ++j)
        if (pushed[j] < mu_k[j] - tolerance()) return false;
    return true;
}

// Checks the supplied lambdas and every point mass on supp(mu); the latter
// covers all of M.
inline bool verify_certificate(const Process& p, const MinorizationCertificate& cert,
                               const std::vector<Measure>& lambdas = {}) {
    for (const auto& lam : lambdas) require_in_m(lam, p.ref(), "lambda");
    if (cert.is_empty()) return true;
    require_same_size(cert.mu_k.size(), p.n_states(), "certificate");
    for (const auto& lam : lambdas)
        if (!dominates(push_forward(p, cert.k, cert.end(), lam.view()), cert.mu_k)) return false;
    const KernelMatrix composed = compose(p, cert.k, cert.end());
    for (auto x : p.ref().support_states())
        if (!dominates(composed.row(x), cert.mu_k)) return false;
    return true;
}

struct CouplingStep {
    double gamma = 1.0;
    Time K_prev = 0;
    Time K_next = 0;
    Measure lambda_next;
    Measure nu_next;
    double mass = 0.0;  // |mu_{K_prev}|_1 of the certificate used
};

inline Measure residual(std::span<const double> pushed, const Measure& mu_k, double gamma) {
    std::vector<double> w(pushed.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::max(0.0, pushed[j] - mu_k[j]) / gamma;
    return Measure(std::move(w));
}

inline CouplingStep coupling_step(const Process& p, const MinorizationCertificate& cert, const Measure& lam,
                                  const Measure& nu) {
    require_in_m(lam, p.ref(), "lambda");
    require_in_m(nu, p.ref(), "nu");
    const auto a = push_forward(p, cert.k, cert.end(), lam.view());
    const auto b = push_forward(p, cert.k, cert.end(), nu.view());
    if (!dominates(a, cert.mu_k) || !dominates(b, cert.mu_k))
        throw Error(ErrorKind::not_dominating, "certificate at k=" + std::to_string(cert.k) +
                                                   " does not minorize the pushed-forward pair");
    CouplingStep s;
    s.mass = cert.mass;
    s.gamma = 1.0 - cert.mass;
    if (!(s.gamma > 0.0)) throw Error(ErrorKind::numerical, "coupling factor gamma is zero");
    s.K_prev = cert.k;
    s.K_next = cert.end();
    s.lambda_next = residual(a, cert.mu_k, s.gamma);
    s.nu_next = residual(b, cert.mu_k, s.gamma);
    return s;
}

// Runs `steps` coupling steps from time k, extracting each certificate at
// the current time with the given window.
inline std::vector<CouplingStep> run_coupling(const Process& p, Time k, Measure lam, Measure nu, std::size_t steps,
                                              Time window = 1) {
    std::vector<CouplingStep> out;
    Time t = k;
    for (std::size_t i = 0; i < steps; ++i) {
        const auto cert = extract_certificate_windowed(p, t, window, 0.5);
        out.push_back(coupling_step(p, cert, lam, nu));
        lam = out.back().lambda_next;
        nu = out.back().nu_next;
        t = out.back().K_next;
    }
    return out;
}

struct BoundRow {
    Time k;
    Time n_k;
    double mass;
    double partial_sum;
    double bound;
};

struct BoundReport {
    std::vector<MinorizationCertificate> certificates;
    std::vector<BoundRow> rows;
    double partial_mass_sum = 0.0;
    double product_bound = 2.0;

    // Time up to which product_bound applies (K_l); nullopt when empty.
    std::optional<Time> horizon() const {
        if (certificates.empty()) return std::nullopt;
        return certificates.back().end();
    }
};

// 2 prod (1 - |mu_i|_1 / 2) over certificates on consecutive intervals.
inline BoundReport product_bound(const std::vector<MinorizationCertificate>& certs) {
    BoundReport r;
    r.certificates = certs;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        if (i > 0 && certs[i].k != certs[i - 1].end())
            throw Error(ErrorKind::invalid_argument,
                        "certificate " + std::to_string(i) + " starts at " + std::to_string(certs[i].k) +
                            ", expected " + std::to_string(certs[i - 1].end()) + " (intervals must be consecutive)");
        r.partial_mass_sum += certs[i].mass;
        r.product_bound *= 1.0 - certs[i].mass / 2.0;
        r.rows.push_back({certs[i].k, certs[i].n_k, certs[i].mass, r.partial_mass_sum, r.product_bound});
    }
    return r;
}

struct Verdict {
    bool certified = false;
    std::optional<Time> horizon;  // K at which the bound first drops below epsilon
    double epsilon = 0.0;
    BoundReport report;

    std::string line() const {
        return certified ? "CERTIFIED@K=" + std::to_string(*horizon) : std::string("INCONCLUSIVE");
    }
};

// Finite evidence only: certifies once the product bound falls below
// epsilon, never claims the divergence of the full mass series.
inline Verdict divergence_verdict(const std::vector<MinorizationCertificate>& certs, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) throw Error(ErrorKind::invalid_argument, "epsilon must lie in (0, 2)");
    Verdict v;
    v.epsilon = epsilon;
    v.report = product_bound(certs);
    for (const auto& row : v.report.rows) {
        if (row.bound < epsilon) {
            v.certified = true;
            v.horizon = row.k + row.n_k;
            break;
        }
    }
    return v;
}

// One-step certificates for k_first, ..., k_last.
inline std::vector<MinorizationCertificate> one_step_certificates(const Process& p, Time k_first, Time k_last) {
    std::vector<MinorizationCertificate> out;
    for (Time k = k_first; k <= k_last; ++k) out.push_back(extract_one_step_certificate(p, k));
    return out;
}

// Consecutive windowed certificates starting at k, until `until` is reached.
inline std::vector<MinorizationCertificate> windowed_certificates(const Process& p, Time k, Time until, Time window,
                                                                  double target_mass) {
    std::vector<MinorizationCertificate> out;
    for (Time t = k; t < until && p.has_step(t);) {
        out.push_back(extract_certificate_windowed(p, t, std::min(window, until - t), target_mass));
        t = out.back().end();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Doeblin condition
// ---------------------------------------------------------------------------

struct DoeblinResult {
    bool holds = true;
    std::size_t sets_checked = 0;
    std::optional<StateSet> violating_set;
    double violating_min = 0.0;
};

inline constexpr std::size_t kDoeblinEnumerationLimit = 20;

// For every A with nu(A) > iota: min_x P^{n0}(x, A) >= delta. Subsets are
// enumerated exhaustively up to 20 states; larger spaces must opt into the
// threshold family {top-m states by nu-mass}.
inline DoeblinResult check_doeblin(const Process& p, const Measure& nu, Time n0, double iota, double delta,
                                   bool threshold_family = false) {
    if (!p.is_homogeneous()) throw Error(ErrorKind::invalid_argument, "Doeblin check needs a homogeneous process");
    if (!(iota > 0.0 && iota < 1.0)) throw Error(ErrorKind::invalid_argument, "iota must lie in (0,1)");
    if (!(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "delta must be positive");
    if (n0 == 0) throw Error(ErrorKind::invalid_argument, "n0 must be >= 1");
    const std::size_t n = p.n_states();
    require_same_size(nu.size(), n, "nu");
    if (!nu.is_probability()) throw Error(ErrorKind::invalid_argument, "nu must be a probability");
    if (n > kDoeblinEnumerationLimit && !threshold_family)
        throw Error(ErrorKind::invalid_argument,
                    "more than 20 states: pass an explicit set family (threshold_family)");

    const Time t0 = p.first_time();
    const auto rows = compose(p, t0, t0 + n0).to_rows();
    DoeblinResult result;
    const auto test_set = [&](const StateSet& a) {
        double nu_a = 0.0;
        for (auto j : a.members()) nu_a += nu[j];
        if (!(nu_a > iota)) return true;
        ++result.sets_checked;
        double worst = 1.0;
        for (const auto& row : rows) {
            double mass = 0.0;
            for (auto j : a.members()) mass += row[j];
            worst = std::min(worst, mass);
        }
        if (worst < delta - tolerance()) {
            result.holds = false;
            result.violating_set = a;
            result.violating_min = worst;
            return false;
        }
        return true;
    };

    if (!threshold_family) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            StateSet a(n);
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (std::uint64_t{1} << j)) a.insert(j);
            if (!test_set(a)) break;
        }
    } else {
        std::vector<std::size_t> order = all_states(n);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nu[a] > nu[b]; });
        StateSet a(n);
        for (auto j : order) {
            a.insert(j);
            if (!test_set(a)) break;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Conditions C0 (homogeneous) and C2 (nonhomogeneous analogue)
// ---------------------------------------------------------------------------

struct ConditionReport {
    std::vector<Time> horizons;        // n (steps after k)
    std::vector<StateSet> sets;        // maximal X_n valid for all of M
    std::vector<double> defects;       // mu(X \ X_n)
    std::optional<Time> settled_from;  // first n after which every defect <= tolerance
    bool consistent = false;
};

// X_n is the largest set with P^{[k,k+n]}_* lambda >= mu0 1_{X_n} for every
// lambda in M, i.e. the columns whose minimum over supp(mu) rows reaches mu0.
inline ConditionReport check_c2(const Process& p, Time k, const Measure& mu0, Time horizon) {
    require_same_size(mu0.size(), p.n_states(), "mu0");
    if (!(mu0.mass() > 0.0)) throw Error(ErrorKind::invalid_argument, "minorizing measure must have positive mass");
    if (horizon == 0) throw Error(ErrorKind::invalid_argument, "horizon must be >= 1");
    ConditionReport r;
    const auto rows = p.ref().support_states();
    KernelMatrix m = p.step(k).matrix();
    for (Time n = 1; n <= horizon; ++n) {
        if (n > 1) m = m * p.step(k + n - 1).matrix();
        const Measure mins = row_min_measure(m, rows);
        StateSet x_n(p.n_states());
        double defect = 0.0;
        for (std::size_t j = 0; j < p.n_states(); ++j) {
            if (mins[j] >= mu0[j] - tolerance())
                x_n.insert(j);
            else
                defect += p.ref().mu()[j];
        }
        r.horizons.push_back(n);
        r.sets.push_back(std::move(x_n));
        r.defects.push_back(defect);
    }
    for (std::size_t i = r.defects.size(); i-- > 0;) {
        if (r.defects[i] > tolerance()) break;
        r.settled_from = r.horizons[i];
    }
    r.consistent = r.settled_from.has_value();
    return r;
}

inline ConditionReport check_c0(const Process& p, const Measure& mu0, Time horizon) {
    if (!p.is_homogeneous()) throw Error(ErrorKind::invalid_argument, "C0 check needs a homogeneous process");
    return check_c2(p, p.first_time(), mu0, horizon);
}

// ---------------------------------------------------------------------------
// Column condition p_{i, n_k} >= lambda_k for every row i
// ---------------------------------------------------------------------------

struct ColumnConditionRow {
    Time k;
    std::size_t state;
    double lambda;
    double column_min;
    bool holds;
};

struct ColumnConditionReport {
    std::vector<ColumnConditionRow> rows;
    bool all_hold = true;
    double sum_lambda = 0.0;            // sum lambda_k: drives the verdict
    double sum_one_minus_lambda = 0.0;  // sum (1 - lambda_k): the alternative reading of the condition
    // One partial sum stays below 1 while the other exceeds it over the
    // checked range, so the two readings of the divergence condition point
    // in different directions here.
    bool readings_disagree = false;
    Verdict verdict;
};

// Sequences are indexed by process step time: states[t - first] and
// lambdas[t - first] describe step t (the kernel P^{[t,t+1]}), t = first..last.
// Rows checked are every represented state.
inline ColumnConditionReport check_column_condition(const Process& p, const std::vector<std::size_t>& states,
                                                    const std::vector<double>& lambdas, Time first, Time last,
                                                    double epsilon) {
    if (last < first) throw Error(ErrorKind::invalid_argument, "empty step range");
    const std::size_t needed = last - first + 1;
    if (states.size() < needed || lambdas.size() < needed)
        throw Error(ErrorKind::invalid_argument, "sequence too short: need " + std::to_string(needed) + " entries");
    ColumnConditionReport r;
    std::vector<MinorizationCertificate> certs;
    for (Time t = first; t <= last; ++t) {
        const std::size_t state = states[t - first];
        const double lambda = lambdas[t - first];
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::invalid_argument, "lambda outside [0,1]");
        if (state >= p.n_states()) throw Error(ErrorKind::invalid_argument, "state outside the truncation");
        const auto& m = p.step(t).matrix();
        double col_min = 1.0;
        for (std::size_t i = 0; i < p.n_states(); ++i) col_min = std::min(col_min, m(i, state));
        const bool holds = col_min >= lambda - tolerance();
        r.rows.push_back({t, state, lambda, col_min, holds});
        r.all_hold = r.all_hold && holds;
        r.sum_lambda += lambda;
        r.sum_one_minus_lambda += 1.0 - lambda;
        std::vector<double> w(p.n_states(), 0.0);
        w[state] = lambda;
        const Measure mu_k(std::move(w));
        certs.push_back(make_certificate(t, 1, mu_k, mu_k.support()));
    }
    r.readings_disagree = (r.sum_lambda >= 1.0) != (r.sum_one_minus_lambda >= 1.0);
    if (r.all_hold) {
        r.verdict = divergence_verdict(certs, epsilon);
    } else {
        r.verdict.epsilon = epsilon;
        r.verdict.report = product_bound({});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Set form: P^{[k-1,k]}(x, A_k) >= alpha_k
// ---------------------------------------------------------------------------

struct SetMinorization {
    double alpha = 0.0;  // min over supp(mu) rows of P(x, A)
    Measure nu;          // columnwise row minimum restricted to A
    double nu_mass = 0.0;
    Measure normalized;  // nu / nu(A), zero when nu(A) = 0
};

// nu is the lattice infimum of the row measures on A. Note nu(A) <= alpha,
// with equality for singletons; nu (not alpha times the normalized
// measure) is what minorizes every pushed-forward lambda.
inline SetMinorization set_minorization(const KernelMatrix& step, const ReferenceSpace& ref, const StateSet& a) {
    require_same_size(a.n_states(), step.size(), "set");
    if (a.is_empty()) throw Error(ErrorKind::invalid_argument, "empty set");
    SetMinorization s;
    const auto rows = ref.support_states();
    s.alpha = 1.0;
    for (auto x : rows) {
        double mass = 0.0;
        step.for_each_in_row(x, [&](std::size_t j, double v) {
            if (a.contains(j)) mass += v;
        });
        s.alpha = std::min(s.alpha, mass);
    }
    s.nu = restrict(row_min_measure(step, rows), a);
    s.nu_mass = s.nu.mass();
    s.normalized = s.nu_mass > 0.0 ? s.nu.scaled(1.0 / s.nu_mass) : Measure(step.size());
    return s;
}

inline MinorizationCertificate set_certificate(const Process& p, Time k, const StateSet& a) {
    const auto s = set_minorization(p.step(k).matrix(), p.ref(), a);
    return make_certificate(k, 1, s.nu, a);
}

// ---------------------------------------------------------------------------
// Certificate from observed decay
// ---------------------------------------------------------------------------

struct DecayCertificate {
    Time n_k = 0;
    Measure nu_k;            // P^{[k,k+n_k]}_* mu0
    StateSet A_k;            // {nu_k >= threshold}
    double sup_deviation = 0.0;
    MinorizationCertificate certificate;
};

// Finds the first n <= max_window with sup_{x in supp(mu), j} |P^{[k,k+n]}(x,j) - nu_k(j)| < iota/2,
// then sets mu_k = nu_k 1_{A_k} / 2. On A_k every pushed-forward lambda is at
// least nu_k - iota/2, which dominates nu_k / 2 only where nu_k >= iota; the
// default threshold is therefore iota. Lower thresholds are accepted so the
// construction can be checked against verify_certificate.
inline std::optional<DecayCertificate> certificate_from_decay(const Process& p, Time k, const Measure& mu0,
                                                              double iota, Time max_window,
                                                              std::optional<double> threshold = std::nullopt) {
    require_in_m(mu0, p.ref(), "mu0");
    if (!(iota > 0.0 && iota < 1.0)) throw Error(ErrorKind::invalid_argument, "iota must lie in (0,1)");
    const double cut = threshold.value_or(iota);
    KernelMatrix m = p.step(k).matrix();
    for (Time n = 1; n <= max_window; ++n) {
        if (n > 1) {
            if (!p.has_step(k + n - 1)) break;
            m = m * p.step(k + n - 1).matrix();
        }
        const auto nu = m.left_multiply(mu0.view());
        double dev = 0.0;
        for (auto x : p.ref().support_states()) {
            const auto row = m.row(x);
            for (std::size_t j = 0; j < row.size(); ++j) dev = std::max(dev, std::abs(row[j] - nu[j]));
        }
        if (dev < iota / 2.0) {
            DecayCertificate d;
            d.n_k = n;
            d.nu_k = Measure(nu);
            d.sup_deviation = dev;
            d.A_k = StateSet(p.n_states());
            for (std::size_t j = 0; j < nu.size(); ++j)
                if (nu[j] >= cut) d.A_k.insert(j);
            d.certificate = make_certificate(k, n, d.nu_k.scaled(0.5), d.A_k);
            return d;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json certificate_to_json(const MinorizationCertificate& c) {
    return nlohmann::json{{"k", c.k},        {"n_k", c.n_k},           {"mass", c.mass},
                          {"mu_k", c.mu_k.weights()}, {"X_k", c.X_k.members()}, {"halved", c.halved}};
}

inline MinorizationCertificate certificate_from_json(const nlohmann::json& j) {
    try {
        MinorizationCertificate c;
        c.k = j.at("k").get<Time>();
        c.n_k = j.at("n_k").get<Time>();
        c.mu_k = Measure(j.at("mu_k").get<std::vector<double>>());
        const auto members = j.at("X_k").get<std::vector<std::size_t>>();
        c.X_k = StateSet::of(c.mu_k.size(), members);
        c.mass = j.at("mass").get<double>();
        c.halved = j.at("halved").get<bool>();
        if (c.n_k == 0) throw Error(ErrorKind::schema, "n_k must be >= 1");
        if (std::abs(c.mass - c.mu_k.mass()) > 1e-9) throw Error(ErrorKind::schema, "mass differs from sum of mu_k");
        if (c.mass >= 0.5) throw Error(ErrorKind::schema, "certificate mass must be below 1/2");
        for (std::size_t i = 0; i < c.mu_k.size(); ++i)
            if (c.mu_k[i] != 0.0 && !c.X_k.contains(i))
                throw Error(ErrorKind::schema, "mu_k is nonzero outside X_k at state " + std::to_string(i));
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, e.what());
    }
}

inline void write_csv(std::ostream& os, const BoundReport& r) {
    os << "k,n_k,mass,partial_sum,bound\n";
    for (const auto& row : r.rows)
        os << row.k << ',' << row.n_k << ',' << format_real(row.mass) << ',' << format_real(row.partial_sum) << ','
           << format_real(row.bound) << '\n';
}

} // namespace nhdmp
