#pragma once

// Batch front end shared by the nhdmp executable and its tests.
//
// Exit codes: 0 success, 2 usage/config, 3 input validation, 4 internal
// numerical failure. Verdicts are single lines on the verdict stream;
// tables go to the configured output (a file, or the table stream when no
// path is given).

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nhdmp.hpp"

namespace nhdmp::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kNumerical = 4 };

struct RunConfig {
    std::string command;
    std::string input;    // process or QSP file
    std::string builtin;  // block | drift_chain | identity | constant | mixing
    double p = 0.7;
    std::size_t n_states = 64;
    double poisson_rate = 1.0;
    Time k = 0;
    std::optional<Time> k_max;
    std::vector<Time> horizons;
    std::string notion = "l1_weak";
    std::vector<double> target;
    double epsilon = 0.01;
    Time window = 1;
    double tau = 0.5;
    std::vector<std::size_t> set;  // fixed criterion set for the qsp command
    std::string output;
    std::string format = "csv";
    std::string cert_output;
    std::string bound_output;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::size_t parse_index(const std::string& s) {
    std::size_t value = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || s.empty()) throw ConfigError("not a nonnegative integer: \"" + s + "\"");
    return value;
}

// "a..b" (inclusive) or "a,b,c"; must be strictly increasing.
inline std::vector<Time> parse_horizons(const std::string& text) {
    std::vector<Time> out;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const Time a = parse_index(text.substr(0, dots));
        const Time b = parse_index(text.substr(dots + 2));
        if (b < a) throw ConfigError("empty horizon range " + text);
        for (Time n = a; n <= b; ++n) out.push_back(n);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_index(item));
    }
    if (out.empty()) throw ConfigError("no horizons given");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw ConfigError("horizons must be strictly increasing");
    return out;
}

inline std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw ConfigError("bad number \"" + item + "\"");
        } catch (const std::logic_error&) {
            throw ConfigError("bad number \"" + item + "\"");
        }
    }
    return out;
}

inline std::vector<std::size_t> parse_indices(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_index(item));
    return out;
}

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::unsupported:
    case ErrorKind::step_unavailable: return kUsage;
    case ErrorKind::dimension_mismatch:
    case ErrorKind::non_stochastic:
    case ErrorKind::measurability:
    case ErrorKind::not_in_m:
    case ErrorKind::schema:
    case ErrorKind::asymmetric_tensor: return kValidation;
    case ErrorKind::not_dominating:
    case ErrorKind::numerical: return kNumerical;
    }
    return kNumerical;
}

inline Process load_source_process(const RunConfig& c) {
    if (!c.input.empty() && !c.builtin.empty()) throw ConfigError("give either --input or --builtin, not both");
    if (!c.input.empty()) return load_process(c.input);
    if (c.builtin == "block") return block_example(c.p);
    if (c.builtin == "drift_chain") return drift_chain_process(c.n_states, c.poisson_rate);
    if (c.builtin == "identity") return identity_process(c.n_states);
    if (c.builtin.empty()) throw ConfigError("need --input or --builtin");
    throw ConfigError("unknown builtin process \"" + c.builtin + "\"");
}

inline QspProcess load_source_qsp(const RunConfig& c) {
    if (!c.input.empty() && !c.builtin.empty()) throw ConfigError("give either --input or --builtin, not both");
    if (!c.input.empty()) return load_qsp(c.input);
    if (c.builtin == "mixing") return mixing_qsp();
    if (c.builtin == "constant") {
        auto ref = ReferenceSpace::uniform(2);
        return constant_fiber_qsp(Measure{0.25, 0.75}, ref, Measure{0.5, 0.5});
    }
    if (c.builtin.empty()) throw ConfigError("need --input or --builtin");
    throw ConfigError("unknown builtin qsp \"" + c.builtin + "\"");
}

// Runs `emit` against the output file, or against `fallback` when no path
// is configured.
template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& emit) {
    if (path.empty()) {
        emit(fallback);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    emit(out);
}

inline void check_common(const RunConfig& c) {
    if (!(c.epsilon > 0.0 && c.epsilon < 2.0)) throw ConfigError("epsilon must lie in (0, 2)");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
}

inline int cmd_gaps(const RunConfig& c, std::ostream& table, std::ostream&) {
    check_common(c);
    if (c.horizons.empty()) throw ConfigError("--horizons is required");
    const Process p = load_source_process(c);
    const Notion notion = parse_notion(c.notion);
    std::optional<Measure> target;
    if (!c.target.empty()) target = Measure(c.target);
    const GapReport report = decay_table(p, c.k, c.horizons, notion, target);
    with_output(c.output, table, [&](std::ostream& os) {
        if (c.format == "csv")
            write_csv(os, report);
        else
            os << to_json_value(report).dump(2) << '\n';
    });
    return kOk;
}

inline int cmd_certify(const RunConfig& c, std::ostream&, std::ostream& verdict_out) {
    check_common(c);
    const Process p = load_source_process(c);
    const Time k_max = c.k_max ? *c.k_max
                               : (p.last_time() ? *p.last_time() : throw ConfigError("--k-max is required"));
    if (k_max < c.k) throw ConfigError("--k-max must not precede --k");
    if (c.window == 0) throw ConfigError("--window must be >= 1");
    const auto certs = windowed_certificates(p, c.k, k_max + 1, c.window, c.tau);
    const Verdict v = divergence_verdict(certs, c.epsilon);
    if (!c.cert_output.empty()) {
        nlohmann::json bundle = nlohmann::json::array();
        for (const auto& cert : certs) bundle.push_back(certificate_to_json(cert));
        with_output(c.cert_output, verdict_out, [&](std::ostream& os) { os << bundle.dump(2) << '\n'; });
    }
    if (!c.bound_output.empty())
        with_output(c.bound_output, verdict_out, [&](std::ostream& os) { write_csv(os, v.report); });
    verdict_out << v.line() << '\n';
    return kOk;
}

inline int cmd_qsp(const RunConfig& c, std::ostream& table, std::ostream& verdict_out) {
    check_common(c);
    if (c.horizons.empty()) throw ConfigError("--horizons is required");
    if (c.horizons.front() == 0) throw ConfigError("qsp horizons start at 1");
    const QspProcess q = load_source_qsp(c);
    const Time horizon = c.horizons.back();
    std::vector<StateSet> sets;
    if (c.set.empty()) {
        sets = default_criterion_sets(q, horizon);
    } else {
        for (Time k = 1; k <= horizon; ++k) sets.push_back(StateSet::of(q.n_states(), c.set));
    }
    for (const auto& s : sets)
        if (s.is_empty()) throw ConfigError("criterion set is empty; pass --set");
    const QspCriterionReport crit = check_we_pq(q, sets, horizon, c.epsilon);
    with_output(c.output, table, [&](std::ostream& os) {
        nlohmann::json rows = nlohmann::json::array();
        if (c.format == "csv") os << "n,qsp_gap,marginal_gap,bound\n";
        for (Time n : c.horizons) {
            const QspGap g = qsp_l1_weak_gap(q, 0, n);
            const double bound = crit.verdict.report.rows[n - 1].bound;
            if (c.format == "csv")
                os << n << ',' << format_real(g.qsp_gap) << ',' << format_real(g.marginal_gap) << ','
                   << format_real(bound) << '\n';
            else
                rows.push_back({{"n", n}, {"qsp_gap", g.qsp_gap}, {"marginal_gap", g.marginal_gap}, {"bound", bound}});
        }
        if (c.format == "json") os << rows.dump(2) << '\n';
    });
    verdict_out << crit.verdict.line() << '\n';
    return kOk;
}

// Dispatch with the exit-code contract applied.
inline int run(const RunConfig& c, std::ostream& table, std::ostream& verdict_out, std::ostream& err) {
    try {
        if (c.command == "gaps") return cmd_gaps(c, table, verdict_out);
        if (c.command == "certify") return cmd_certify(c, table, verdict_out);
        if (c.command == "qsp") return cmd_qsp(c, table, verdict_out);
        err << "error: unknown command \"" << c.command << "\"\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kNumerical;
    }
}

} // namespace nhdmp::cli
