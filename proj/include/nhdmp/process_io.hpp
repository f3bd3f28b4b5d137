#pragma once

// Process files:
//   {"n_states": N, "mu": [...], "kind": "explicit" | "block_example" | "drift_chain",
//    "params": {...}, "steps": [[[row], ...], ...]}
// "steps" is read for the explicit kind only. Explicit params: "homogeneous"
// (single step repeated forever) and "first_time". Generator kinds are
// saved by name and parameters and regenerated on load.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kernels.hpp"

namespace nhdmp {

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        throw Error(ErrorKind::schema, std::string("missing field \"") + name + "\"");
    return j.at(name);
}

inline std::vector<double> number_array(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array()) throw Error(ErrorKind::schema, what + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw Error(ErrorKind::schema, what + " must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

inline std::vector<std::vector<double>> number_matrix(const nlohmann::json& j, std::size_t n,
                                                      const std::string& what) {
    if (!j.is_array() || j.size() != n)
        throw Error(ErrorKind::schema, what + " must be an array of " + std::to_string(n) + " rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = number_array(j[i], what + " row " + std::to_string(i));
        if (row.size() != n)
            throw Error(ErrorKind::schema, what + " row " + std::to_string(i) + " has " +
                                               std::to_string(row.size()) + " entries, expected " +
                                               std::to_string(n));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void check_mu_matches(const nlohmann::json& j, const ReferenceSpace& ref) {
    if (!j.contains("mu")) return;
    const auto mu = number_array(j.at("mu"), "mu");
    if (mu.size() != ref.n_states()) throw Error(ErrorKind::schema, "mu length differs from n_states");
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (std::abs(mu[i] - ref.mu()[i]) > 1e-9)
            throw Error(ErrorKind::schema, "mu differs from the builtin reference measure at state " +
                                               std::to_string(i));
}

inline nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::schema, "cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace detail

inline Process process_from_json(const nlohmann::json& j) {
    const auto& n_field = detail::require_field(j, "n_states");
    if (!n_field.is_number_unsigned() || n_field.get<std::size_t>() == 0)
        throw Error(ErrorKind::schema, "n_states must be a positive integer");
    const auto n = n_field.get<std::size_t>();
    const auto& kind_field = detail::require_field(j, "kind");
    if (!kind_field.is_string()) throw Error(ErrorKind::schema, "kind must be a string");
    const auto kind = kind_field.get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (!params.is_object()) throw Error(ErrorKind::schema, "params must be an object");

    try {
        if (kind == "block_example") {
            if (n != 4) throw Error(ErrorKind::schema, "block_example has 4 states");
            const auto& p = detail::require_field(params, "p");
            if (!p.is_number()) throw Error(ErrorKind::schema, "params.p must be a number");
            auto proc = block_example(p.get<double>());
            detail::check_mu_matches(j, proc.ref());
            return proc;
        }
        if (kind == "drift_chain") {
            const double rate = params.value("poisson_rate", 1.0);
            auto proc = drift_chain_process(n, rate);
            detail::check_mu_matches(j, proc.ref());
            return proc;
        }
        if (kind == "explicit") {
            ReferenceSpace ref(detail::number_array(detail::require_field(j, "mu"), "mu"));
            if (ref.n_states() != n) throw Error(ErrorKind::schema, "mu length differs from n_states");
            const auto& steps = detail::require_field(j, "steps");
            if (!steps.is_array() || steps.empty()) throw Error(ErrorKind::schema, "steps must be a nonempty array");
            std::vector<KernelMatrix> mats;
            for (std::size_t s = 0; s < steps.size(); ++s)
                mats.push_back(KernelMatrix::from_rows(
                    detail::number_matrix(steps[s], n, "step " + std::to_string(s))));
            if (params.value("homogeneous", false)) {
                if (mats.size() != 1) throw Error(ErrorKind::schema, "homogeneous process takes exactly one step");
                return Process::homogeneous(std::move(ref), std::move(mats.front()));
            }
            const Time first = params.value("first_time", Time{0});
            auto proc = Process::from_steps(std::move(ref), std::move(mats), first);
            return proc;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema, e.what());
    }
    throw Error(ErrorKind::schema, "unknown kind \"" + kind + "\"");
}

inline nlohmann::json process_to_json(const Process& p) {
    nlohmann::json j;
    j["n_states"] = p.n_states();
    j["mu"] = p.ref().mu().weights();
    j["kind"] = p.kind();
    j["params"] = p.params();
    if (p.kind() == "explicit") {
        if (!p.last_time() && !p.is_homogeneous())
            throw Error(ErrorKind::invalid_argument, "cannot save an unbounded generated process");
        const Time first = p.first_time();
        const Time last = p.is_homogeneous() ? first : *p.last_time();
        nlohmann::json steps = nlohmann::json::array();
        for (Time k = first; k <= last; ++k) steps.push_back(p.step(k).matrix().to_rows());
        j["steps"] = std::move(steps);
        if (!p.is_homogeneous() && first != 0) j["params"]["first_time"] = first;
    }
    return j;
}

inline Process load_process(const std::string& path) { return process_from_json(detail::parse_file(path)); }

inline void save_process(const Process& p, const std::string& path) {
    detail::write_file(path, process_to_json(p));
}

} // namespace nhdmp
