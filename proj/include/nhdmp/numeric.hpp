#pragma once

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nhdmp {

enum class ErrorKind {
    invalid_argument,    // precondition on a parameter
    dimension_mismatch,  // vectors/matrices over different state spaces
    non_stochastic,      // row sum differs from 1 or negative entry
    measurability,       // mass leaves supp(mu) from a supported row
    not_in_m,            // measure not absolutely continuous w.r.t. mu
    step_unavailable,    // kernel step outside the process range
    schema,              // malformed input file
    asymmetric_tensor,   // QSP fiber Q(x,y,.) != Q(y,x,.)
    unsupported,         // feature reserved but not implemented (type B)
    not_dominating,      // certificate does not minorize the pushforward
    numerical            // internal numerical failure
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::non_stochastic: return "non-stochastic row";
    case ErrorKind::measurability: return "mu-measurability";
    case ErrorKind::not_in_m: return "measure not absolutely continuous";
    case ErrorKind::step_unavailable: return "step unavailable";
    case ErrorKind::schema: return "schema violation";
    case ErrorKind::asymmetric_tensor: return "asymmetric tensor";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::not_dominating: return "certificate not dominating";
    case ErrorKind::numerical: return "numerical failure";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Global numeric policy. One tolerance governs "sums to 1", "equal masses"
// and componentwise domination checks.
namespace detail {
inline std::atomic<double>& tolerance_slot() {
    static std::atomic<double> value{1e-12};
    return value;
}
} // namespace detail

inline double tolerance() { return detail::tolerance_slot().load(std::memory_order_relaxed); }

inline void set_tolerance(double tol) {
    if (!(tol > 0.0) || tol >= 1e-2)
        throw Error(ErrorKind::invalid_argument, "tolerance must lie in (0, 1e-2)");
    detail::tolerance_slot().store(tol, std::memory_order_relaxed);
}

inline constexpr const char* kToleranceEnv = "NHDMP_TOLERANCE";

// Reads NHDMP_TOLERANCE if set. Returns false when the variable is present but malformed.
inline bool apply_tolerance_from_env() {
    const char* raw = std::getenv(kToleranceEnv);
    if (raw == nullptr) return true;
    char* end = nullptr;
    const double value = std::strtod(raw, &end);
    if (end == raw || *end != '\0') return false;
    try {
        set_tolerance(value);
    } catch (const Error&) {
        return false;
    }
    return true;
}

} // namespace nhdmp
