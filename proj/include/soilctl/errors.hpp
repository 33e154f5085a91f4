#pragma once

#include <stdexcept>
#include <string>

namespace soilctl {

enum class errc {
    invalid_input,
    singular_capacity,
    numerical_blowup,
    factorization_undefined,
    undefined_weight,
    not_stabilizable,
    no_convergence,
    integration_failure,
    inadmissible_state,
    bad_config,
};

inline const char* to_string(errc e) {
    switch (e) {
        case errc::invalid_input:           return "invalid_input";
        case errc::singular_capacity:       return "singular_capacity";
        case errc::numerical_blowup:        return "numerical_blowup";
        case errc::factorization_undefined: return "factorization_undefined";
        case errc::undefined_weight:        return "undefined_weight";
        case errc::not_stabilizable:        return "not_stabilizable";
        case errc::no_convergence:          return "no_convergence";
        case errc::integration_failure:     return "integration_failure";
        case errc::inadmissible_state:      return "inadmissible_state";
        case errc::bad_config:              return "bad_config";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    errc kind() const noexcept { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void throw_error(errc kind, const std::string& what) {
    throw error(kind, what);
}

} // namespace soilctl
