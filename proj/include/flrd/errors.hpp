#pragma once

#include <stdexcept>
#include <string>

namespace flrd {

// Error buckets; values double as CLI process exit codes.
enum class errc : int {
    config = 2,     // bad input: parameters, files, flags
    domain = 3,     // request outside the mathematical domain (e.g. no wave exists)
    numerical = 4,  // solver failed to deliver the contracted accuracy
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

struct config_error : error {
    explicit config_error(const std::string& w) : error(errc::config, w) {}
};

struct domain_error : error {
    explicit domain_error(const std::string& w) : error(errc::domain, w) {}
};

struct numerical_error : error {
    explicit numerical_error(const std::string& w) : error(errc::numerical, w) {}
};

// specific conditions, grouped by bucket

struct invalid_reaction : config_error {
    explicit invalid_reaction(const std::string& w) : config_error(w) {}
};

struct no_admissible_jump : domain_error {
    explicit no_admissible_jump(const std::string& w) : domain_error(w) {}
};

struct speed_below_entropic : domain_error {
    explicit speed_below_entropic(const std::string& w) : domain_error(w) {}
};

struct degenerate_jump : domain_error {
    explicit degenerate_jump(const std::string& w) : domain_error(w) {}
};

struct invalid_bracket : numerical_error {
    explicit invalid_bracket(const std::string& w) : numerical_error(w) {}
};

struct non_convergence : numerical_error {
    explicit non_convergence(const std::string& w) : numerical_error(w) {}
};

struct non_finite : numerical_error {
    explicit non_finite(const std::string& w) : numerical_error(w) {}
};

struct quadrature_failure : numerical_error {
    explicit quadrature_failure(const std::string& w) : numerical_error(w) {}
};

struct fit_unstable : numerical_error {
    explicit fit_unstable(const std::string& w) : numerical_error(w) {}
};

struct cfl_violation : numerical_error {
    explicit cfl_violation(const std::string& w) : numerical_error(w) {}
};

}  // namespace flrd
