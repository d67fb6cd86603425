#pragma once

#include <stdexcept>
#include <string>

namespace tdiv {

// usage/io/spec/domain/estimation are input-validity failures (process exit 2);
// numerical marks a computation that could not produce a finite result (exit 3)
enum class error_kind { usage, io, spec, domain, estimation, numerical };

class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    error_kind kind() const { return kind_; }

private:
    error_kind kind_;
};

inline int exit_code(error_kind k) {
    return k == error_kind::numerical ? 3 : 2;
}

inline const char* to_string(error_kind k) {
    switch (k) {
    case error_kind::usage: return "usage";
    case error_kind::io: return "io";
    case error_kind::spec: return "spec";
    case error_kind::domain: return "domain";
    case error_kind::estimation: return "estimation";
    case error_kind::numerical: return "numerical";
    }
    return "unknown";
}

} // namespace tdiv
