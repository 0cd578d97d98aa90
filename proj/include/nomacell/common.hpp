#pragma once

#include <stdexcept>
#include <string>

namespace nomacell {

enum class UserClass { cc, ce };
enum class Scheme { noma, oma };

inline const char* to_string(UserClass c) { return c == UserClass::cc ? "cc" : "ce"; }
inline const char* to_string(Scheme s) { return s == Scheme::noma ? "noma" : "oma"; }

// Quadrature failed to reach the requested tolerance within the subdivision budget.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A NOMA/OMA allocation outside its feasible interval (e.g. theta >= 1/(1+beta_e)).
struct InfeasibleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Load pmf tail mass at n_max above the certified bound; caller must raise n_max.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nomacell
