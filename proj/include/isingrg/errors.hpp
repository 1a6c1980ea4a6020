#pragma once

#include <stdexcept>

namespace isingrg {

// Requested regime exists physically but the closed forms implemented here
// do not cover it (field terms in the entropy-like observables).
class unsupported_regime : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// State space or work volume beyond the desk-scale caps.
class resource_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A numeric routine (eigensolve, internal bound check) failed.
class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace isingrg
