#pragma once

#include <stdexcept>
#include <string>

namespace artfima {

/// Base class for every numerical or precondition failure raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_parameter : public error {
 public:
  using error::error;
};

class pole_error : public error {
 public:
  using error::error;
};

class convergence_error : public error {
 public:
  using error::error;
};

class non_invertible : public error {
 public:
  using error::error;
};

class truncation_infeasible : public error {
 public:
  using error::error;
};

class singular_point : public error {
 public:
  using error::error;
};

class factorization_error : public error {
 public:
  using error::error;
};

class degenerate_sample : public error {
 public:
  using error::error;
};

class insufficient_replicates : public error {
 public:
  using error::error;
};

class inconsistent_scheme : public error {
 public:
  using error::error;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw invalid_parameter(what);
}
}  // namespace detail

}  // namespace artfima
