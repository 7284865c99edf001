#pragma once

#include <stdexcept>
#include <string>

namespace vlmc {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad model file, bad symbols, bad arguments.
class input_error : public error {
 public:
  using error::error;
};

class invalid_tree : public input_error {
 public:
  using input_error::input_error;
};

class invalid_model : public input_error {
 public:
  using input_error::input_error;
};

class unknown_symbol : public input_error {
 public:
  using input_error::input_error;
};

class data_too_short : public input_error {
 public:
  using input_error::input_error;
};

class not_normalized : public input_error {
 public:
  using input_error::input_error;
};

class bad_refinement : public input_error {
 public:
  using input_error::input_error;
};

/// No suffix of the history is a context of the tree.
class no_context : public error {
 public:
  using error::error;
};

/// Query for a string that never occurred in the sample (N_n(w) = 0).
class unseen_context : public error {
 public:
  using error::error;
};

class not_ergodic : public error {
 public:
  using error::error;
};

/// Brute-force enumeration refused because the search space is too big.
class too_large : public error {
 public:
  using error::error;
};

}  // namespace vlmc
