#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

// Raised when a requested structure would not fit in memory or machine integers.
class size_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Raised on invalid builder / operation parameters.
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a randomized generator exhausts its retry budget.
class generation_error : public std::runtime_error {
 public:
  generation_error(const std::string& what, int best_girth)
      : std::runtime_error(what), best_girth_(best_girth) {}

  int best_girth() const noexcept { return best_girth_; }

 private:
  int best_girth_;
};

// Raised on mismatched vector / matrix dimensions.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace spectra
