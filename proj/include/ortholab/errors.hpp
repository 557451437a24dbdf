#ifndef ORTHOLAB_ERRORS_HPP_
#define ORTHOLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ortholab {

/// A numerical procedure did not reach its tolerance. Carries the last two
/// estimates so the caller can judge how far off it was.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}
  explicit NumericalFailure(const std::string& what)
      : std::runtime_error(what), last_(0.0), previous_(0.0) {}

  double last_estimate() const { return last_; }
  double previous_estimate() const { return previous_; }

 private:
  double last_;
  double previous_;
};

}  // namespace ortholab

#endif  // ORTHOLAB_ERRORS_HPP_
