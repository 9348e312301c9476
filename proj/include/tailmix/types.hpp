#ifndef TAILMIX_TYPES_HPP
#define TAILMIX_TYPES_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tailmix {

/// Degrees of freedom of a Student-t law. The Gaussian limit is carried as a
/// distinguished infinite state so that Gaussian code paths use exact normal
/// formulas instead of a large-nu approximation.
class Dof {
 public:
  explicit Dof(double nu) : nu_(nu) {
    if (!(nu > 0.0)) throw std::domain_error("Dof: nu must be > 0, got " + std::to_string(nu));
  }

  static Dof infinite() { return Dof(infinite_tag{}); }

  bool is_infinite() const { return std::isinf(nu_); }

  /// Finite value; throws if this is the infinite (Gaussian) state.
  double value() const {
    if (is_infinite()) throw std::logic_error("Dof::value() called on infinite dof");
    return nu_;
  }

  friend bool operator==(const Dof& a, const Dof& b) { return a.nu_ == b.nu_; }
  friend bool operator<(const Dof& a, const Dof& b) { return a.nu_ < b.nu_; }
  friend bool operator>(const Dof& a, const Dof& b) { return b < a; }
  friend bool operator<=(const Dof& a, const Dof& b) { return !(b < a); }
  friend bool operator>=(const Dof& a, const Dof& b) { return !(a < b); }

 private:
  struct infinite_tag {};
  explicit Dof(infinite_tag) : nu_(std::numeric_limits<double>::infinity()) {}
  double nu_;
};

/// Conditional elliptical family: Gaussian, or Student-t with finite dof.
class CopulaFamily {
 public:
  static CopulaFamily gaussian() { return CopulaFamily(Dof::infinite()); }

  static CopulaFamily student_t(Dof nu) {
    if (nu.is_infinite()) throw std::domain_error("CopulaFamily::student_t requires finite nu");
    return CopulaFamily(nu);
  }

  static CopulaFamily student_t(double nu) { return student_t(Dof(nu)); }

  /// Gaussian when nu is infinite, Student-t otherwise.
  static CopulaFamily from_dof(Dof nu) { return CopulaFamily(nu); }

  bool is_gaussian() const { return nu_.is_infinite(); }
  const Dof& dof() const { return nu_; }

  std::string name() const {
    if (is_gaussian()) return "gauss";
    return "t:" + std::to_string(nu_.value());
  }

 private:
  explicit CopulaFamily(Dof nu) : nu_(nu) {}
  Dof nu_;
};

}  // namespace tailmix

#endif  // TAILMIX_TYPES_HPP
