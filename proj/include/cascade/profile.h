#pragma once

#include <vector>

namespace cascade {

// Real function on [0, L]: piecewise constant (zero off the pieces) or
// sampled on a uniform grid and linearly interpolated.
class Profile {
 public:
  enum class Kind { Piecewise, Sampled };

  struct Piece {
    double x_lo, x_hi, value;
  };
  // p + q*x on [x0, x1]
  struct Linear {
    double x0, x1, p, q;
  };

  Profile() = default;
  static Profile constant(double L, double value);
  static Profile indicator(double L, double a, double b, double value);
  static Profile piecewise(double L, std::vector<Piece> pieces);
  static Profile sampled(double L, std::vector<double> values);

  double operator()(double x) const;
  double length() const { return L_; }
  Kind kind() const { return kind_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<double>& samples() const { return samples_; }

  // Interior points where the profile or its slope may jump.
  const std::vector<double>& breakpoints() const { return breaks_; }
  // Maximal runs on which the profile is affine; covers [0, L].
  const std::vector<Linear>& linear_runs() const { return runs_; }

  Profile scaled(double factor) const;

 private:
  void finish();

  Kind kind_ = Kind::Piecewise;
  double L_ = 1.0;
  std::vector<Piece> pieces_;
  std::vector<double> samples_;
  std::vector<double> breaks_;
  std::vector<Linear> runs_;
};

}  // namespace cascade
