#include "cascade/profile.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cascade/errors.h"

namespace cascade {

Profile Profile::constant(double L, double value) { return piecewise(L, {{0.0, L, value}}); }

Profile Profile::indicator(double L, double a, double b, double value) {
  return piecewise(L, {{a, b, value}});
}

Profile Profile::piecewise(double L, std::vector<Piece> pieces) {
  if (!(L > 0)) throw ValidationError("profile length must be positive");
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.x_lo >= 0 && p.x_hi <= L * (1 + 1e-14) && p.x_lo < p.x_hi))
      throw ValidationError("piece " + std::to_string(i) + " not contained in [0, L]");
    if (i > 0 && p.x_lo < pieces[i - 1].x_hi)
      throw ValidationError("pieces overlap or are unsorted at index " + std::to_string(i));
    if (!std::isfinite(p.value)) throw ValidationError("non-finite piece value");
  }
  Profile r;
  r.kind_ = Kind::Piecewise;
  r.L_ = L;
  r.pieces_ = std::move(pieces);
  r.finish();
  return r;
}

Profile Profile::sampled(double L, std::vector<double> values) {
  if (!(L > 0)) throw ValidationError("profile length must be positive");
  if (values.size() < 64) throw ValidationError("sampled profile needs at least 64 grid points");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("non-finite sample");
  Profile r;
  r.kind_ = Kind::Sampled;
  r.L_ = L;
  r.samples_ = std::move(values);
  r.finish();
  return r;
}

double Profile::operator()(double x) const {
  if (kind_ == Kind::Piecewise) {
    for (const auto& p : pieces_)
      if (x >= p.x_lo && x <= p.x_hi) return p.value;
    return 0.0;
  }
  const int n = static_cast<int>(samples_.size()) - 1;
  double t = std::clamp(x / L_, 0.0, 1.0) * n;
  int i = std::min(static_cast<int>(t), n - 1);
  double u = t - i;
  return (1 - u) * samples_[i] + u * samples_[i + 1];
}

Profile Profile::scaled(double factor) const {
  Profile r = *this;
  for (auto& p : r.pieces_) p.value *= factor;
  for (auto& v : r.samples_) v *= factor;
  r.finish();
  return r;
}

void Profile::finish() {
  breaks_.clear();
  runs_.clear();
  if (kind_ == Kind::Piecewise) {
    double x = 0.0;
    for (const auto& p : pieces_) {
      if (p.x_lo > x) runs_.push_back({x, p.x_lo, 0.0, 0.0});
      runs_.push_back({p.x_lo, p.x_hi, p.value, 0.0});
      x = p.x_hi;
    }
    if (x < L_) runs_.push_back({x, L_, 0.0, 0.0});
  } else {
    const int n = static_cast<int>(samples_.size()) - 1;
    const double h = L_ / n;
    for (int i = 0; i < n; ++i) {
      double q = (samples_[i + 1] - samples_[i]) / h;
      double x0 = i * h, x1 = (i + 1) * h;
      double p = samples_[i] - q * x0;
      if (!runs_.empty()) {
        auto& last = runs_.back();
        double scale = std::max({1.0, std::abs(last.q), std::abs(q)});
        if (std::abs(last.q - q) <= 1e-12 * scale && std::abs(last.p - p) <= 1e-12 * std::max(1.0, std::abs(p))) {
          last.x1 = x1;
          continue;
        }
      }
      runs_.push_back({x0, x1, p, q});
    }
  }
  // merge adjacent runs with identical affine data
  std::vector<Linear> merged;
  for (const auto& r : runs_) {
    if (!merged.empty() && merged.back().p == r.p && merged.back().q == r.q) {
      merged.back().x1 = r.x1;
    } else {
      merged.push_back(r);
    }
  }
  runs_.swap(merged);
  for (size_t i = 1; i < runs_.size(); ++i) breaks_.push_back(runs_[i].x0);
}

}  // namespace cascade
