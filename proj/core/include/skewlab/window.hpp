#pragma once

namespace skewlab::dist {

/// Minorant g and majorant h of the indicator of [-1,1] whose Fourier
/// transforms are continuous with compact support, so that
///
///   E[g(Y)] <= P[Y in [-1,1]] <= E[h(Y)],   E[f(Y)] = int f^(t) phi_Y(t) dt
///
/// with the transform convention f(y) = int f^(t) exp(ity) dt.
///
/// Default pair, with u(y) = sin(4y)/(2y) (the transform of chi_[-4,4], over 4):
///   g = (u^4 - u^2) / 12,      g^(t) = (2 B4(t/8) - B2(t/8)/2) / 12,  supp [-16,16]
///   h = (2 sin(y)/y)^2,        h^(t) = max(0, 2 - |t|),              supp [-2,2]
/// where B2, B4 are the centred linear and cubic cardinal B-splines.
class WindowPair {
 public:
  static WindowPair fejer_default();

  double lower(double y) const;             // g
  double upper(double y) const;             // h
  double lower_transform(double t) const;   // g^
  double upper_transform(double t) const;   // h^
  double lower_support() const { return 16.0; }
  double upper_support() const { return 2.0; }
  /// Delta: both transforms vanish outside [-Delta, Delta].
  double support() const { return 16.0; }

  /// g <= chi_[-1,1] <= h on an evenly spaced grid over [-10,10], and g^(0) > 0.
  bool sandwich_holds(int grid_points = 10'000) const;

 private:
  WindowPair() = default;
};

}  // namespace skewlab::dist
