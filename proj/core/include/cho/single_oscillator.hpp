#pragma once

#include <array>
#include <vector>

#include "cho/spectral.hpp"

namespace cho {

struct HoEnergy {
  Complex value;
  /// At nu = 0 the potential vanishes and the Gaussian eigenfunction
  /// degenerates; the energy 0 is still returned.
  bool free_particle = false;
};

/// Ground-state energy +-sqrt(nu^2) of p^2 + nu^2 z^2 over complex nu.
HoEnergy ho_energy(Complex nu, Sign sheet);

/// p^2 + (nu^2 + delta^2) z^2 at complex frequency nu and gap delta >= 0.
class ModifiedOscillator {
 public:
  ModifiedOscillator(double delta, Complex nu);

  double delta() const noexcept { return delta_; }
  Complex nu() const noexcept { return nu_; }

 private:
  double delta_;
  Complex nu_;
};

/// +-sqrt(nu - i delta) sqrt(nu + i delta), branch points at nu = +-i delta.
Complex modified_energy(const ModifiedOscillator& osc, Sign sheet);

/// Two-level model [[delta, nu], [nu, -delta]] sharing the modified spectrum.
struct MatrixModelEigensystem {
  /// Index 0 pairs with (delta/nu - w, 1), index 1 with (delta/nu + w, 1),
  /// where w = sqrt(1 + (delta/nu)^2). The eigenvalues are -nu w and +nu w.
  std::array<Complex, 2> eigenvalues;
  std::array<std::array<Complex, 2>, 2> eigenvectors;
  /// |<v0, v1>| / (|v0| |v1|): 0 for orthogonal eigenvectors, 1 when they coalesce.
  double coalescence_measure = 0.0;
  bool at_exceptional_point = false;
};

MatrixModelEigensystem matrix_model(Complex nu, double delta);

/// det [v1 v0] of the eigenvector matrix (tends to 2 in the diabolic limit).
Complex eigenvector_determinant(const MatrixModelEigensystem& sys);

enum class Chirality { left, right, diabolic };

std::string_view to_string(Chirality c);

/// Tag of the branch point nu = side * i delta from its limiting eigenvector
/// (x, 1): right when Im x < 0, left when Im x > 0, diabolic for delta = 0.
Chirality chirality(Sign side, double delta);

/// |nu| on the imaginary axis where the energy turns from real to imaginary,
/// located by bisection. Equals delta.
double bubble_boundary(double delta);

enum class OscillatorModel { ho, ho_mod };

struct AxisSample {
  double t = 0.0;
  Complex nu;
  std::array<Complex, 2> energy;  ///< sheets +, -
};

/// Energies on both sheets along nu = t (real axis) or nu = i t.
std::vector<AxisSample> axis_scan(OscillatorModel model, ScanAxis axis, double delta, double extent, int samples);

}  // namespace cho
