#pragma once

#include <vector>

namespace qsync {

/// Physical constants of one electro-optomechanical node, in units of the
/// first oscillator's frequency. Defaults are the point-to-point parameter set.
struct NodeParams {
  double omega_m = 1.0;  ///< mechanical frequency
  double delta = 1.0;    ///< cavity detuning
  double g = 0.005;      ///< optomechanical coupling
  double kappa = 0.15;   ///< optical damping
  double gamma = 0.005;  ///< mechanical damping
  double drive = 10.0;   ///< optical drive amplitude E
  double n_bath = 0.0;   ///< mean thermal phonon number of the mechanical bath
  double eta = 0.01;     ///< circuit voltage to frequency-modulation factor

  void validate() const;
};

/// Dimensionless Duffing circuit constants shared by all nodes.
struct CircuitParams {
  double epsilon = 0.18;  ///< damping
  double nu = 1.0;        ///< cubic stiffness
  double drive = 26.7;    ///< drive amplitude
  double omega0 = 0.8;    ///< drive frequency

  void validate() const;
};

using NodeList = std::vector<NodeParams>;

}  // namespace qsync
