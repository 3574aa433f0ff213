#pragma once

#include <cstddef>
#include <vector>

#include "elastocap/energy.hpp"
#include "elastocap/solver.hpp"

namespace elastocap {

// Recovery sequence for a limit candidate: smoothed, length-restored
// approximants re-indexed by the thinning rule so the bending term
// h^(2-alpha) * integral kappa^2 stays below 1/sigma.
struct RecoverySequence {
    Configuration target;
    double limit_energy = 0.0;
    std::vector<double> h_values;
    std::vector<Configuration> members;
    std::vector<int> sigma;
    std::vector<double> energies_h;         // E_h of each member at its h
    std::vector<double> sup_distances;      // parameter-matched |member - target|
    std::vector<double> bending_integrals;  // integral of kappa^2 per member
    std::vector<bool> sigma_rule_ok;        // h^(2-alpha) * bending <= 1/sigma
};

struct RecoveryOptions {
    std::size_t iso_pieces = 128;
    std::size_t iso_samples_per_piece = 12;
    bool check_embedding = false;  // expensive; enabled in dedicated tests
};

// Throws when the target violates the unit-ball speed constraint (its limit
// energy is the infinite branch; no recovery sequence exists).
RecoverySequence recovery_sequence(const Configuration& target, const std::vector<double>& h_seq,
                                   double alpha, double eps_exp, const LimitConstants& lim,
                                   const RecoveryOptions& opts = {});

// Pairings of a fixed battery of test functions (polynomials up to degree 3
// and low-frequency sinusoids) against member'-target': the weak-convergence
// surrogate. Returns the max absolute pairing across the battery and both
// components.
double weak_pairing_gap(const Configuration& member, const Configuration& target);

struct ConvergenceEntry {
    double h = 0.0;
    double sup_distance = 0.0;  // minimizer nodes to the limit curve
    double energy_gap = 0.0;    // E_h(minimizer) - E(limit solution)
    double sup_strain = 0.0;
    double lambda_est = 0.0;  // from the dry strain; NaN when no dry part
    bool converged = false;
};

struct ConvergenceReport {
    std::vector<ConvergenceEntry> entries;
    double fitted_rate = 0.0;         // slope of log distance vs log h
    bool distances_decreasing = false;  // allowing one non-monotone step
    bool all_converged = false;
};

// For each h: minimize E_h from the limit-solution initial guess and compare
// against the limit solution.
ConvergenceReport gamma_convergence_experiment(const LimitConstants& lim, Vec2 anchor,
                                               const std::vector<double>& h_seq, double alpha,
                                               double eps_exp, std::size_t n_nodes = 400,
                                               const MinimizeOptions& mopts = {});

}  // namespace elastocap
