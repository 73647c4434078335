#pragma once

#include <span>
#include <string>
#include <vector>

#include "chart.hpp"
#include "rng.hpp"

namespace slantgeo {

// Partition of parameter indices into the invariant block and the two slant
// blocks; any block may be empty. The coordinate tangent vectors of a block
// span that distribution at each point.
struct DistributionAssignment {
    std::vector<int> invariant;  // D
    std::vector<int> slant1;     // D1
    std::vector<int> slant2;     // D2
};

Subspace block_span(const PointChart& chart, std::span<const int> block, double rank_tol = 1e-9);

// Lift block-local coefficients to a full coefficient vector over the frame.
std::vector<double> block_coefficients(std::span<const int> block, std::span<const double> local,
                                       int m);

// Angle between J(probe) and the block's span; probe given by block-local
// coefficients and must be nonzero.
double distribution_slant_angle(const PointChart& chart, std::span<const int> block,
                                std::span<const double> local_probe, double rank_tol = 1e-9);

// Angle between J(v) and the whole tangent space.
double wirtinger_angle(const PointChart& chart, const Vec& v);

// Maximal J-invariant subspace of the tangent space, T ∩ J(T).
Subspace auto_invariant_block(const PointChart& chart, double sv_tol = 1e-9);

struct ProjectionTriple {
    Vec p, q, r;       // ambient components along D, D1, D2
    double residual;   // |v - p - q - r|; zero only when the blocks are orthogonal
};

ProjectionTriple project_PQR(const PointChart& chart, const DistributionAssignment& asg,
                             const Vec& v, double rank_tol = 1e-9);

struct BlockStats {
    bool empty = true;
    double mean_angle = 0.0;
    double max_dev = 0.0;
    double min_angle = 0.0;
    double max_angle = 0.0;
    int samples = 0;
    std::string classification = "empty";
};

struct CrossTerm {
    std::string row, col;  // parameter names
    double value = 0.0;    // signed Gram entry at the worst sample point
};

// Distribution-structure verification: (a) orthogonal decomposition,
// (b) invariance of D, (c) J(D1) ⊥ D2 one-sided plus the mirrored form,
// (d)/(e) angle constancy per slant block over a random probe grid.
struct StructureReport {
    double ortho_max_abs = 0.0;
    double ortho_max_rel = 0.0;
    std::vector<CrossTerm> cross_terms;
    bool a_pass = true;

    double d_omega_max = 0.0;
    double d_angle_max = 0.0;
    bool b_pass = true;

    double c_one_sided = 0.0;
    double c_one_sided_rel = 0.0;
    double c_mirrored = 0.0;
    double c_mirrored_rel = 0.0;
    bool c_pass = true;

    BlockStats invariant_block, slant1, slant2;
    bool d_pass = true;
    bool e_pass = true;

    double pqr_max_residual = 0.0;

    bool all_pass() const { return a_pass && b_pass && c_pass && d_pass && e_pass; }
};

StructureReport verify_distribution_structure(const ImmersionSpec& spec,
                                              const DistributionAssignment& asg,
                                              const std::vector<PointChart>& charts,
                                              double angle_tol, double ortho_tol,
                                              int probes_per_block, const Rng& rng,
                                              double rank_tol = 1e-9);

// Residuals of the constant-angle block identities:
//   r1 = max |phi_blk^2 X + cos^2(theta) X|
//   r2 = max |<phi_blk X, phi_blk Y> - cos^2(theta) <X,Y>|
//   r3 = max |<omega X, omega Y> - sin^2(theta) <X,Y>|
// phi_blk projects J back onto the block; omega is the full normal part.
struct BlockIdentityResiduals {
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    int pairs = 0;
};

BlockIdentityResiduals check_block_identities(const PointChart& chart, std::span<const int> block,
                                              double theta,
                                              std::span<const std::vector<double>> local_probes,
                                              double rank_tol = 1e-9);

// Normal-bundle decomposition omega(D1) ⊕ omega(D2) ⊕ mu with mu the
// orthogonal complement inside the normal space; the residual measures how
// far J fails to preserve mu.
struct NormalDecomposition {
    Subspace omega_d1, omega_d2, mu;
    double mu_invariance_residual = 0.0;
};

NormalDecomposition normal_decomposition(const PointChart& chart,
                                         const DistributionAssignment& asg,
                                         double rank_tol = 1e-9);

}  // namespace slantgeo
