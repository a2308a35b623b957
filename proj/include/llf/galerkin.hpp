#pragma once

#include <array>
#include <functional>
#include <vector>

#include "llf/field.hpp"
#include "llf/linearized.hpp"

namespace llf {

/// One Neumann eigenmode of Lap - I on a box: (Lap - I) g = -lambda g with
/// lambda = 1 + sum_a (k_a pi / L_a)^2 and g a normalized tensor cosine.
struct EigenMode {
    std::array<int, 3> index{0, 0, 0};
    double lambda = 1.0;
    double kappa_sq = 0.0;  // lambda - 1, the -Lap eigenvalue
    ScalarField g;
    std::vector<ScalarField> dg;  // per-axis analytic derivative
};

/// The first n eigenpairs, sorted by ascending eigenvalue (ties broken by
/// index tuple). Orthonormal under the trapezoidal inner product.
class EigenBasis {
public:
    static EigenBasis build(const Grid& grid, int n);

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(modes_.size()); }
    const EigenMode& mode(int i) const { return modes_[i]; }
    double lambda_max() const { return modes_.back().lambda; }

private:
    explicit EigenBasis(const Grid& g) : grid_(g) {}
    Grid grid_;
    std::vector<EigenMode> modes_;
};

EigenBasis build_basis(const Grid& grid, int n);

/// Coefficients of a field in span{g_1..g_n}, one 3-vector per mode.
struct GalerkinState {
    int n = 0;
    std::vector<double> coeffs;  // 3 per mode

    double& at(int mode, int comp) { return coeffs[3 * mode + comp]; }
    double at(int mode, int comp) const { return coeffs[3 * mode + comp]; }

    Vec3Field synthesize(const EigenBasis& basis) const;
    double l2_norm() const;                    // Parseval: equals nodal L2 norm
    double grad_sq_spectral(const EigenBasis& basis) const;  // sum kappa^2 |c|^2
};

/// L2-orthogonal projection P_n f.
GalerkinState project_Pn(const Vec3Field& f, const EigenBasis& basis, int n);

struct PnAuditReport {
    int n = 0;
    int trials = 0;
    double max_ratio_w1 = 0.0;  // spectral W12 ratio; <= 1 up to rounding
    double max_ratio_w2 = 0.0;  // equivalent-norm W22 ratio, finite C
    double max_ratio_w3 = 0.0;
};

/// Measures ||P_n f||_k / ||f||_k over random Neumann-compatible fields.
/// The W^{1,2} ratio uses the spectral norm (exact multiplier argument); the
/// W^{2,2}/W^{3,2} ratios use the stencil equivalent norm and report the
/// observed constant.
PnAuditReport pn_bound_audit(const EigenBasis& basis, int n, int trials, std::uint64_t seed);

/// Frozen-time data of the linear parabolic problem
///   d_t h + <d_t u, h> u = (eps I + u x)(Lap h + f1#dh + f2#h) + f3
/// with the contractions fixed to f1#dh = sum_a <f1_a, d_a h> u and
/// f2#h = <f2_vec, h> u + f2_scal h.
struct GalerkinRhsData {
    SphereField u;
    Vec3Field dtu;
    std::vector<Vec3Field> f1;  // per axis; empty = zero
    Vec3Field f2_vec;
    ScalarField f2_scal;
    Vec3Field f3;
    bool homogeneous = true;  // all f slots zero (fast path)
};

using GalerkinDataFn = std::function<GalerkinRhsData(double t)>;

/// Constant background with all coefficient slots zero.
GalerkinDataFn galerkin_data_free(const SphereField& u_const);

/// The omega-equation coefficients along a flow background: f1_a = 2 d_a u,
/// f2 = <Lap u, .> u + |grad u|^2 I, f3 = (eps I + u x) R_k, d_t u = v_1.
GalerkinDataFn galerkin_data_from_background(const Background& bg, int k, double epsilon);

struct GalerkinConfig {
    double epsilon = 0.1;  // in (0,1)
    double dt = 1e-4;
    double t_end = 0.1;
    int record_every = 1;
};

/// RK4 stability rail of the n-mode system: dt <= 2.5 / ((1 + eps) lambda_n).
double galerkin_stability_bound(const EigenBasis& basis, int n, double epsilon);

struct GalerkinSolution {
    std::vector<double> times;
    std::vector<GalerkinState> states;

    std::string to_csv(const EigenBasis& basis) const;
};

/// Integrates the n x 3 Galerkin ODE system by RK4: Lap acts diagonally on
/// coefficients, products are formed nodally and projected back.
GalerkinSolution solve_galerkin(const Vec3Field& h0, const EigenBasis& basis, int n,
                                const GalerkinDataFn& data, const GalerkinConfig& cfg);

/// Reports the smallest C(t) making the discrete energy inequality
/// d/dt 1/2||h||^2 <= -(eps/2)||grad h||^2 + C(t)(||h||^2 + ||f3||^2) hold
/// along the run; finite by construction on nonempty runs.
double galerkin_energy_monitor(const GalerkinSolution& sol, const EigenBasis& basis,
                               double epsilon, const GalerkinDataFn& data);

}  // namespace llf
