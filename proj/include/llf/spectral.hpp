#pragma once

#include <vector>

#include "llf/field.hpp"

namespace llf {

/// Coefficients of a Vec3Field in the tensor-product cosine basis attached to
/// a neumann_mirror grid. Mode index k along an axis with N nodes and extent L
/// is the eigenfunction nf(k)*cos(k pi x / L); the basis is orthonormal under
/// the trapezoidal inner product, so Parseval holds exactly.
class SpectralRep {
public:
    explicit SpectralRep(const Grid& g) : grid_(g), coeffs_(3 * g.node_count(), 0.0) {}

    const Grid& grid() const { return grid_; }
    double& at(std::int64_t mode, int comp) { return coeffs_[3 * mode + comp]; }
    double at(std::int64_t mode, int comp) const { return coeffs_[3 * mode + comp]; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }

    /// l2 norm of the coefficient vector (equals the nodal L2 norm).
    double coeff_norm() const;

private:
    Grid grid_;
    std::vector<double> coeffs_;
};

/// Analysis: coefficients of f in the cosine basis. Exact on band-limited
/// fields. Rejects periodic grids (different basis).
SpectralRep cosine_forward(const Vec3Field& f);

/// Synthesis: nodal field from cosine coefficients.
Vec3Field cosine_inverse(const SpectralRep& rep);

/// -kappa^2 of a mode (continuous Laplacian eigenvalue), kappa^2 = sum over
/// axes of (k_a pi / L_a)^2.
double mode_kappa_sq(const Grid& g, std::int64_t mode);

/// Spectrally differentiated Laplacian: forward, multiply modes by -kappa^2,
/// inverse. Exact on band-limited Neumann-compatible fields.
Vec3Field spectral_laplacian(const Vec3Field& f);

/// Second derivative of a 1D periodic field by Fourier differentiation on the
/// unique nodes (the duplicated endpoint is kept consistent).
Vec3Field periodic_second_derivative(const Vec3Field& f);

}  // namespace llf
