#pragma once
#include <cstdint>

#include "field.hpp"

namespace kgsq {

// Spectral multiplier |k|^s. The k = 0 coefficient is zeroed for s != 0;
// negative s demands a mean-free input (domain_error otherwise).
SpectralField fractional_laplacian(const SpectralField& f, double s);
void fractional_laplacian_inplace(SpectralField& f, double s);

// i*k_axis multiplier, Nyquist row/column zeroed (no signed partner there).
SpectralField derivative(const SpectralField& f, int axis);

// grad^perp f = (-d2 f, d1 f)
VectorField perp_gradient(const SpectralField& f);

// u = -grad^perp Lambda^(beta-2) f  (divergence-free by construction)
VectorField velocity_from_scalar(const SpectralField& f, double beta);

// homogeneous Sobolev seminorm: (L^2 sum_{k!=0} |k|^{2s} |c_k|^2)^{1/2};
// normalized so a*cos(k.x) has norm a |k|^s (L^2/2)^{1/2}
double sobolev_norm(const SpectralField& f, double s);

// L^q norm by collocation quadrature; q = 0 means L^infinity (grid max)
double lebesgue_norm(const SpectralField& f, double q);
double lebesgue_norm(const RealField& f, double q);

// L^2(T^2) inner product, mean included
double l2_inner(const SpectralField& f, const SpectralField& g);

double max_speed(const RealField& ux, const RealField& uy);

// c = a*b pointwise on the grid
void pointwise_product(const RealField& a, const RealField& b, RealField& out);

// Band-limited Gaussian field with |c_k| ~ |k|^slope on kmin <= |k| <= kmax,
// normalized to the requested L^2 norm, mean-free, Hermitian.
SpectralField random_bandlimited(const Grid& g, std::uint64_t seed, double kmin,
                                 double kmax, double slope, double l2_norm);

// Mollified indicator of a disk (tanh edge profile), mean removed.
SpectralField vortex_patch(const Grid& g, double cx, double cy, double radius,
                           double width, double amplitude);

// Opposite-sign patch pair separated along x.
SpectralField dipole(const Grid& g, double cx, double cy, double radius,
                     double width, double separation, double amplitude);

} // namespace kgsq
