"""Step kernel calculus: convolution, cut geometry, and the rate function."""
import math

import numpy as np

from cochainlab import (
    Group,
    SymmetricDistribution,
    b_functional,
    convolve,
    cut_distance_bounds,
    cut_norm,
    dual_maximize,
    dual_rate,
    entropy,
    kernel_difference,
    mgf_finite_n,
    mgf_limit,
    random_test_function,
    random_w00,
    rate_function,
    uniform_kernel,
)

group = Group((3,))
nu = SymmetricDistribution.uniform(group)
rng = np.random.default_rng(5)

W = random_w00(group, 4, rng, floor=0.1)
U = uniform_kernel(group, 4)

print(f"random probability kernel over {group}, 4 parts")
print(f"  rate I(W)        = {rate_function(W, nu):.6f}")
print(f"  entropy H(W)     = {entropy(W):.6f}")
print(f"  b(W) + H(W)      = {b_functional(W) + entropy(W):.6f}  (<= 0 always)")
print(f"  b(U) + H(U)      = {b_functional(U) + entropy(U):.2e}  (= 0 at uniform)")

# convolution stays in the probability-kernel set
C = convolve(W)
print(f"\nself-convolution slice sums: "
      f"{np.unique(C.float_values().sum(axis=2).round(12))}")

lo, hi = cut_distance_bounds(W, U, rng)
print(f"cut distance to uniform: in [{lo:.6f}, {hi:.6f}]")
print(f"plain cut norm of difference: {cut_norm(kernel_difference(W, U)):.6f}")

# Legendre duality: the explicit maximizer attains the rate
phi_star, val = dual_maximize(W, nu)
print(f"\ndual value at phi*  = {val:.12f}")
print(f"rate function       = {rate_function(W, nu):.12f}")
phi = random_test_function(group, 4, rng)
print(f"random phi bracket  = {dual_rate(phi, W, nu):.6f}  (weak duality: below the rate)")

# the normalized exponential moment converges to its integral limit
phi = random_test_function(group, 3, np.random.default_rng(8))
lim = mgf_limit(phi, nu)
print(f"\nlimit moment {lim:.8f}; finite-n gaps:")
for n in (4, 8, 16, 32, 64):
    print(f"  n={n:3d}: {abs(mgf_finite_n(phi, n, nu) - lim):.8f}")
