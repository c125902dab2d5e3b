"""
Convex generators and the divergences they induce
==================================================

A strictly convex differentiable function F induces the divergence

    D(y, x) = F(y) - F(x) - <grad F(x), y - x>,

which behaves like a squared distance: nonnegative, zero exactly when the
arguments coincide, but in general *asymmetric*.  This script builds the four
built-in generator families, evaluates their divergences, and shows two
structural facts: the generalized three-point expansion (the divergence
analogue of the law of cosines) and the exact swap symmetry between a
divergence and the divergence of its convex conjugate.
"""

import numpy as np

from bregman_bv import (
    Mahalanobis,
    NegativeEntropySimplex,
    SeparableCustom,
    SquaredEuclidean,
    divergence,
    dual_divergence,
    triangle_expansion,
)

print(__doc__)

# ----------------------------------------------------------------------------
# The four built-in families
# ----------------------------------------------------------------------------

euclid = SquaredEuclidean(2)
mahal = Mahalanobis([[2.0, 0.0], [0.0, 1.0]])
entropy = NegativeEntropySimplex(2)
custom = SeparableCustom([
    (lambda t: -np.log(1.0 - t**2), lambda t: 2.0 * t / (1.0 - t**2), -1.0, 1.0),
    (lambda t: -np.log(1.0 - t**4), lambda t: 4.0 * t**3 / (1.0 - t**4), -1.0, 1.0),
])

print("squared Euclidean:  D((1,0), (0,0))      =", divergence(euclid, [1, 0], [0, 0]))
print("Mahalanobis A=diag(2,1):  D((1,1),(0,0)) =", divergence(mahal, [1, 1], [0, 0]))
print("KL on the simplex:  D((.5,.5), (.8,.2))  =", divergence(entropy, [0.5, 0.5], [0.8, 0.2]))
print("log-barrier box:    D((.2,-.3), (.5,.5)) =", divergence(custom, [0.2, -0.3], [0.5, 0.5]))

# one-hot labels are admissible as *first* arguments under the entropy
# generator: the divergence collapses to the familiar log loss
print("\none-hot first argument: D((1,0), (.8,.2)) =",
      divergence(entropy, [1.0, 0.0], [0.8, 0.2]), "= -log(0.8) =", -np.log(0.8))

# ----------------------------------------------------------------------------
# Asymmetry
# ----------------------------------------------------------------------------

p, q = np.array([0.5, 0.5]), np.array([0.8, 0.2])
print("\nasymmetry of KL:  D(p, q) =", divergence(entropy, p, q),
      " D(q, p) =", divergence(entropy, q, p))

# ----------------------------------------------------------------------------
# Three-point expansion: D(x,z) = D(x,y) + D(y,z) + correction
# ----------------------------------------------------------------------------

x, y, z = np.array([0.2, 0.8]), np.array([0.5, 0.5]), np.array([0.7, 0.3])
t = triangle_expansion(entropy, x, y, z)
print("\nthree-point expansion on the simplex:")
print(f"  D(x,z) = {t.total:.12f}")
print(f"  D(x,y) + D(y,z) + correction = {t.leg_xy:.12f} + {t.leg_yz:.12f} + {t.correction:+.12f}")
print(f"  residual = {t.residual:.2e}  (the correction can take either sign)")

# ----------------------------------------------------------------------------
# Conjugate duality: D(x, y) equals the conjugate divergence with swapped,
# gradient-mapped arguments
# ----------------------------------------------------------------------------

direct = divergence(entropy, y, x)
swapped = dual_divergence(entropy, entropy.grad(x), entropy.grad(y))
print("\nconjugate swap:  D(y, x) =", direct, " dual D(x*, y*) =", swapped,
      " gap =", abs(direct - swapped))
