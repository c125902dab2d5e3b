"""
The three-term split of an expected loss
========================================

For independent labels Y and predictions X, the expected divergence
E[D(Y, X)] splits exactly into

    Bayes error      E[D(Y, mean of Y)]          -- label noise
  + bias             D(mean of Y, dual mean of X)
  + model variance   E[D(dual mean of X, X)],

with the central prediction taken as the dual mean.  This script first
reproduces the classical dartboard picture under the squared Euclidean loss
(where both centers are plain means), then decomposes a log loss against a
one-hot label, where the identity still holds to machine precision.
"""

import numpy as np

from bregman_bv import NegativeEntropySimplex, SampleSet, SquaredEuclidean, decompose

print(__doc__)

rng = np.random.default_rng(7)

# ----------------------------------------------------------------------------
# Dartboard: deterministic bullseye label, noisy throws
# ----------------------------------------------------------------------------

euclid = SquaredEuclidean(2)
bullseye = SampleSet([[0.0, 0.0]])

for title, mean, spread in [
    ("high bias, high variance", [0.8, 0.8], 0.6),
    ("high bias, low variance ", [0.8, 0.8], 0.1),
    ("low bias, high variance ", [0.0, 0.0], 0.6),
    ("low bias, low variance  ", [0.0, 0.0], 0.1),
]:
    throws = SampleSet(rng.normal(loc=mean, scale=spread, size=(200, 2)))
    rep = decompose(euclid, bullseye, throws)
    print(f"{title}: loss {rep.expected_loss:7.4f} = bayes {rep.bayes_error:.1f}"
          f" + bias {rep.bias:7.4f} + variance {rep.model_variance:7.4f}"
          f"   (residual {rep.identity_residual:+.1e})")

# the textbook two-throw case: loss 1 = 0 + 0 + 1
rep = decompose(euclid, bullseye, SampleSet([[1.0, 0.0], [-1.0, 0.0]]))
print("\ntwo symmetric throws:", rep.as_dict())

# ----------------------------------------------------------------------------
# Log loss against a one-hot label
# ----------------------------------------------------------------------------

entropy = NegativeEntropySimplex(2)
label = SampleSet([[1.0, 0.0]])                       # class 0, one-hot
predictions = SampleSet([[0.8, 0.2], [0.6, 0.4]])     # two softmax outputs

rep = decompose(entropy, label, predictions)
print("\nKL decomposition against one-hot label:")
print(f"  expected log loss  {rep.expected_loss:.12f}")
print(f"  bayes error        {rep.bayes_error:.12f}   (deterministic label)")
print(f"  bias               {rep.bias:.12f}   = -log({rep.central_prediction[0]:.12f})")
print(f"  model variance     {rep.model_variance:.12f}")
print(f"  identity residual  {rep.identity_residual:+.2e}")

# noisy labels contribute a nonzero bayes term; the identity still closes
noisy_labels = SampleSet([[1.0, 0.0], [0.0, 1.0]], [0.85, 0.15])
rep = decompose(entropy, noisy_labels, predictions)
print("\nwith 15% label noise:")
print(f"  loss {rep.expected_loss:.6f} = bayes {rep.bayes_error:.6f}"
      f" + bias {rep.bias:.6f} + variance {rep.model_variance:.6f}"
      f"   (residual {rep.identity_residual:+.1e})")
