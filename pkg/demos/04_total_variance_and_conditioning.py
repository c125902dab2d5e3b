"""
Total variance and the price of a single draw
=============================================

Both variance notions obey a law of total variance with respect to a
discrete conditioning variable: the total splits into the mean within-group
variance (unexplained) plus the spread of the per-group centers (explained).
For the dual variance the centers are dual means, and the law holds because
the dual mean satisfies its own tower rule.

Conditioning also quantifies a practical bias: if an experiment fixes one
draw of a nuisance variable (a single training set, say) and averages only
over the rest, the measured bias *overestimates* the true bias and the
measured variance *underestimates* the true variance, both by the same
explicit gap.  The gap is a mean divergence between centers, so it is
nonnegative and exactly computable.
"""

import numpy as np

from bregman_bv import (
    GroupedSampleSet,
    NegativeEntropySimplex,
    SampleSet,
    SquaredEuclidean,
    conditional_label,
    conditional_prediction,
    total_variance,
)

print(__doc__)

rng = np.random.default_rng(11)

# ----------------------------------------------------------------------------
# Law of total variance, scalar warm-up: groups {0, 2} and {4, 6}
# ----------------------------------------------------------------------------

euclid1 = SquaredEuclidean(1)
grouped = GroupedSampleSet({
    "low": SampleSet([[0.0], [2.0]]),
    "high": SampleSet([[4.0], [6.0]]),
})
rep = total_variance(euclid1, grouped, "primal")
print(f"scalar: total {rep.total} = unexplained {rep.unexplained}"
      f" + explained {rep.explained}   (residual {rep.residual:+.1e})")

# ----------------------------------------------------------------------------
# Same law for the dual variance of softmax predictions grouped by seed pool
# ----------------------------------------------------------------------------

entropy = NegativeEntropySimplex(3)


def seed_pool(center, jitter, n=6):
    logits = np.log(center) + rng.normal(0.0, jitter, size=(n, 3))
    expd = np.exp(logits - logits.max(axis=1, keepdims=True))
    return SampleSet(expd / expd.sum(axis=1, keepdims=True))


pools = GroupedSampleSet({
    "pool-a": seed_pool(np.array([0.7, 0.2, 0.1]), 0.25),
    "pool-b": seed_pool(np.array([0.5, 0.3, 0.2]), 0.15),
    "pool-c": seed_pool(np.array([0.6, 0.1, 0.3]), 0.35),
})
for mode in ("primal", "dual"):
    rep = total_variance(entropy, pools, mode)
    print(f"{mode:6s} variance: total {rep.total:.6f} = unexplained {rep.unexplained:.6f}"
          f" + explained {rep.explained:.6f}   (residual {rep.residual:+.1e})")

# ----------------------------------------------------------------------------
# Conditioning on the prediction side: one-hot label, grouped predictions
# ----------------------------------------------------------------------------

label = np.array([1.0, 0.0, 0.0])
rep = conditional_prediction(entropy, label, pools)
print("\nconditioning the predictions on the pool:")
print(f"  conditional bias      {rep.conditional_bias:.6f}"
      f"  = unconditional {rep.unconditional_bias:.6f} + gap {rep.gap:.6f}")
print(f"  conditional variance  {rep.conditional_variance:.6f}"
      f"  = unconditional {rep.unconditional_variance:.6f} - gap {rep.gap:.6f}")
print(f"  identity residuals    {rep.bias_residual:+.1e}, {rep.variance_residual:+.1e}")
print("  -> a single-draw protocol inflates bias and deflates variance by the gap")

# ----------------------------------------------------------------------------
# Conditioning on the label side: grouped labels, fixed prediction
# ----------------------------------------------------------------------------

euclid = SquaredEuclidean(1)
label_groups = GroupedSampleSet({"a": SampleSet([[0.0]]), "b": SampleSet([[2.0]])})
rep = conditional_label(euclid, label_groups, np.array([3.0]))
print("\nscalar label-side hand case (groups {0},{2}, prediction 3):")
print(f"  conditional bias {rep.conditional_bias} = {rep.unconditional_bias} + {rep.gap}")
print(f"  conditional variance {rep.conditional_variance}"
      f" = {rep.unconditional_variance} - {rep.gap}")
