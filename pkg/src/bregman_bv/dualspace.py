"""Empirical distributions and their primal/dual means, variances and averages.

Expectations are exact weighted sums over finite sample sets, so the
decomposition identities built on top hold to floating-point precision.
The dual mean is the primal form of the mean taken in gradient coordinates:
it minimizes the expected divergence *to* the samples, while the ordinary
(primal) mean minimizes the expected divergence *from* them.
"""

from __future__ import annotations

import itertools
import math
from typing import Mapping

import numpy as np

from .errors import DomainError, EnumerationCapError
from .generators import ConvexGenerator, divergence

__all__ = [
    "SampleSet",
    "GroupedSampleSet",
    "check_samples",
    "primal_mean",
    "dual_mean",
    "primal_variance",
    "dual_variance",
    "primal_average",
    "dual_average",
    "ensemble_distribution",
]

ENSEMBLE_ATOM_CAP = 1_000_000


class SampleSet:
    """Weighted finite collection of points: an empirical distribution.

    Weights must be positive and are normalized to sum to one.  Points are
    stored as a read-only ``(n, d)`` array; instances are immutable.
    """

    def __init__(self, points, weights=None):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise ValueError("points must form a nonempty (n, d) array")
        if not np.all(np.isfinite(points)):
            raise ValueError("points must be finite")
        if weights is None:
            weights = np.full(points.shape[0], 1.0 / points.shape[0])
        else:
            weights = np.asarray(weights, dtype=float)
            if weights.shape != (points.shape[0],):
                raise ValueError("weights must be one value per point")
            if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
                raise ValueError("weights must be positive and finite")
            weights = weights / np.sum(weights)
        self.points = points
        self.weights = weights
        self.points.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"SampleSet(n={self.n}, dim={self.dim})"


class GroupedSampleSet:
    """Sample sets partitioned by a discrete conditioning label.

    ``group_weights`` are the mixture weights of the groups (uniform when
    omitted); every group must be nonempty and share one dimension.
    """

    def __init__(self, groups: Mapping, group_weights=None):
        if not groups:
            raise ValueError("grouped sample set needs at least one group")
        self.groups = dict(groups)
        dims = {s.dim for s in self.groups.values()}
        if len(dims) != 1:
            raise ValueError("all groups must share one dimension")
        keys = list(self.groups)
        if group_weights is None:
            weights = np.full(len(keys), 1.0 / len(keys))
        else:
            if isinstance(group_weights, Mapping):
                weights = np.asarray([group_weights[k] for k in keys], dtype=float)
            else:
                weights = np.asarray(group_weights, dtype=float)
            if weights.shape != (len(keys),):
                raise ValueError("group weights must give one value per group")
            if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
                raise ValueError("group weights must be positive and finite")
            weights = weights / np.sum(weights)
        self.group_weights = dict(zip(keys, weights))

    @property
    def dim(self) -> int:
        return next(iter(self.groups.values())).dim

    def keys(self):
        return self.groups.keys()

    def items(self):
        return self.groups.items()

    def weight(self, key) -> float:
        return self.group_weights[key]

    def flatten(self) -> SampleSet:
        """Mixture distribution over all groups."""
        points = np.concatenate([s.points for s in self.groups.values()], axis=0)
        weights = np.concatenate(
            [self.group_weights[k] * s.weights for k, s in self.groups.items()]
        )
        return SampleSet(points, weights)

    def __repr__(self) -> str:
        return f"GroupedSampleSet(groups={len(self.groups)}, dim={self.dim})"


def check_samples(g: ConvexGenerator, s: SampleSet, *, allow_boundary: bool = False):
    """Validate every point of ``s`` against the generator's domain.

    Meant for ingestion time; the arithmetic operators below trust their
    inputs and do not re-validate per call.
    """
    if s.dim != g.dim:
        raise DomainError(f"points have dimension {s.dim}, generator expects {g.dim}")
    boundary_ok = allow_boundary and g.boundary_first_args
    mask = g.domain.contains(s.points, allow_boundary=boundary_ok)
    if not np.all(mask):
        bad = list(np.flatnonzero(~mask))
        raise DomainError(f"samples {bad} outside the {g.domain.kind} domain")


def primal_mean(s: SampleSet):
    """Weighted arithmetic mean; minimizes the expected divergence from the samples."""
    return s.weights @ s.points


def dual_mean(g: ConvexGenerator, s: SampleSet):
    """Mean in gradient coordinates, mapped back to the primal domain.

    Computes grad_conj(sum_i w_i grad(x_i)); minimizes the expected
    divergence to the samples.  For the simplex entropy generator this is
    the normalized geometric mean.
    """
    return g.grad_conj(s.weights @ g.grad(s.points))


def _is_constant(s: SampleSet) -> bool:
    return s.n == 1 or bool(np.all(s.points == s.points[0]))


def primal_variance(g: ConvexGenerator, s: SampleSet) -> float:
    """Expected divergence from the samples to their primal mean.

    Exactly zero for a constant sample set.
    """
    if _is_constant(s):
        return 0.0
    center = primal_mean(s)
    values = divergence(g, s.points, center, validate=False)
    return float(s.weights @ values)


def dual_variance(g: ConvexGenerator, s: SampleSet) -> float:
    """Expected divergence from the dual mean to the samples.

    Exactly zero for a constant sample set.
    """
    if _is_constant(s):
        return 0.0
    center = dual_mean(g, s)
    values = divergence(g, center, s.points, validate=False)
    return float(s.weights @ values)


def primal_average(points):
    """Plain arithmetic mean of a batch of points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] < 1:
        raise ValueError("need at least one point")
    return np.mean(points, axis=0)


def dual_average(g: ConvexGenerator, points):
    """Arithmetic mean taken in gradient coordinates, mapped back.

    For the simplex entropy generator this is the normalized geometric mean
    of the points.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] < 1:
        raise ValueError("need at least one point")
    return g.grad_conj(np.mean(g.grad(points), axis=0))


def _multiset_count(n_atoms: int, draws: int) -> int:
    return math.comb(draws + n_atoms - 1, draws)


def ensemble_distribution(
    g: ConvexGenerator,
    s: SampleSet,
    n: int,
    mode: str,
    *,
    cap: int = ENSEMBLE_ATOM_CAP,
    mc_draws: int | None = None,
    seed: int | None = None,
) -> SampleSet:
    """Distribution of the n-fold i.i.d. average of draws from ``s``.

    Exact by default: enumerates multisets of atoms with multinomial
    weights and maps each through the primal or dual average.  When the
    multiset count exceeds ``cap``, raises; pass ``mc_draws`` (with a seed)
    to fall back to Monte Carlo sampling of ensembles instead.
    """
    if mode not in ("primal", "dual"):
        raise ValueError("mode must be 'primal' or 'dual'")
    n = int(n)
    if n < 1:
        raise ValueError("ensemble size must be >= 1")
    if n == 1:
        return s
    if mc_draws is not None:
        if seed is None:
            raise ValueError("Monte Carlo ensembling requires an explicit seed")
        rng = np.random.default_rng(int(seed))
        idx = rng.choice(s.n, size=(int(mc_draws), n), p=s.weights)
        if mode == "primal":
            points = np.mean(s.points[idx], axis=1)
        else:
            points = g.grad_conj(np.mean(g.grad(s.points)[idx], axis=1))
        return SampleSet(points)
    total = _multiset_count(s.n, n)
    if total > cap:
        raise EnumerationCapError(
            f"exact ensembling needs {total} atoms (> cap {cap}); "
            "pass mc_draws and a seed for the Monte Carlo fallback"
        )
    counts = np.zeros((total, s.n))
    weights = np.empty(total)
    n_fact = math.factorial(n)
    for row, combo in enumerate(itertools.combinations_with_replacement(range(s.n), n)):
        c = np.bincount(combo, minlength=s.n)
        counts[row] = c
        coef = n_fact
        for ci in c:
            coef //= math.factorial(int(ci))
        weights[row] = coef * float(np.prod(s.weights**c))
    if mode == "primal":
        points = (counts @ s.points) / n
    else:
        points = g.grad_conj((counts @ g.grad(s.points)) / n)
    return SampleSet(points, weights)
