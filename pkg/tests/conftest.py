"""Shared builders: generators at test dimensions, domain-aware samplers."""

from __future__ import annotations

import numpy as np
import pytest

from bregman_bv import (
    GroupedSampleSet,
    Mahalanobis,
    NegativeEntropySimplex,
    OpenBox,
    OpenSimplex,
    Piece,
    SampleSet,
    SeparableCustom,
    SquaredEuclidean,
)

GENERATOR_NAMES = [
    "squared-euclidean",
    "mahalanobis",
    "negative-entropy-simplex",
    "separable-custom",
]

_PIECE_FAMILIES = [
    Piece(lambda t: -np.log(1.0 - t**2), lambda t: 2.0 * t / (1.0 - t**2), -1.0, 1.0),
    Piece(lambda t: -np.log(1.0 - t**4), lambda t: 4.0 * t**3 / (1.0 - t**4), -1.0, 1.0),
    Piece(np.cosh, np.sinh, -1.5, 1.5),
]


def spd_matrix(dim: int, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed + dim)
    b = rng.normal(size=(dim, dim))
    return b @ b.T + dim * np.eye(dim)


def build_generator(name: str, dim: int):
    if name == "squared-euclidean":
        return SquaredEuclidean(dim)
    if name == "mahalanobis":
        return Mahalanobis(spd_matrix(dim))
    if name == "negative-entropy-simplex":
        return NegativeEntropySimplex(max(dim, 2))
    if name == "separable-custom":
        return SeparableCustom([_PIECE_FAMILIES[i % len(_PIECE_FAMILIES)] for i in range(dim)])
    raise ValueError(name)


def fig_2b_generator() -> SeparableCustom:
    return SeparableCustom(_PIECE_FAMILIES[:2])


def default_generators():
    """One representative of each built-in family at desk-scale dimension."""
    return [
        build_generator("squared-euclidean", 2),
        build_generator("mahalanobis", 2),
        build_generator("negative-entropy-simplex", 3),
        build_generator("separable-custom", 2),
    ]


def random_interior_points(g, rng, n: int, margin: float = 0.1) -> np.ndarray:
    """Points comfortably inside the generator's domain."""
    d = g.dim
    dom = g.domain
    if isinstance(dom, OpenSimplex):
        x = rng.dirichlet(np.ones(d), size=n)
        return (1.0 - margin) * x + margin / d
    if isinstance(dom, OpenBox):
        width = dom.uppers - dom.lowers
        u = rng.uniform(margin, 1.0 - margin, size=(n, d))
        return dom.lowers + width * u
    return rng.uniform(-2.0, 2.0, size=(n, d))


def random_sample_set(g, rng, max_n: int = 8, min_n: int = 1) -> SampleSet:
    n = int(rng.integers(min_n, max_n + 1))
    weights = rng.uniform(0.2, 1.0, size=n)
    return SampleSet(random_interior_points(g, rng, n), weights)


def random_grouped(g, rng, max_groups: int = 4, max_n: int = 5) -> GroupedSampleSet:
    k = int(rng.integers(2, max_groups + 1))
    groups = {f"g{i}": random_sample_set(g, rng, max_n=max_n) for i in range(k)}
    return GroupedSampleSet(groups, rng.uniform(0.2, 1.0, size=k))


@pytest.fixture(params=GENERATOR_NAMES)
def gen(request):
    dims = {"negative-entropy-simplex": 3}
    return build_generator(request.param, dims.get(request.param, 2))
