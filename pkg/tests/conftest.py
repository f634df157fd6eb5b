"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own derivation code:
concepts are found by closing every object subset with direct matrix
scans, and the reference clustering is a plain textbook loop.
"""

from __future__ import annotations

from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from fuzzysumm.domain import load_schema
from fuzzysumm.lattice import FuzzyContext
from fuzzysumm.summary import SummaryHierarchy

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def employee_schema():
    return load_schema(FIXTURES / "employee_schema.json")


@pytest.fixture(scope="session")
def employee_hierarchy():
    return SummaryHierarchy.load(FIXTURES / "employee_hierarchy.json")


@pytest.fixture(scope="session")
def food_schema():
    return load_schema(FIXTURES / "food_schema.json")


@pytest.fixture(scope="session")
def food_hierarchy():
    return SummaryHierarchy.load(FIXTURES / "food_hierarchy.json")


@pytest.fixture(scope="session")
def topics_context():
    return FuzzyContext.load(FIXTURES / "topics_context.json")


# -- independent FCA oracle --------------------------------------------------


def oracle_intent(ctx: FuzzyContext, objs, threshold):
    """Attributes at degree >= T for every object in objs, by raw scan."""
    out = set()
    for j, pair in enumerate(ctx.attributes):
        if all(ctx.degrees[ctx.objects.index(g)][j] >= threshold for g in objs):
            out.add(pair)
    return out


def oracle_extent(ctx: FuzzyContext, attrs, threshold):
    out = set()
    for i, g in enumerate(ctx.objects):
        if all(ctx.degrees[i][ctx.attributes.index(p)] >= threshold for p in attrs):
            out.add(g)
    return out


def oracle_concepts(ctx: FuzzyContext, threshold):
    """Close every subset of the objects; the distinct (extent, intent)
    pairs are exactly the concepts."""
    found = set()
    for size in range(len(ctx.objects) + 1):
        for subset in combinations(ctx.objects, size):
            intent = oracle_intent(ctx, subset, threshold)
            extent = oracle_extent(ctx, intent, threshold)
            found.add((frozenset(extent), frozenset(intent)))
    return found


def random_context(rng: np.random.Generator, max_objects=10, max_attrs=8) -> FuzzyContext:
    n = int(rng.integers(1, max_objects + 1))
    m = int(rng.integers(1, max_attrs + 1))
    objects = tuple(f"g{i}" for i in range(n))
    attributes = tuple(("A", f"m{j}") for j in range(m))
    degrees = tuple(tuple(float(v) for v in rng.uniform(0.0, 1.0, m)) for _ in range(n))
    return FuzzyContext(objects, attributes, degrees)


def random_schema_context(rng: np.random.Generator, max_objects=8):
    """Context whose columns group into 2-3 named attributes, for query and
    hierarchy property tests."""
    n_attrs = int(rng.integers(2, 4))
    names = [f"A{k}" for k in range(n_attrs)]
    pairs = []
    for name in names:
        for j in range(int(rng.integers(2, 5))):
            pairs.append((name, f"l{j}"))
    n = int(rng.integers(3, max_objects + 1))
    objects = tuple(f"g{i}" for i in range(n))
    degrees = tuple(
        tuple(float(v) for v in rng.uniform(0.0, 1.0, len(pairs))) for _ in range(n)
    )
    return FuzzyContext(objects, tuple(pairs), degrees), names


# -- independent clustering oracle -------------------------------------------


def reference_fcm(xs, centers, m=2.0, iters=400):
    """Textbook alternating updates from a given starting point."""
    xs = np.asarray(xs, dtype=float)
    centers = np.asarray(centers, dtype=float)
    for _ in range(iters):
        d = np.abs(xs[None, :] - centers[:, None])
        d = np.maximum(d, 1e-12)
        u = d ** (-2.0 / (m - 1.0))
        u /= u.sum(axis=0, keepdims=True)
        centers = ((u ** m) @ xs) / (u ** m).sum(axis=1)
    return np.sort(centers)
