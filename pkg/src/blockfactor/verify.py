"""Brute-force checks that each NMF objective plus its block-model
log-likelihood is constant in the factors.

For a fixed data matrix, ``objective + loglik`` is evaluated over many random
factor draws; the spread (max - min) should sit at rounding level, and the
value itself should match the closed-form constant where one exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import models as M
from .graph import bipartite_embed

MODELS = ("standard", "degree_corrected", "bipartite", "normal", "directed", "signed")


@dataclass
class EquivalenceReport:
    model: str
    instances: int
    draws: int
    max_spread: float
    # largest |value - constant| where the constant is known in closed form
    max_offset: float

    def ok(self, tol: float = 1e-9) -> bool:
        return self.max_spread <= tol


def _covering_labels(rng, n: int, c: int) -> np.ndarray:
    """Uniform labels in 0..c-1 with every community occupied (needs n >= c)."""
    labels = np.concatenate([np.arange(c), rng.integers(0, c, size=n - c)])
    return rng.permutation(labels)


def _counts(rng, shape, symmetric: bool) -> np.ndarray:
    lam = rng.uniform(0.5, 3.0)
    a = rng.poisson(lam, size=shape).astype(float)
    if symmetric:
        a = np.triu(a) + np.triu(a, 1).T
    return a


def _sym_positive(rng, c: int) -> np.ndarray:
    w = rng.uniform(0.05, 2.0, size=(c, c))
    return (w + w.T) / 2.0


# Each builder fixes A and returns draw(rng) -> (objective + loglik, expected constant).


def _standard(rng, n, c):
    a = _counts(rng, (n, n), symmetric=True)
    const = M.equivalence_constant(a)

    def draw(r):
        labels = r.integers(0, c, size=n)
        w = _sym_positive(r, c)
        f = M.Factors(M.one_hot(labels, c), w)
        return M.kl_objective(a, f) + M.sbm_loglik(a, labels, w), const

    return draw


def _degree_corrected(rng, n, c):
    a = _counts(rng, (n, n), symmetric=True)
    const = M.equivalence_constant(a)

    def draw(r):
        labels = _covering_labels(r, n, c)
        G = M.one_hot(labels, c)
        raw = r.uniform(0.1, 1.0, size=n)
        theta = raw / (G.T @ raw)[labels]
        w = _sym_positive(r, c) * n
        f = M.DCFactors(theta, G, w)
        return M.dc_objective(a, f) + M.dcsbm_loglik(a, theta, labels, w), const

    return draw


def _bipartite(rng, n, c):
    n1 = int(rng.integers(1, n))
    n2 = n - n1
    c1 = int(rng.integers(1, c)) if c > 1 else 1
    c1 = min(c1, n1)
    c2 = min(max(c - c1, 1), n2)
    types = np.array([0] * c1 + [1] * c2)
    t = M.TypeMask.from_types(types)
    a = bipartite_embed(_counts(rng, (n1, n2), symmetric=False))
    const = M.equivalence_constant(a)
    cc = c1 + c2

    def draw(r):
        labels = np.concatenate([r.integers(0, c1, size=n1), c1 + r.integers(0, c2, size=n2)])
        w = _sym_positive(r, cc)
        f = M.Factors(M.one_hot(labels, cc), w)
        return M.bipartite_objective(a, f, t) + M.bipartite_loglik(a, labels, w, t), const

    return draw


def _normal(rng, n, c, sigma: float = 1.0):
    a = rng.normal(2.0, 1.5, size=(n, n))
    a = np.abs(np.triu(a) + np.triu(a, 1).T)
    const = -2.0 * sigma**2 * n * n * np.log(np.sqrt(2.0 * np.pi) * sigma)

    def draw(r):
        labels = r.integers(0, c, size=n)
        w = _sym_positive(r, c)
        f = M.Factors(M.one_hot(labels, c), w)
        return M.lse_objective(a, f) + 2.0 * sigma**2 * M.normal_loglik(a, labels, w, sigma), const

    return draw


def _directed(rng, n, c):
    a = _counts(rng, (n, n), symmetric=False)
    const = M.equivalence_constant(a) + 1.0

    def draw(r):
        F = r.uniform(0.05, 1.0, size=(n, c))
        H = r.uniform(0.05, 1.0, size=(n, c))
        W = r.uniform(0.05, 1.0, size=(c, c))
        f = M.DirectedFactors(F / F.sum(axis=0), H / H.sum(axis=0), W / W.sum())
        return M.directed_objective(a, f) + M.directed_loglik(a, f), const

    return draw


def _signed(rng, n, c):
    raw = _counts(rng, (n, n), symmetric=True) - _counts(rng, (n, n), symmetric=True)
    aplus = np.where(raw > 0, raw, 0.0)
    aminus = np.where(raw < 0, -raw, 0.0)
    # with c = 1 there are no across-community pairs to explain negative links
    if c == 1:
        aminus[:] = 0.0
    const = M.equivalence_constant(aplus) + M.equivalence_constant(aminus) + 1.0

    def draw(r):
        H = r.uniform(0.05, 1.0, size=(n, c))
        W = r.uniform(0.05, 1.0, size=(c, c))
        f = M.SignedFactors.from_block_matrix(H / H.sum(axis=0), W / W.sum())
        return M.signed_objective(aplus, aminus, f) + M.signed_loglik(aplus, aminus, f), const

    return draw


BUILDERS: dict[str, Callable] = {
    "standard": _standard,
    "degree_corrected": _degree_corrected,
    "bipartite": _bipartite,
    "normal": _normal,
    "directed": _directed,
    "signed": _signed,
}


def check_model(model: str, seed: int = 0, instances: int = 100, draws: int = 20,
                max_n: int = 20, max_c: int = 4) -> EquivalenceReport:
    rng = np.random.default_rng([seed, MODELS.index(model)])
    spread = offset = 0.0
    for _ in range(instances):
        c = int(rng.integers(1 if model != "bipartite" else 2, max_c + 1))
        n = int(rng.integers(max(c, 2), max_n + 1))
        draw = BUILDERS[model](rng, n, c)
        values = []
        for _ in range(draws):
            value, const = draw(rng)
            values.append(value)
            if const is not None:
                offset = max(offset, abs(value - const))
        spread = max(spread, max(values) - min(values))
    return EquivalenceReport(model, instances, draws, spread, offset)


def check_all(seed: int = 0, instances: int = 100, draws: int = 20) -> list[EquivalenceReport]:
    return [check_model(m, seed, instances, draws) for m in MODELS]
