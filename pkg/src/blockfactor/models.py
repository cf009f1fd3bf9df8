"""Constrained NMF objectives and the block-model log-likelihoods they match.

Every NMF objective here is a generalized KL divergence (or a squared error)
between the data and a low-rank model matrix.  Each likelihood oracle
evaluates the corresponding block-model log-likelihood directly from block
counts or by explicit index sums, without going through the factor products,
so that ``objective + loglik`` can be checked for constancy.

Conventions: ``0 log 0 = 0`` and ``0 log(0/0) = 0``; a positive data entry
against a zero model entry gives ``+inf`` objective / ``-inf`` likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import kl_div, xlogy


class FactorError(ValueError):
    """Factor matrices have the wrong shape or negative entries."""


def _nonneg(name: str, x, ndim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != ndim:
        raise FactorError(f"{name} must be {ndim}-d, got shape {x.shape}")
    if (x < 0).any():
        raise FactorError(f"{name} has negative entries")
    return x


@dataclass(frozen=True)
class Factors:
    """Membership ``G`` (n x c) and block parameters ``W`` (c x c)."""

    G: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        G = _nonneg("G", self.G, 2)
        W = _nonneg("W", self.W, 2)
        if W.shape != (G.shape[1], G.shape[1]):
            raise FactorError(f"W must be {G.shape[1]}x{G.shape[1]}, got {W.shape}")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "W", W)

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def c(self) -> int:
        return self.G.shape[1]

    def model(self) -> np.ndarray:
        return self.G @ self.W @ self.G.T

    def is_valid(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.G.sum(axis=1), 1.0, rtol=0, atol=atol))


@dataclass(frozen=True)
class DCFactors:
    """Degree-corrected factors: per-node weights ``theta`` plus ``G`` and ``W``."""

    theta: np.ndarray
    G: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        theta = _nonneg("theta", self.theta, 1)
        base = Factors(self.G, self.W)
        if theta.shape[0] != base.n:
            raise FactorError("theta length must equal the number of rows of G")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "G", base.G)
        object.__setattr__(self, "W", base.W)

    def model(self) -> np.ndarray:
        return np.outer(self.theta, self.theta) * (self.G @ self.W @ self.G.T)

    def is_valid(self, atol: float = 1e-10) -> bool:
        rows = np.allclose(self.G.sum(axis=1), 1.0, rtol=0, atol=atol)
        weights = np.allclose(self.theta @ self.G, 1.0, rtol=0, atol=atol)
        return bool(rows and weights)


@dataclass(frozen=True)
class DirectedFactors:
    """Tail memberships ``F``, head memberships ``H`` and edge-type distribution ``W``.

    Columns of ``F`` and ``H`` sum to one over nodes; ``W`` sums to one overall.
    """

    F: np.ndarray
    H: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        F = _nonneg("F", self.F, 2)
        H = _nonneg("H", self.H, 2)
        W = _nonneg("W", self.W, 2)
        if F.shape != H.shape or W.shape != (F.shape[1], F.shape[1]):
            raise FactorError("F, H must share shape n x c and W must be c x c")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "W", W)

    def model(self) -> np.ndarray:
        return self.F @ self.W @ self.H.T

    def is_valid(self, atol: float = 1e-10) -> bool:
        return bool(
            np.allclose(self.F.sum(axis=0), 1.0, rtol=0, atol=atol)
            and np.allclose(self.H.sum(axis=0), 1.0, rtol=0, atol=atol)
            and abs(self.W.sum() - 1.0) <= atol
        )


@dataclass(frozen=True)
class SignedFactors:
    """Memberships ``H`` with a diagonal ``W1`` (positive links) and hollow ``W2`` (negative links)."""

    H: np.ndarray
    W1: np.ndarray
    W2: np.ndarray

    def __post_init__(self):
        H = _nonneg("H", self.H, 2)
        W1 = _nonneg("W1", self.W1, 2)
        W2 = _nonneg("W2", self.W2, 2)
        c = H.shape[1]
        if W1.shape != (c, c) or W2.shape != (c, c):
            raise FactorError("W1 and W2 must be c x c")
        if (W1 - np.diag(np.diag(W1))).any():
            raise FactorError("W1 must be diagonal")
        if np.diag(W2).any():
            raise FactorError("W2 must have a zero diagonal")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "W1", W1)
        object.__setattr__(self, "W2", W2)

    @classmethod
    def from_block_matrix(cls, H, W) -> "SignedFactors":
        """Split ``W`` into its diagonal and off-diagonal parts."""
        W = np.asarray(W, dtype=float)
        W1 = np.diag(np.diag(W))
        return cls(H, W1, W - W1)

    def is_valid(self, atol: float = 1e-10) -> bool:
        return bool(
            np.allclose(self.H.sum(axis=0), 1.0, rtol=0, atol=atol)
            and abs(self.W1.sum() + self.W2.sum() - 1.0) <= atol
        )


@dataclass(frozen=True)
class TypeMask:
    """Binary ``c x c`` mask, 1 where two communities hold different vertex types."""

    T: np.ndarray

    def __post_init__(self):
        T = np.asarray(self.T, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise FactorError("type mask must be square")
        if not np.isin(T, (0.0, 1.0)).all():
            raise FactorError("type mask entries must be 0 or 1")
        if not np.array_equal(T, T.T):
            raise FactorError("type mask must be symmetric")
        object.__setattr__(self, "T", T)

    @classmethod
    def from_types(cls, community_types) -> "TypeMask":
        t = np.asarray(community_types)
        return cls((t[:, None] != t[None, :]).astype(float))


@dataclass(frozen=True)
class BlockStats:
    labels: np.ndarray
    sizes: np.ndarray
    edge_counts: np.ndarray

    @property
    def c(self) -> int:
        return self.sizes.shape[0]


def one_hot(labels, c: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if c is None:
        c = int(labels.max()) + 1 if labels.size else 0
    G = np.zeros((labels.shape[0], c))
    G[np.arange(labels.shape[0]), labels] = 1.0
    return G


def _generalized_kl(a: np.ndarray, m: np.ndarray) -> float:
    # kl_div already implements x log(x/y) - x + y with the 0 log 0 and x/0 limits.
    return float(kl_div(np.asarray(a, dtype=float), m).sum())


def equivalence_constant(a) -> float:
    """``sum_ij (A_ij log A_ij - A_ij)``, the data-only term the objectives add."""
    a = np.asarray(a, dtype=float)
    return float((xlogy(a, a) - a).sum())


# -- objectives ---------------------------------------------------------------


def kl_objective(a, f: Factors) -> float:
    return _generalized_kl(a, f.model())


def lse_objective(a, f: Factors) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.square(a - f.model()).sum())


def dc_objective(a, f: DCFactors) -> float:
    return _generalized_kl(a, f.model())


def bipartite_objective(a, f: Factors, t: TypeMask) -> float:
    if t.T.shape != f.W.shape:
        raise FactorError("type mask and W must have the same shape")
    return _generalized_kl(a, f.G @ (t.T * f.W) @ f.G.T)


def directed_objective(a, f: DirectedFactors) -> float:
    return _generalized_kl(a, f.model())


def signed_objective(aplus, aminus, f: SignedFactors) -> float:
    pos = f.H @ f.W1 @ f.H.T
    neg = f.H @ f.W2 @ f.H.T
    return _generalized_kl(aplus, pos) + _generalized_kl(aminus, neg)


# -- likelihood oracles -------------------------------------------------------


def block_stats(a, labels, c: int | None = None) -> BlockStats:
    """Community sizes ``n_r`` and edge counts ``m_rs = sum_{i in r, j in s} A_ij``.

    ``m_rr`` is twice the number of internal edges because both orientations of
    each pair are summed.
    """
    a = np.asarray(a, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (a.shape[0],):
        raise ValueError("need exactly one label per node")
    if labels.size and labels.min() < 0:
        raise ValueError("labels must be nonnegative")
    if c is None:
        c = int(labels.max()) + 1 if labels.size else 0
    sizes = np.bincount(labels, minlength=c).astype(float)
    m = np.zeros((c, c))
    rows, cols = np.nonzero(a)
    np.add.at(m, (labels[rows], labels[cols]), a[rows, cols])
    return BlockStats(labels, sizes, m)


def mle_block_params(stats: BlockStats) -> np.ndarray:
    """Pointwise maximizer ``w_rs = m_rs / (n_r n_s)`` of the profile likelihood."""
    pairs = np.outer(stats.sizes, stats.sizes)
    return np.divide(stats.edge_counts, pairs, out=np.zeros_like(pairs), where=pairs > 0)


def sbm_loglik(a, labels, w) -> float:
    """``sum_rs (m_rs log w_rs - n_r n_s w_rs)`` for the Poisson block model."""
    w = np.asarray(w, dtype=float)
    s = block_stats(a, labels, c=w.shape[0])
    return float((xlogy(s.edge_counts, w) - np.outer(s.sizes, s.sizes) * w).sum())


def dcsbm_loglik(a, theta, labels, w) -> float:
    """``sum_ij A_ij log(theta_i theta_j) + sum_rs (m_rs log w_rs - w_rs)``."""
    a = np.asarray(a, dtype=float)
    theta = np.asarray(theta, dtype=float)
    w = np.asarray(w, dtype=float)
    s = block_stats(a, labels, c=w.shape[0])
    degree_part = xlogy(a, np.outer(theta, theta)).sum()
    return float(degree_part + (xlogy(s.edge_counts, w) - w).sum())


def bipartite_loglik(a, labels, w, t: TypeMask) -> float:
    """Block log-likelihood restricted to community pairs of different types.

    Edges that fall on a same-type pair have probability zero and give ``-inf``.
    """
    w = np.asarray(w, dtype=float)
    s = block_stats(a, labels, c=w.shape[0])
    allowed = t.T > 0
    if (s.edge_counts[~allowed] > 0).any():
        return -np.inf
    terms = xlogy(s.edge_counts, w) - np.outer(s.sizes, s.sizes) * w
    return float(terms[allowed].sum())


def normal_loglik(a, labels, w, sigma: float = 1.0) -> float:
    """Gaussian edge-weight log-likelihood with block means ``w`` and a shared ``sigma``."""
    a = np.asarray(a, dtype=float)
    labels = np.asarray(labels, dtype=np.int64)
    mu = np.asarray(w, dtype=float)[np.ix_(labels, labels)]
    norm = a.size * np.log(np.sqrt(2.0 * np.pi) * sigma)
    return float(-norm - np.square(a - mu).sum() / (2.0 * sigma**2))


def directed_loglik(a, f: DirectedFactors) -> float:
    """Profile log-likelihood ``sum_ij A_ij log sum_rs w_rs F_ir H_js``."""
    probs = np.einsum("ir,rs,js->ij", f.F, f.W, f.H)
    return float(xlogy(np.asarray(a, dtype=float), probs).sum())


def signed_loglik(aplus, aminus, f: SignedFactors) -> float:
    """Signed log-likelihood: positive links within, negative links across communities."""
    W = f.W1 + f.W2
    c = W.shape[0]
    same = np.eye(c, dtype=bool)
    within = np.einsum("ir,rs,js->ij", f.H, np.where(same, W, 0.0), f.H)
    across = np.einsum("ir,rs,js->ij", f.H, np.where(same, 0.0, W), f.H)
    aplus = np.asarray(aplus, dtype=float)
    aminus = np.asarray(aminus, dtype=float)
    return float(xlogy(aplus, within).sum() + xlogy(aminus, across).sum())
