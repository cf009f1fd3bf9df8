"""Seeded synthetic benchmarks with planted communities.

* GN: 128 nodes in four groups of 32; independent Bernoulli edges with
  ``p_in = z_in / 31`` and ``p_out = z_out / 96`` so the expected degree is
  ``z_in + z_out = 16``.
* LFR: power-law degrees and community sizes, a mixing fraction ``mu`` of
  each node's edges leaving its community, wired with a configuration model
  and repaired by local edge swaps.

All randomness comes from ``numpy.random.default_rng`` (PCG64) seeded by the
caller, so ``(spec, seed)`` fixes the instance.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import Graph, write_edge_list, write_labels

log = logging.getLogger(__name__)


class GeneratorDomainError(ValueError):
    pass


class GenerationError(RuntimeError):
    """The generator could not build a valid instance within its retry budget."""


@dataclass(frozen=True)
class PlantedInstance:
    graph: Graph
    labels: np.ndarray

    @property
    def communities(self) -> int:
        return int(np.unique(self.labels).shape[0])

    def write(self, edges_path, labels_path) -> None:
        write_edge_list(self.graph, edges_path)
        write_labels(self.labels, labels_path)


# -- GN -----------------------------------------------------------------------


@dataclass(frozen=True)
class GNSpec:
    z_out: float
    total_degree: float = 16.0
    groups: int = 4
    group_size: int = 32

    def __post_init__(self):
        if not 0 <= self.z_out <= self.total_degree:
            raise GeneratorDomainError(f"z_out must lie in [0, {self.total_degree}]")

    @property
    def z_in(self) -> float:
        return self.total_degree - self.z_out

    @property
    def p_in(self) -> float:
        return self.z_in / (self.group_size - 1)

    @property
    def p_out(self) -> float:
        return self.z_out / (self.group_size * (self.groups - 1))


def gn_generate(spec: GNSpec, seed) -> PlantedInstance:
    p_in, p_out = spec.p_in, spec.p_out
    if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
        raise GeneratorDomainError(f"edge probabilities out of range: p_in={p_in}, p_out={p_out}")
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(spec.groups), spec.group_size)
    n = labels.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    probs = np.where(labels[iu] == labels[ju], p_in, p_out)
    hit = rng.random(iu.shape[0]) < probs
    a = np.zeros((n, n))
    a[iu[hit], ju[hit]] = 1.0
    a[ju[hit], iu[hit]] = 1.0
    return PlantedInstance(Graph("undirected", a), labels)


# -- power laws ---------------------------------------------------------------


def _check_support(exponent: float, lo: int, hi: int) -> None:
    if lo < 1 or hi < lo:
        raise GeneratorDomainError(f"empty power-law support [{lo}, {hi}]")
    if not exponent > 0:
        raise GeneratorDomainError("power-law exponent must be positive")


def powerlaw_pmf(exponent: float, lo: int, hi: int) -> np.ndarray:
    _check_support(exponent, lo, hi)
    k = np.arange(lo, hi + 1, dtype=float)
    w = k**-exponent
    return w / w.sum()


def powerlaw_sample(exponent: float, lo: int, hi: int, count: int, seed) -> np.ndarray:
    """``count`` draws with ``P(k) ~ k**-exponent`` on the integers ``lo..hi``."""
    pmf = powerlaw_pmf(exponent, lo, hi)
    rng = np.random.default_rng(seed)
    return rng.choice(np.arange(lo, hi + 1), size=count, p=pmf)


def powerlaw_mean(exponent: float, lo: int, hi: int) -> float:
    pmf = powerlaw_pmf(exponent, lo, hi)
    return float(pmf @ np.arange(lo, hi + 1))


def min_degree_mixture(exponent: float, mean: float, hi: int) -> tuple[int, float]:
    """Find ``lo`` and a weight ``q`` so that mixing supports ``[lo, hi]`` (weight ``q``)
    and ``[lo + 1, hi]`` (weight ``1 - q``) gives a truncated power law with the
    requested mean.  The truncated mean increases with ``lo``, so ``lo`` is found
    by bisection.
    """
    if not powerlaw_mean(exponent, 1, hi) <= mean <= hi:
        raise GeneratorDomainError(f"mean degree {mean} unreachable with max degree {hi}")
    left, right = 1, hi
    while left < right:
        mid = (left + right + 1) // 2
        if powerlaw_mean(exponent, mid, hi) <= mean:
            left = mid
        else:
            right = mid - 1
    lo = left
    if lo == hi:
        return lo, 1.0
    m_lo = powerlaw_mean(exponent, lo, hi)
    m_hi = powerlaw_mean(exponent, lo + 1, hi)
    return lo, float((m_hi - mean) / (m_hi - m_lo))


# -- LFR ----------------------------------------------------------------------


@dataclass(frozen=True)
class LFRSpec:
    mu: float
    n: int = 1000
    max_degree: int = 50
    degree_exponent: float = 2.0
    community_exponent: float = 1.0
    average_degree: float = 20.0
    min_community: int = 10
    max_community: int = 100

    def __post_init__(self):
        if not 0 <= self.mu <= 1:
            raise GeneratorDomainError("mu must lie in [0, 1]")
        if not (self.degree_exponent > 0 and self.community_exponent > 0):
            raise GeneratorDomainError("exponents must be positive")
        if not 1 <= self.average_degree <= self.max_degree:
            raise GeneratorDomainError("need 1 <= average_degree <= max_degree")
        if not 2 <= self.min_community <= self.max_community:
            raise GeneratorDomainError("need 2 <= min_community <= max_community")
        if self.min_community > self.n:
            raise GeneratorDomainError("min_community exceeds n")


class _Retry(Exception):
    pass


def _community_sizes(spec: LFRSpec, rng: np.random.Generator) -> np.ndarray:
    sizes: list[int] = []
    total = 0
    while total < spec.n:
        s = int(powerlaw_sample(spec.community_exponent, spec.min_community, spec.max_community, 1, rng)[0])
        sizes.append(s)
        total += s
    excess = total - spec.n
    if sizes[-1] - excess >= spec.min_community:
        sizes[-1] -= excess
    else:
        sizes.pop()
        deficit = spec.n - sum(sizes)
        for _ in range(deficit):
            room = [i for i, s in enumerate(sizes) if s < spec.max_community]
            if not room:
                raise _Retry("community sizes cannot absorb the remainder")
            sizes[room[int(rng.integers(len(room)))]] += 1
    return np.asarray(sizes, dtype=np.int64)


def _assign_nodes(k_in: np.ndarray, sizes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Seat nodes, largest internal degree first, in communities big enough to host them."""
    n = k_in.shape[0]
    order = rng.permutation(n)
    order = order[np.argsort(-k_in[order], kind="stable")]
    room = sizes.copy()
    labels = np.empty(n, dtype=np.int64)
    for v in order:
        eligible = np.flatnonzero((room > 0) & (sizes - 1 >= k_in[v]))
        if eligible.size == 0:
            raise _Retry(f"no community can host internal degree {k_in[v]}")
        r = eligible[rng.integers(eligible.size)]
        labels[v] = r
        room[r] -= 1
    return labels


def _fix_internal_parity(k_in, k_out, labels, sizes, no_external: bool, rng) -> None:
    for r in range(sizes.shape[0]):
        members = np.flatnonzero(labels == r)
        if k_in[members].sum() % 2 == 0:
            continue
        v = members[rng.integers(members.size)]
        if k_out[v] > 0 and k_in[v] < sizes[r] - 1:
            k_in[v] += 1
            k_out[v] -= 1
        elif no_external:
            # nothing may leave the community: change the degree instead
            k_in[v] += -1 if k_in[v] > 1 else 1
        else:
            k_in[v] -= 1
            k_out[v] += 1


def _pair_stubs(nodes: np.ndarray, counts: np.ndarray, rng) -> list[list[int]]:
    stubs = np.repeat(nodes, counts)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2).tolist()


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _rewire(edges: list[list[int]], allowed, rng, passes: int = 100) -> None:
    """Remove self-loops, multi-edges and disallowed pairs by degree-preserving swaps.

    Raises ``_Retry`` if violations survive ``passes`` sweeps.
    """
    counts = Counter(_key(u, v) for u, v in edges)

    def bad(e):
        u, v = e
        return u == v or counts[_key(u, v)] > 1 or not allowed(u, v)

    def ok(u, v):
        return u != v and allowed(u, v) and counts[_key(u, v)] == 0

    m = len(edges)
    for _ in range(passes):
        todo = [i for i, e in enumerate(edges) if bad(e)]
        if not todo:
            return
        if m < 2:
            break
        for i in todo:
            if not bad(edges[i]):
                continue
            u, v = edges[i]
            counts[_key(u, v)] -= 1
            # first valid partner in random order
            for j in rng.permutation(m).tolist():
                if j == i:
                    continue
                x, y = edges[j]
                if rng.random() < 0.5:
                    x, y = y, x
                counts[_key(x, y)] -= 1
                if ok(u, x) and ok(v, y) and _key(u, x) != _key(v, y):
                    edges[i], edges[j] = [u, x], [v, y]
                    counts[_key(u, x)] += 1
                    counts[_key(v, y)] += 1
                    break
                counts[_key(x, y)] += 1
            else:
                counts[_key(u, v)] += 1
    if any(bad(e) for e in edges):
        raise _Retry("rewiring left self-loops or multi-edges")


def _lfr_attempt(spec: LFRSpec, rng: np.random.Generator) -> PlantedInstance:
    n = spec.n
    lo, q = min_degree_mixture(spec.degree_exponent, spec.average_degree, spec.max_degree)
    from_lo = rng.random(n) < q
    deg = np.empty(n, dtype=np.int64)
    deg[from_lo] = powerlaw_sample(spec.degree_exponent, lo, spec.max_degree, int(from_lo.sum()), rng)
    rest = int((~from_lo).sum())
    if rest:
        deg[~from_lo] = powerlaw_sample(spec.degree_exponent, min(lo + 1, spec.max_degree), spec.max_degree, rest, rng)
    if deg.sum() % 2:
        v = int(rng.integers(n))
        deg[v] += 1 if deg[v] < spec.max_degree else -1

    k_in = np.rint((1.0 - spec.mu) * deg).astype(np.int64)
    k_out = deg - k_in

    sizes = _community_sizes(spec, rng)
    if k_in.max() > sizes.max() - 1:
        raise _Retry("largest community too small for the largest internal degree")
    labels = _assign_nodes(k_in, sizes, rng)
    _fix_internal_parity(k_in, k_out, labels, sizes, no_external=not k_out.any(), rng=rng)

    a = np.zeros((n, n))
    for r in range(sizes.shape[0]):
        members = np.flatnonzero(labels == r)
        edges = _pair_stubs(members, k_in[members], rng)
        _rewire(edges, lambda u, v: True, rng)
        for u, v in edges:
            a[u, v] = a[v, u] = 1.0

    edges = _pair_stubs(np.arange(n), k_out, rng)
    _rewire(edges, lambda u, v: labels[u] != labels[v], rng)
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    return PlantedInstance(Graph("undirected", a), labels)


def lfr_generate(spec: LFRSpec, seed, attempts: int = 20) -> PlantedInstance:
    rng = np.random.default_rng(seed)
    reason = ""
    for attempt in range(attempts):
        try:
            return _lfr_attempt(spec, rng)
        except _Retry as exc:
            reason = str(exc)
            log.debug("LFR attempt %d failed: %s", attempt, reason)
    raise GenerationError(f"LFR generation failed after {attempts} attempts: {reason}")


def cross_fraction(a, labels) -> float:
    """Fraction of edge endpoints (weighted) whose edge leaves the community."""
    a = np.asarray(a, dtype=float)
    labels = np.asarray(labels)
    total = a.sum()
    if total == 0:
        return 0.0
    return float(a[labels[:, None] != labels[None, :]].sum() / total)
