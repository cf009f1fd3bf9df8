"""Contingency counts and normalized mutual information for hard partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PartitionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Confusion:
    """``counts[i, j]``: nodes of implanted community ``i`` placed in computed community ``j``.

    The table is square (``k x k``); the partition with fewer parts is padded
    with empty communities.
    """

    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def k(self) -> int:
        return self.counts.shape[0]

    @property
    def implanted_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def computed_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _dense(labels) -> tuple[np.ndarray, int]:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise PartitionMismatch("labels must be one-dimensional")
    uniq, dense = np.unique(labels, return_inverse=True)
    return dense.reshape(-1), uniq.shape[0]


def confusion_counts(implanted, computed) -> Confusion:
    a, ka = _dense(implanted)
    b, kb = _dense(computed)
    if a.shape != b.shape:
        raise PartitionMismatch(f"partitions cover {a.shape[0]} and {b.shape[0]} nodes")
    k = max(ka, kb)
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (a, b), 1)
    return Confusion(counts)


def nmi_from_confusion(conf: Confusion) -> float:
    n = conf.n
    if n == 0:
        raise PartitionMismatch("empty partitions")
    nij = conf.counts.astype(float)
    ni = conf.implanted_sizes.astype(float)
    nj = conf.computed_sizes.astype(float)

    nz = nij > 0
    outer = np.outer(ni, nj)
    numer = float((nij[nz] * np.log(nij[nz] * n / outer[nz])).sum())
    ha = float((ni[ni > 0] * np.log(ni[ni > 0] / n)).sum())
    hb = float((nj[nj > 0] * np.log(nj[nj > 0] / n)).sum())
    if ha == 0.0 or hb == 0.0:
        # a single-cluster partition: the printed ratio is 0/0
        return 1.0 if ha == hb else 0.0
    return numer / np.sqrt(ha * hb)


def nmi(implanted, computed) -> float:
    """Normalized mutual information between two hard partitions (natural log)."""
    return nmi_from_confusion(confusion_counts(implanted, computed))
