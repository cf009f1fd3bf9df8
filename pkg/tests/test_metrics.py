import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockfactor.metrics import PartitionMismatch, confusion_counts, nmi, nmi_from_confusion

# hand evaluation for [0,0,1,1] vs [0,0,1,0]: counts [[2,0],[1,1]], sizes (2,2) and (3,1)
_NUM = 2 * np.log(4 / 3) + np.log(2 / 3) + np.log(2)
_DEN = np.sqrt((4 * np.log(0.5)) * (3 * np.log(0.75) + np.log(0.25)))
HAND_NMI = _NUM / _DEN


def test_hand_value_is_the_frozen_constant():
    # 30-digit evaluation of the same expression
    assert HAND_NMI == pytest.approx(0.345592029944211359, abs=1e-15)


def test_confusion_examples():
    np.testing.assert_array_equal(confusion_counts([0, 1, 2], [0, 1, 2]).counts, np.eye(3))
    np.testing.assert_array_equal(confusion_counts([0, 0, 1, 1], [0, 1, 0, 1]).counts, np.ones((2, 2)))
    np.testing.assert_array_equal(confusion_counts([0, 0, 1, 1], [0, 0, 1, 0]).counts, [[2, 0], [1, 1]])


def test_confusion_pads_to_square():
    conf = confusion_counts([0, 0, 0, 1], [0, 1, 2, 2])
    assert conf.k == 3 and conf.n == 4
    np.testing.assert_array_equal(conf.implanted_sizes, [3, 1, 0])
    np.testing.assert_array_equal(conf.computed_sizes, [1, 1, 2])


def test_nmi_examples():
    assert nmi([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0, abs=1e-12)
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)
    assert nmi([0, 0, 1, 1], [0, 0, 1, 0]) == pytest.approx(HAND_NMI, abs=1e-12)


def test_single_cluster_conventions():
    assert nmi([0, 0, 0], [5, 5, 5]) == 1.0
    assert nmi([0, 0, 0], [0, 1, 1]) == 0.0
    assert nmi([0, 1, 1], [0, 0, 0]) == 0.0


def test_errors():
    with pytest.raises(PartitionMismatch):
        nmi([0, 1], [0, 1, 1])
    with pytest.raises(PartitionMismatch):
        nmi([], [])
    with pytest.raises(PartitionMismatch):
        nmi(np.zeros((2, 2)), np.zeros((2, 2)))


partitions = st.integers(1, 30).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 4), min_size=n, max_size=n),
                        st.lists(st.integers(0, 4), min_size=n, max_size=n)))


@given(partitions)
def test_range_and_consistency(pair):
    a, b = pair
    v = nmi(a, b)
    assert -1e-12 <= v <= 1 + 1e-12
    assert v == nmi_from_confusion(confusion_counts(a, b))


@given(partitions, st.permutations(range(5)), st.permutations(range(5)))
def test_relabeling_invariance(pair, p, q):
    a, b = pair
    pa = [p[x] for x in a]
    qb = [q[x] for x in b]
    assert nmi(pa, qb) == pytest.approx(nmi(a, b), abs=1e-12)


@given(partitions)
def test_symmetry_for_equal_part_counts(pair):
    a, b = pair
    if len(set(a)) == len(set(b)):
        assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)


@given(partitions)
def test_one_iff_identical_up_to_relabeling(pair):
    a, b = pair
    same = len({(x, y) for x, y in zip(a, b)}) == len(set(a)) == len(set(b))
    assert (abs(nmi(a, b) - 1.0) < 1e-9) == same
