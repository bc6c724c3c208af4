import pytest

from fccfold.conformation import from_directions, is_valid
from fccfold.energy import evaluate, hp_matrix, mj_matrix
from fccfold.errors import TooLong
from fccfold.oracle import canonical_directions, count_saws, enumerate_saws, exact_optimum
from fccfold.sequence import Sequence


def _hand_count_three() -> int:
    # second step collides only when it lands back on the origin
    from fccfold.lattice import BASIS

    return sum(1 for a in BASIS for b in BASIS if (a.x + b.x, a.y + b.y, a.z + b.z) != (0, 0, 0))


def test_small_counts():
    assert count_saws(2) == 12
    assert count_saws(3) == 132 == _hand_count_three()
    assert [count_saws(n) for n in (4, 5)] == [1404, 14700]


def test_reduced_counts_and_representatives():
    assert [count_saws(n, symmetry_reduce=True) for n in (2, 3, 4, 5)] == [1, 6, 59, 613]
    for dirs in enumerate_saws(5, symmetry_reduce=True):
        assert dirs[0] == 0
        assert canonical_directions(dirs) == dirs


def test_every_walk_is_valid():
    seq = Sequence.from_string("GGGGG")
    walks = list(enumerate_saws(5))
    assert len(set(walks)) == len(walks)
    for dirs in walks[::37]:
        assert is_valid(from_directions(seq, dirs))


def test_cap():
    with pytest.raises(TooLong):
        list(enumerate_saws(10))
    with pytest.raises(TooLong):
        exact_optimum(Sequence.from_string("G" * 10), hp_matrix())


def test_optimum_examples():
    assert exact_optimum(Sequence.from_string("GG"), hp_matrix()).optimum == 0
    res = exact_optimum(Sequence.from_string("GPG"), hp_matrix())
    assert res.optimum == -1
    assert evaluate(from_directions(Sequence.from_string("GPG"), res.argmin), hp_matrix()) == -1


def test_optimum_witness_matches_and_symmetry_does_not_matter():
    seq = Sequence.from_string("GGGGGG")
    res = exact_optimum(seq, mj_matrix())
    witness = from_directions(seq, res.argmin)
    assert evaluate(witness, mj_matrix()) == pytest.approx(res.optimum)
    # every GLY-GLY contact is worth -0.38, so the optimum is a whole number of contacts
    k = round(res.optimum / -0.38)
    assert res.optimum == pytest.approx(-0.38 * k)
    best = min(evaluate(from_directions(seq, d), mj_matrix()) for d in enumerate_saws(6, symmetry_reduce=True))
    assert best == pytest.approx(res.optimum)
