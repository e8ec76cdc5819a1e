import numpy as np
import pytest

from varikit.geometry import coordinate_subspace
from varikit.varifold import DiscreteVarifold, load_csv, save_csv


def _proj(n, axes):
    return coordinate_subspace(n, axes).proj


def _two_line_cross():
    """Two unit-weight atoms at the origin with different tangent lines."""
    planes = np.stack([_proj(2, [0]), _proj(2, [1])])
    return DiscreteVarifold(1, 2, np.zeros((2, 2)), planes, np.array([1.0, 3.0]))


def test_constructor_validation():
    with pytest.raises(ValueError):
        DiscreteVarifold(2, 1, np.zeros((1, 1)), np.zeros((1, 1, 1)), [1.0])
    with pytest.raises(ValueError):
        DiscreteVarifold(1, 2, np.zeros((1, 3)), np.zeros((1, 2, 2)), [1.0])
    with pytest.raises(ValueError):
        DiscreteVarifold(1, 2, np.zeros((2, 2)), np.zeros((1, 2, 2)), [1.0, 1.0])


def test_total_weight_and_ball_mass():
    v = _two_line_cross()
    assert v.total_weight == 4.0
    assert v.ball_mass(np.zeros(2), 0.5) == 4.0
    assert v.ball_mass(np.array([10.0, 0.0]), 0.5) == 0.0


def test_disintegration_at_a_multi_plane_point():
    v = _two_line_cross()
    fibers = v.disintegrate(np.zeros(2))
    assert len(fibers) == 2
    weights = sorted(w for _, w in fibers)
    assert weights == [0.25, 0.75]
    q = v.fiber_projection(np.zeros(2))
    # Fiber average of the two axis projections with weights 1/4 and 3/4.
    assert np.allclose(q, np.diag([0.25, 0.75]))


def test_restrict_subset_scaled():
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    planes = np.repeat(_proj(2, [0])[None], 3, axis=0)
    v = DiscreteVarifold(1, 2, pos, planes, np.array([1.0, 2.0, 4.0]))
    left = v.restrict(lambda x: x[0] < 1.5)
    assert left.total_weight == 3.0 and len(left) == 2
    sub = v.subset([2])
    assert sub.total_weight == 4.0
    big = v.scaled(3.0)
    assert np.allclose(big.positions, 3.0 * pos)
    assert big.total_weight == pytest.approx(3.0 * v.total_weight)
    surf = DiscreteVarifold(2, 3, np.zeros((1, 3)),
                            _proj(3, [0, 1])[None], [1.0]).scaled(2.0)
    assert surf.total_weight == pytest.approx(4.0)  # lam^m with m = 2


def test_empty_varifold():
    v = DiscreteVarifold(1, 2, [], [], [])
    assert len(v) == 0 and v.total_weight == 0.0
    assert len(v.restrict(lambda x: True)) == 0


def test_csv_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(11)
    pos = rng.normal(size=(23, 2))
    planes = np.repeat(_proj(2, [1])[None], 23, axis=0)
    w = rng.uniform(0.5, 2.0, 23)
    v = DiscreteVarifold(1, 2, pos, planes, w)
    path = tmp_path / "v.csv"
    save_csv(v, path)
    back = load_csv(path)
    assert back.m == v.m and back.n == v.n
    assert np.array_equal(back.positions, v.positions)
    assert np.array_equal(back.planes, v.planes)
    assert np.array_equal(back.weights, v.weights)
    path2 = tmp_path / "v2.csv"
    save_csv(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_csv_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        load_csv(path)
