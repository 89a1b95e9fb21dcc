import pytest

from cyldom.bounds import lower_bound_from_L
from cyldom.errors import BoundsError, EncodingError
from cyldom.oracle import (
    CylinderDims,
    VertexSet,
    almost_dominating_sets,
    brute_force_gamma,
    brute_force_wasted_min,
    closed_neighborhood,
    decode_words,
    encode_words,
    is_almost_dominating,
    is_dominating,
    outer_wasted,
    wasted,
)
from cyldom.scan import scan_L


def test_neighbourhood_sizes():
    inner = VertexSet.of(3, 5, [(1, 2)])
    assert len(closed_neighborhood(inner)) == 5
    top = VertexSet.of(3, 5, [(0, 0)])
    assert closed_neighborhood(top).members == {(0, 0), (0, 4), (0, 1), (1, 0)}
    pair = VertexSet.of(3, 5, [(1, 1), (1, 2)])
    assert len(closed_neighborhood(pair)) == 8
    assert wasted(pair) == 2


def test_outer_neighbourhood_adds_row_below():
    s = VertexSet.of(2, 4, [(1, 0)])
    assert (2, 0) in closed_neighborhood(s, outer=True)
    assert len(closed_neighborhood(s, outer=True)) == 5


def test_is_dominating():
    assert is_dominating(VertexSet.of(2, 4, [(0, 0), (1, 2)]))
    assert not is_dominating(VertexSet.of(2, 4, [(0, 0), (0, 2)]))


def _gamma_p2(n):
    return -(-n // 2) + (1 if n % 4 == 2 else 0)


@pytest.mark.parametrize("n", range(3, 13))
def test_gamma_two_rows(n):
    assert brute_force_gamma(CylinderDims(2, n)) == _gamma_p2(n)


def test_gamma_examples():
    assert brute_force_gamma(CylinderDims(2, 4)) == 2
    # 15 vertices and no perfect code, so 3 is out of reach
    assert brute_force_gamma(CylinderDims(3, 5)) == 4


def test_brute_force_limits():
    with pytest.raises(BoundsError):
        brute_force_gamma(CylinderDims(5, 5))
    with pytest.raises(BoundsError):
        brute_force_wasted_min(4, 5)
    with pytest.raises(BoundsError):
        CylinderDims(1, 5)
    with pytest.raises(BoundsError):
        CylinderDims(3, 2)


def test_wasted_min_example():
    res = brute_force_wasted_min(2, 4)
    assert res.wasted == 1
    assert sorted(res.set) == [(0, 0), (1, 2)]
    assert is_almost_dominating(res.set)
    assert outer_wasted(res.set) == 1
    assert res.closed_neighborhood_size == 9


def test_encode_decode_round_trip():
    s = VertexSet.of(2, 4, [(0, 0), (1, 2)])
    words = encode_words(s)
    assert [str(w) for w in words] == ["01", "12", "10", "21"]
    assert decode_words(words) == s


def test_encode_names_undominated_column():
    with pytest.raises(EncodingError, match="column 2"):
        encode_words(VertexSet.of(2, 4, [(0, 0)]))


def test_decode_rejects_bad_sequences():
    with pytest.raises(EncodingError):
        decode_words(["00", "22", "00"])
    with pytest.raises(EncodingError):
        decode_words(["00", "00"])
    with pytest.raises(EncodingError):
        decode_words(["00", "000", "00"])


@pytest.fixture(scope="module")
def l_two_rows():
    return scan_L(2, 6)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_strip_bound_holds_on_small_cylinders(n, l_two_rows):
    # two border strips of depth 2 inside P_4 x C_n
    dims = CylinderDims(4, n)
    assert brute_force_gamma(dims) >= lower_bound_from_L(dims, l_two_rows)


def test_neighbourhood_spec_examples():
    assert len(closed_neighborhood(VertexSet.of(5, 5, [(2, 2)]))) == 5
    assert len(closed_neighborhood(VertexSet.of(2, 4, [(1, 0), (1, 2)]), outer=True)) == 8


def test_dominating_examples():
    everything = VertexSet.of(2, 3, [(i, j) for i in range(2) for j in range(3)])
    assert is_dominating(everything)
    assert not is_dominating(VertexSet.of(2, 3, []))
    assert is_dominating(VertexSet.of(2, 3, [(0, 0), (1, 1)]))


def test_all_vertices_encode_to_zero_words():
    s = VertexSet.of(3, 4, [(i, j) for i in range(3) for j in range(4)])
    assert [str(w) for w in encode_words(s)] == ["000"] * 4
    assert decode_words(encode_words(s)) == s


def test_wasted_is_nonnegative_on_all_small_sets():
    import itertools

    verts = [(i, j) for i in range(3) for j in range(4)]
    for k in range(len(verts) + 1):
        for combo in itertools.combinations(verts, k):
            assert wasted(VertexSet.of(3, 4, combo)) >= 0


def test_wasted_min_three_columns():
    res = brute_force_wasted_min(2, 3)
    assert res.wasted == 5 * len(res.set) - res.closed_neighborhood_size
    assert is_almost_dominating(res.set)
    assert res.wasted == min(outer_wasted(s) for s in almost_dominating_sets(2, 3))


def test_bijection_and_nd_sum_via_verify():
    from cyldom.verify import verify_properties

    for r, n in [(2, 3), (2, 4), (2, 5)]:
        assert all(verify_properties(r, n).values()), (r, n)
