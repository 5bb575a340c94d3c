import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_search
from twoprimes.errors import DomainError, ResourceError
from twoprimes.s0calc import validate_config
from twoprimes.search import count_n, default_L, density_report, find_solutions, verify

SQ3, SQ2 = math.sqrt(3), math.sqrt(2)


def _keys(res):
    return {r.key for r in res.solutions}


def _cfg(eta="0.5", eps="0.2", **kw):
    raw = {"lambda1": "sqrt(3)", "lambda2": "-sqrt(2)", "mus": ["sqrt(3)/3", "-sqrt(2)/2"],
           "eta": eta, "epsilon": eps}
    raw.update(kw)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return validate_config(raw, mode="search")


def test_reference_solution(reference_cfg):
    res = find_solutions(reference_cfg, 10, 2)
    first = res.solutions[0]
    assert first.key == (2, 2, (1, 1))
    assert first.value.startswith("0.37616146639772")
    assert res.undecided == []


@pytest.mark.parametrize("X, L", [(10, 1), (60, 2), (200, 3), (500, 4)])
def test_matches_naive_loop(reference_cfg, X, L):
    ours = _keys(find_solutions(reference_cfg, X, 2, L=L))
    assert ours == naive_search(SQ3, -SQ2, [SQ3 / 3, -SQ2 / 2], 0.0, 0.5, X, 0.2, L)


def test_matches_naive_loop_with_three_powers_and_shift():
    cfg = _cfg(eta="0.3", mus=["sqrt(3)/3", "-sqrt(2)/2", "0.25"], gamma="0.1")
    ours = _keys(find_solutions(cfg, 150, 3, L=3))
    ref = naive_search(SQ3, -SQ2, [SQ3 / 3, -SQ2 / 2, 0.25], 0.1, 0.3, 150, 0.2, 3)
    assert ours == ref


def test_lexicographic_order_and_limit(reference_cfg):
    full = find_solutions(reference_cfg, 300, 2, L=3).solutions
    assert [r.key for r in full] == sorted(r.key for r in full)
    head = find_solutions(reference_cfg, 300, 2, limit=5, L=3)
    assert [r.key for r in head.solutions] == [r.key for r in full[:5]]
    assert head.truncated


def test_every_record_reverifies(reference_cfg):
    res = find_solutions(reference_cfg, 400, 2)
    for r in res.solutions:
        assert verify(r, reference_cfg, precision=60)
        assert float(r.residual) < 0.5
        assert 0.2 * 400 <= r.p1 <= 400 and 0.2 * 400 <= r.p2 <= 400
        assert all(1 <= m <= res.L for m in r.ms)


@given(st.sampled_from(["0.05", "0.1", "0.2", "0.3"]), st.sampled_from(["0.35", "0.45", "0.5"]))
def test_nesting_in_eta(small, big):
    a = _keys(find_solutions(_cfg(eta=small), 300, 2, L=3))
    b = _keys(find_solutions(_cfg(eta=big), 300, 2, L=3))
    assert a <= b


def test_monotone_in_range(reference_cfg):
    counts = [count_n(reference_cfg, X, 2, L=4)["count"] for X in (100, 200, 400)]
    assert counts == sorted(counts)


def test_tiny_eta_gives_nothing():
    assert find_solutions(_cfg(eta="1e-9"), 10, 2).solutions == []


def test_empty_prime_range():
    cfg = _cfg(eps="0.9")
    assert count_n(cfg, 10, 2)["count"] == 0


def test_count_agrees_with_listing(reference_cfg):
    assert count_n(reference_cfg, 300, 2)["count"] == len(find_solutions(reference_cfg, 300, 2).solutions)


def test_parallel_result_is_identical(reference_cfg):
    one = find_solutions(reference_cfg, 400, 2, jobs=1)
    two = find_solutions(reference_cfg, 400, 2, jobs=2)
    assert one.solutions == two.solutions


def test_exact_boundary_is_not_a_solution():
    # value = p1 - p2 + 0.5*2^m1 - 0.25*2^m2 with exact decimal coefficients
    cfg = _cfg(lambda1="1", lambda2="-1", mus=["0.5", "-0.25"], eta="0.5", gamma="0")
    res = find_solutions(cfg, 10, 2, L=2)
    keys = _keys(res)
    assert (2, 2, (1, 2)) in keys  # 0 + 1 - 1 = 0
    assert (2, 3, (2, 2)) in keys  # -1 + 2 - 1 = 0
    assert (2, 2, (1, 1)) not in keys  # 0 + 1 - 0.5 = 0.5, equal to eta
    assert (2, 3, (2, 1)) not in keys  # -1 + 2 - 0.5 = 0.5
    assert res.undecided == []


def test_default_L_and_validation(reference_cfg):
    assert default_L(reference_cfg, 10, 2) == 1
    assert default_L(reference_cfg, 10**4, 2) == 9
    with pytest.raises(ResourceError):
        find_solutions(reference_cfg, 3 * 10**4, 2)
    with pytest.raises(DomainError):
        find_solutions(reference_cfg, 100, 3)


def test_density_report(reference_cfg):
    rows = density_report(reference_cfg, [100, 1000, 10000], 2)
    assert rows[-1]["count"] >= rows[0]["count"]
    for r in rows:
        assert r["reference"] == pytest.approx(0.5 * r["X"])
        if r["count"]:
            assert 0 < r["ratio"] < math.inf
