import numpy as np
import pytest
from hypothesis import given, strategies as st

from orderfinding.permutations import (
    IDENTITY,
    OracleSpec,
    Permutation,
    all_permutations,
    compose,
    format_cycles,
    oracle_unitary,
    order_of,
    parse_permutation,
    permutation_matrix,
    power,
)

PERMS = all_permutations()
perm_strategy = st.sampled_from(PERMS)


def test_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1, 2))
    with pytest.raises(ValueError):
        OracleSpec(IDENTITY, 4)


def test_order_examples():
    assert order_of(IDENTITY, 0) == 1
    assert order_of(parse_permutation("(0 1)(2 3)"), 2) == 2
    three_cycle = parse_permutation("(0 1 2)")
    assert order_of(three_cycle, 3) == 1
    assert order_of(three_cycle, 0) == 3


def test_power_examples():
    assert power(parse_permutation("(0 1 2 3)"), 0) == IDENTITY
    assert power(parse_permutation("(0 1 2 3)"), 2) == parse_permutation("(0 2)(1 3)")
    for pi in PERMS:
        assert power(pi, 12) == IDENTITY  # orders divide lcm(1,2,3,4)


@given(perm_strategy, st.integers(0, 12), st.integers(0, 12))
def test_power_additivity(pi, a, b):
    assert power(pi, a + b) == compose(power(pi, a), power(pi, b))


@given(perm_strategy, st.integers(0, 3))
def test_cycle_mates_share_order(pi, y):
    assert order_of(pi, y) == order_of(pi, pi(y))


def test_oracle_identity_is_identity():
    assert np.allclose(oracle_unitary(IDENTITY), np.eye(32), atol=1e-12)


def test_oracle_unitary_is_permutation_matrix_for_all():
    for pi in PERMS:
        u = oracle_unitary(pi)
        assert np.allclose(u.conj().T @ u, np.eye(32), atol=1e-12)
        assert np.all((np.abs(u) < 1e-12) | (np.abs(u - 1) < 1e-12))


def _brute_force_oracle(pi: Permutation) -> np.ndarray:
    # independent route: powers by repeated composition, matrix assembled
    # entry by entry from |x>|y> -> |x>|pi^x(y)>
    u = np.zeros((32, 32))
    for x in range(8):
        sigma = IDENTITY
        for _ in range(x):
            sigma = compose(pi, sigma)
        for y in range(4):
            u[4 * x + sigma(y), 4 * x + y] = 1.0
    return u


def test_oracle_matches_brute_force_for_four_cycle():
    pi = parse_permutation("(0 1 2 3)")
    assert np.array_equal(oracle_unitary(pi).real, _brute_force_oracle(pi))


def test_oracle_action_exhaustive():
    for pi in PERMS:
        u = oracle_unitary(pi)
        for x in range(8):
            for y in range(4):
                col = u[:, 4 * x + y]
                expected = np.zeros(32)
                expected[4 * x + power(pi, x)(y)] = 1.0
                assert np.allclose(col, expected, atol=1e-12)


def test_stage_product_equals_direct_sum_construction():
    for pi in PERMS:
        direct = np.zeros((32, 32), dtype=complex)
        for x in range(8):
            block = permutation_matrix(power(pi, x))
            direct[4 * x : 4 * x + 4, 4 * x : 4 * x + 4] = block
        assert np.allclose(oracle_unitary(pi), direct, atol=1e-12)


def test_cycle_notation_round_trip():
    for pi in PERMS:
        assert parse_permutation(format_cycles(pi)) == pi


def test_parse_image_list_and_errors():
    assert parse_permutation("1,0,3,2") == parse_permutation("(0 1)(2 3)")
    assert parse_permutation("()") == IDENTITY
    for bad in ("(0 1", "(0 5)", "(0 1)(1 2)", "0,1,2", "(0 0)"):
        with pytest.raises(ValueError):
            parse_permutation(bad)
