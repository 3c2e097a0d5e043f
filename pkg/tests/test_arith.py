import math
from collections import defaultdict

import pytest

from tests.brute import brute_squares, prime_powers
from utils.arith import (
    PrimeFactorization,
    ResidueClass,
    count_squares_mod_pp,
    crt_combine,
    euler_phi,
    factorize,
    factorize_with_sieve,
    is_square_mod_pp,
    legendre,
    mod_inverse,
    primes_3_mod_4,
    smallest_prime_factors,
    sqrt_mod_pp,
    stangl_count,
)
from utils.exceptions import NotCoprimeError, NotPrimeError, PreconditionError


@pytest.mark.parametrize("n, factors", [
    (360, ((2, 3), (3, 2), (5, 1))),
    (1, ()),
    (2**10, ((2, 10),)),
    (97, ((97, 1),)),
])
def test_factorize_examples(n, factors):
    assert factorize(n).factors == factors


def test_factorize_reassembles():
    for n in range(1, 5001):
        assert math.prod(p**e for p, e in factorize(n)) == n


def test_factorize_beyond_trial_division():
    p, q = 1_000_003, 1_000_033
    assert factorize(p * q * q).factors == ((p, 1), (q, 2))


def test_factorize_rejects_zero():
    with pytest.raises(PreconditionError):
        factorize(0)


def test_sieve_matches_factorize():
    spf = smallest_prime_factors(5000)
    for n in range(1, 5001):
        assert factorize_with_sieve(n, spf) == factorize(n)


def test_factorization_validates():
    with pytest.raises(PreconditionError):
        PrimeFactorization(12, ((2, 2), (3, 2)))
    with pytest.raises(PreconditionError):
        PrimeFactorization(12, ((3, 1), (2, 2)))
    with pytest.raises(PreconditionError):
        PrimeFactorization(16, ((4, 2),))


@pytest.mark.parametrize("residues, expected", [
    ([ResidueClass(1, 4), ResidueClass(2, 9)], ResidueClass(29, 36)),
    ([ResidueClass(0, 5)], ResidueClass(0, 5)),
    ([ResidueClass(1, 2), ResidueClass(1, 3), ResidueClass(1, 5)], ResidueClass(1, 30)),
])
def test_crt_combine(residues, expected):
    assert crt_combine(residues) == expected


def test_crt_rejects_shared_factor():
    with pytest.raises(NotCoprimeError):
        crt_combine([ResidueClass(1, 4), ResidueClass(1, 6)])


def test_residue_class_bounds():
    assert ResidueClass.of(-1, 7) == ResidueClass(6, 7)
    with pytest.raises(PreconditionError):
        ResidueClass(7, 7)


def test_legendre_examples():
    assert legendre(1, 101) == 1
    assert legendre(2, 7) == 1
    assert legendre(14, 7) == 0
    assert legendre(3, 5) == -1


@pytest.mark.parametrize("p", [2, 9, 1])
def test_legendre_needs_odd_prime(p):
    with pytest.raises(NotPrimeError):
        legendre(1, p)


def test_character_sum_identity():
    for p in range(3, 101, 2):
        if factorize(p).factors != ((p, 1),):
            continue
        for a in range(1, p):
            assert sum(legendre(i * i - a, p) for i in range(p)) == -1


def test_legendre_multiplicative():
    for p in (3, 7, 11, 13, 29):
        for a in range(1, p):
            for b in range(1, p):
                assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


def test_is_square_examples():
    assert all(is_square_mod_pp(17, 2, t) for t in range(1, 21))
    assert not is_square_mod_pp(3, 5, 1)
    for k in range(32):
        assert is_square_mod_pp(k * k + 3, 2, 5) == (k % 16 in (1, 15))


@pytest.mark.parametrize("t", range(5, 13))
def test_shifted_odd_squares_mod_two_powers(t):
    # k^2 + 3 + 8m is a square mod 2^t exactly when k = +-(4r + 1) mod 16, r = m mod 4
    q = 2**t
    for m in range(2 ** (t - 3)):
        r = m % 4
        hits = {(4 * r + 1) % 16, -(4 * r + 1) % 16}
        for k in range(q):
            assert is_square_mod_pp(k * k + 3 + 8 * m, 2, t) == (k % 16 in hits), (k, m, t)


def test_is_square_gauss_form():
    for k in range(4):
        for n in range(20):
            for t in range(1, 21):
                assert is_square_mod_pp(4**k * (8 * n + 1), 2, t)


def test_is_square_matches_brute_force():
    for p, t in prime_powers(600):
        q = p**t
        squares = brute_squares(q)
        for a in range(q):
            assert is_square_mod_pp(a, p, t) == (a in squares), (a, p, t)


@pytest.mark.parametrize("a, p, t, roots", [
    (2, 7, 1, [3, 4]),
    (17, 2, 5, [7, 9, 23, 25]),
    (3, 5, 2, []),
    (1, 2, 1, [1]),
    (5, 2, 2, [1, 3]),
])
def test_sqrt_examples(a, p, t, roots):
    assert sqrt_mod_pp(a, p, t) == roots


def test_sqrt_matches_brute_force():
    for p, t in prime_powers(2000):
        q = p**t
        roots = defaultdict(list)
        for x in range(q):
            roots[x * x % q].append(x)
        for a in range(1, q):
            if a % p:
                assert sqrt_mod_pp(a, p, t) == roots.get(a, []), (a, p, t)


def test_sqrt_needs_unit():
    with pytest.raises(NotCoprimeError):
        sqrt_mod_pp(14, 7, 2)


@pytest.mark.parametrize("p, t, count", [(3, 1, 2), (3, 2, 4), (2, 4, 4)])
def test_count_squares_examples(p, t, count):
    assert count_squares_mod_pp(p, t) == count
    assert stangl_count(p, t) == count


def test_count_squares_matches_brute_force():
    for p, t in prime_powers(4096):
        expected = len(brute_squares(p**t))
        assert count_squares_mod_pp(p, t) == expected
        assert stangl_count(p, t) == expected


def test_small_helpers():
    assert euler_phi(1024) == 512
    assert euler_phi(2304) == 768
    assert mod_inverse(3, 7) == 5
    with pytest.raises(NotCoprimeError):
        mod_inverse(6, 9)
    assert primes_3_mod_4(5) == [3, 7, 11, 19, 23]
