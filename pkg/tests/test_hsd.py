import random

import pytest

from hsinteg import (HSDerivation, TruncatedSeries, UsageError, groebner,
                     is_logarithmic, parse_polynomial, sparse_assemble,
                     verify_leibniz)

from propsuites import RING_NAMES, rand_hsd, rand_poly, ring_ctx


def make(ctx, table, n):
    rows = [[parse_polynomial(s, ctx) for s in row] for row in table]
    return HSDerivation.from_coefficients(ctx, rows, n)


def test_constructor_validation():
    ctx = ring_ctx("Q")
    with pytest.raises(UsageError):
        HSDerivation(ctx, [])  # one image per variable
    bad = TruncatedSeries(ctx, [ctx.one, ctx.zero])  # constant term must be x_r
    good = TruncatedSeries(ctx, [ctx.variable(1), ctx.zero])
    with pytest.raises(UsageError):
        HSDerivation(ctx, [bad, good])


def test_identity_and_apply():
    ctx = ring_ctx("F5")
    D = HSDerivation.identity(ctx, 3)
    assert D.is_identity() and D.ell() == 3
    f = parse_polynomial("x^2*y + 3", ctx)
    assert D.apply(f) == TruncatedSeries.constant(ctx, f, 3)


def test_group_axioms_random():
    rng = random.Random(101)
    for name in RING_NAMES:
        ctx = ring_ctx(name)
        for _ in range(25):
            n = rng.randrange(1, 6)
            D, E, F = (rand_hsd(rng, ctx, n) for _ in range(3))
            assert D.compose(E).compose(F) == D.compose(E.compose(F))
            ident = HSDerivation.identity(ctx, n)
            assert D.compose(ident) == D and ident.compose(D) == D
            assert D.compose(D.invert()).is_identity()
            assert D.invert().compose(D).is_identity()
            assert D.invert().invert() == D


def test_components_satisfy_leibniz():
    rng = random.Random(103)
    for name in RING_NAMES:
        ctx = ring_ctx(name)
        for _ in range(50):
            D = rand_hsd(rng, ctx, rng.randrange(1, 5))
            f, g = rand_poly(rng, ctx), rand_poly(rng, ctx)
            assert verify_leibniz(D, f, g)
            assert D.apply(f * g) == D.apply(f) * D.apply(g)


def test_compose_is_convolution_of_components():
    # (D compose E)_l(f) = sum_{i+j=l} D_i(E_j(f))
    rng = random.Random(107)
    ctx = ring_ctx("F3")
    for _ in range(30):
        n = rng.randrange(1, 4)
        D, E = rand_hsd(rng, ctx, n), rand_hsd(rng, ctx, n)
        f = rand_poly(rng, ctx, maxdeg=3)
        C = D.compose(E)
        for l in range(n + 1):
            acc = ctx.zero
            for i in range(l + 1):
                acc = acc + D.component(i, E.component(l - i, f))
            assert C.component(l, f) == acc


def test_truncate_and_extend():
    rng = random.Random(109)
    ctx = ring_ctx("Z")
    D = rand_hsd(rng, ctx, 4)
    T = D.truncate(2)
    assert T.length == 2
    assert all(T.coefficient(r, i) == D.coefficient(r, i)
               for r in range(2) for i in range(3))
    E = T.taylor_extend(5)
    assert E.length == 5
    assert all(E.coefficient(r, i).is_zero() for r in range(2) for i in (3, 4, 5))
    with pytest.raises(UsageError):
        D.truncate(5)
    with pytest.raises(UsageError):
        D.taylor_extend(3)


def test_dot_action_and_ramify():
    rng = random.Random(113)
    for name in ["F2", "Q", "Z"]:
        ctx = ring_ctx(name)
        for _ in range(25):
            n = rng.randrange(1, 4)
            D = rand_hsd(rng, ctx, n)
            a = rand_poly(rng, ctx, maxdeg=1, max_terms=2)
            m = rng.randrange(1, 4)
            # substituting t -> a t then t -> t^m agrees with t -> a^m t after t -> t^m
            assert D.ramify(m).dot_action(a) == D.dot_action(a ** m).ramify(m)
            R = D.ramify(m)
            assert R.length == n * m
            for r in range(2):
                for i in range(n + 1):
                    assert R.coefficient(r, i * m) == D.coefficient(r, i)
            assert D.dot_action(ctx.one) == D
            # the dot action by a is multiplicative in a
            b = rand_poly(rng, ctx, maxdeg=1, max_terms=2)
            assert D.dot_action(a).dot_action(b) == D.dot_action(a * b)


def test_ell():
    ctx = ring_ctx("Q")
    D = make(ctx, [["0", "0", "x"], ["0", "0", "0"]], 3)
    assert D.ell() == 2
    assert HSDerivation.identity(ctx, 4).ell() == 4
    rng = random.Random(127)
    for _ in range(30):
        n = rng.randrange(1, 5)
        D, E = rand_hsd(rng, ctx, n), rand_hsd(rng, ctx, n)
        assert D.compose(E).ell() >= min(D.ell(), E.ell())
        assert D.invert().ell() == D.ell()


def test_taylor_coeffs_reconstruct_components():
    rng = random.Random(131)
    for name in RING_NAMES:
        ctx = ring_ctx(name)
        for _ in range(25):
            n = rng.randrange(1, 5)
            D = rand_hsd(rng, ctx, n)
            i = rng.randrange(1, n + 1)
            form = D.taylor_coeffs(i)
            f = rand_poly(rng, ctx, maxdeg=3, max_terms=4)
            assert form.apply(f) == D.component(i, f)
            # multi-indices are bounded by the component index
            assert all(0 < sum(a) <= i for a in form.coeffs)


def test_taylor_coeffs_one_variable_example():
    # x -> x + ct: C_alpha for D_2 must be c^2 on alpha=(2,) ... classic square
    ctx = ring_ctx("Z", ("x",))
    c = parse_polynomial("x + 1", ctx)
    D = HSDerivation.from_images([TruncatedSeries(ctx, [ctx.variable(0), c, ctx.zero])])
    form = D.taylor_coeffs(2)
    assert form.coeffs[(2,)] == c * c
    f = parse_polynomial("x^3", ctx)
    assert D.component(2, f) == (c * c) * f.taylor_coefficient((2,))


def test_is_logarithmic():
    ctx = ring_ctx("F2")
    f = parse_polynomial("x^2 + y^3", ctx)
    gb = groebner([f])
    # x -> x + xt, y -> y + yt^2 preserves (f); x -> x + t does not
    good = make(ctx, [["x", "0"], ["0", "y"]], 2)
    bad = make(ctx, [["1", "0"], ["0", "0"]], 2)
    assert is_logarithmic(good, [f], gb)
    assert not is_logarithmic(bad, [f], gb)


def test_sparse_assemble():
    ctx = ring_ctx("F3")
    D = make(ctx, [["x"], ["0"]], 1)
    delta = [parse_polynomial("y", ctx), parse_polynomial("x", ctx)]
    S = sparse_assemble(D, [delta], 2, 3)
    # D_1 lands in slot 2, the extra derivation in slot q*m+1 = 3
    assert S.length == 3
    assert S.coefficient(0, 2) == parse_polynomial("x", ctx)
    assert S.coefficient(0, 3) == parse_polynomial("y", ctx)
    assert S.coefficient(1, 3) == parse_polynomial("x", ctx)
    assert S.coefficient(0, 1).is_zero()
    with pytest.raises(UsageError):
        sparse_assemble(D, [delta], 1, 3)  # m must exceed 1
    with pytest.raises(UsageError):
        sparse_assemble(D, [delta], 3, 2)  # n < m
