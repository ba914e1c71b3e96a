import itertools

import pytest

from conftest import random_expr, random_moebius, random_poly
from qtk import errors, field_make
from qtk.gf import embed
from qtk.moebius import MoebiusMap, apply_post, apply_pre, expr_parse, \
    reduce_canonical, sigma_form
from qtk.poly import (Polynomial, enumerate_monic, enumerate_monic_irreducible,
                      is_irreducible, parse_poly)
from qtk.transform import (DicksonParams,
                           count_preserving_bijections_check, dickson,
                           is_invariant_generalized, is_sigma_self_reciprocal,
                           reconstruct, reconstruct_dickson_sum,
                           roots_orbit_check, transform, transport_back,
                           transport_forward, _reconstruct_closed_form,
                           _reconstruct_linear_solve)


def P(spec, text):
    return parse_poly(spec, text)


def test_transform_examples():
    F3 = field_make(3)
    t = transform(P(F3, "x^2+1"), expr_parse(F3, "1,0,1 / 0,1"), monic=True)
    assert t.result == P(F3, "x^4+1") and not t.degree_dropped
    t = transform(Polynomial.x(F3), expr_parse(F3, "1 / 0,0,1"))
    assert t.result == Polynomial.one(F3) and t.degree_dropped
    # drop happens exactly when g2 = alpha * h2 for f = x - alpha
    r = expr_parse(F3, "2,0,1 / 2,1,1")
    t = transform(P(F3, "x+2"), r)  # alpha = 1 = g2/h2
    assert t.degree_dropped
    with pytest.raises(errors.ZeroPolynomial):
        transform(Polynomial.zero(F3), r)


def test_transform_multiplicative(fields, rng):
    for spec in fields.values():
        for _ in range(15):
            r = random_expr(spec, rng)
            f1 = random_poly(spec, rng.randrange(1, 4), rng)
            f2 = random_poly(spec, rng.randrange(1, 4), rng)
            t1 = transform(f1, r)
            t2 = transform(f2, r)
            t12 = transform(f1 * f2, r)
            if t1.degree_dropped or t2.degree_dropped:
                continue
            assert t12.result.monic() == (t1.result * t2.result).monic()


def test_sigma_self_reciprocal_examples():
    F3 = field_make(3)
    assert is_sigma_self_reciprocal(P(F3, "x^4+1"), F3.one)
    assert is_sigma_self_reciprocal(P(F3, "x^2+2"), F3.element(2))
    assert not is_sigma_self_reciprocal(P(F3, "x^2+x+2"), F3.one)
    with pytest.raises(errors.OddDegree):
        is_sigma_self_reciprocal(P(F3, "x^3+1"), F3.one)
    with pytest.raises(errors.ZeroSigma):
        is_sigma_self_reciprocal(P(F3, "x^2+1"), F3.zero)


def test_sigma_self_reciprocal_is_the_substitution_identity(fields, rng):
    # the coefficient test must agree with x^(2n) F(sigma/x) == sigma^n F(x)
    from qtk.poly import compose_fraction
    for spec in fields.values():
        nonzero = [e for e in spec.elements() if not e.is_zero()]
        for _ in range(20):
            F = random_poly(spec, rng.choice([2, 4, 6]), rng)
            sigma = rng.choice(nonzero)
            n = int(F.degree) // 2
            lhs = compose_fraction(F.reciprocal(), Polynomial.x(spec),
                                   Polynomial.one(spec))
            # x^(2n) F(sigma/x) = sum b_k sigma^k x^(2n-k)
            subst = Polynomial(spec, [F.coeff(2 * n - i) * sigma ** (2 * n - i)
                                      for i in range(2 * n + 1)])
            rhs = F.scale(sigma ** n)
            assert is_sigma_self_reciprocal(F, sigma) == (subst == rhs)


def test_lemma_invariance_equivalence_exhaustive(fields):
    # the invariant monic F of degree 2n are exactly the images of the q^n
    # monic f of degree n, and reconstruct inverts each one; exhaustive for
    # q <= 5 and 2n <= 8
    from qtk.gf import least_nonsquare
    for q in (2, 3, 4, 5):
        spec = fields[q]
        sigmas = [spec.one] if spec.p == 2 \
            else [spec.one, least_nonsquare(spec)]
        for sigma in sigmas:
            r = sigma_form(sigma)
            for d in (2, 4, 6, 8):
                invariant = {F for F in enumerate_monic(spec, d)
                             if is_sigma_self_reciprocal(F, sigma)}
                images = {transform(f, r).result
                          for f in enumerate_monic(spec, d // 2)}
                assert invariant == images
                for F in invariant:
                    f = reconstruct(F, sigma)
                    assert transform(f, r).result == F
            # the predicate failing means no pre-image exists
            bad = P(spec, "x^2+x") + Polynomial.one(spec).scale(sigma)
            if not is_sigma_self_reciprocal(bad, sigma):
                with pytest.raises(errors.NotInvariant):
                    reconstruct(bad, sigma)


def test_generalized_invariance_examples():
    F3 = field_make(3)
    a, b, c = F3.one, F3.zero, -F3.one
    assert is_invariant_generalized(P(F3, "x^2+1"), a, b, c)
    assert not is_invariant_generalized(P(F3, "x^2+x+2"), a, b, c)
    with pytest.raises(errors.SingularTriple):
        is_invariant_generalized(P(F3, "x^2+1"), F3.one, F3.one, F3.one)
    F2 = field_make(2)
    with pytest.raises(errors.Char2Degenerate):
        is_invariant_generalized(P(F2, "x^2+1"), F2.zero, F2.one, F2.zero)


def test_generalized_invariance_reduces_to_sigma_form(fields, rng):
    # (a, b, c) = (1, 0, -sigma) recovers the sigma test
    for spec in fields.values():
        nonzero = [e for e in spec.elements() if not e.is_zero()]
        for _ in range(15):
            F = random_poly(spec, rng.choice([2, 4]), rng)
            sigma = rng.choice(nonzero)
            assert is_invariant_generalized(F, spec.one, spec.zero, -sigma) \
                == is_sigma_self_reciprocal(F, sigma)


def test_transform_images_are_invariant(fields, rng):
    # forward direction: f_R is invariant under the triple of R
    for spec in fields.values():
        for _ in range(15):
            r = random_expr(spec, rng)
            if spec.p == 2 and r.g.coeff(1).is_zero() and r.h.coeff(1).is_zero():
                continue
            f = random_poly(spec, rng.randrange(1, 4), rng)
            t = transform(f, r)
            if t.degree_dropped:
                continue
            a, b, c = r.abc
            assert is_invariant_generalized(t.result, a, b, c)


def test_roots_orbit_examples():
    F3 = field_make(3)
    a, b, c = F3.one, F3.zero, -F3.one
    assert roots_orbit_check(P(F3, "x^2+1"), a, b, c)
    assert not roots_orbit_check(P(F3, "x^2+x+2"), a, b, c)
    assert roots_orbit_check(P(F3, "x^4+2*x^2+1"), a, b, c)  # (x^2+1)^2
    with pytest.raises(errors.NotCoprime):
        roots_orbit_check(P(F3, "x^2+2"), a, b, c)  # x^2 - 1 shares roots


def test_roots_orbit_agrees_with_identity(fields, rng):
    for q in (2, 3, 4, 5, 9):
        spec = fields[q]
        nonzero = [e for e in spec.elements() if not e.is_zero()]
        for _ in range(8):
            F = random_poly(spec, rng.choice([2, 4]), rng)
            while True:
                a, b, c = (rng.choice(list(spec.elements())) for _ in range(3))
                if not (b * b - a * c).is_zero() \
                        and not (spec.p == 2 and a.is_zero() and c.is_zero()):
                    break
            fixed = Polynomial(spec, [c, -(b + b), a])
            from qtk.poly import gcd as pgcd
            if fixed.degree >= 1 and pgcd(F, fixed).degree > 0:
                continue
            try:
                orbit = roots_orbit_check(F, a, b, c, size_bound=3 ** 8)
            except errors.SizeBoundExceeded:
                continue
            assert orbit == is_invariant_generalized(F, a, b, c)


def test_dickson_examples():
    F7 = field_make(7)
    assert dickson(DicksonParams(1, F7.one)) == Polynomial.x(F7)
    a = F7.element(3)
    assert dickson(DicksonParams(2, a)) == P(F7, "x^2+1")  # y^2 - 6
    assert dickson(DicksonParams(3, F7.one)) == P(F7, "x^3+4*x")  # y^3 - 3y
    assert dickson(DicksonParams(0, F7.one)) == P(F7, "2")
    F2 = field_make(2)
    assert dickson(DicksonParams(0, F2.one)).is_zero()  # constant 2 vanishes


def test_dickson_functional_equation(fields):
    # D_n(t + a/t, a) = t^n + (a/t)^n over GF(q^2)
    for q, ext in ((2, (2, 2)), (3, (3, 2)), (4, (2, 4)), (5, (5, 2))):
        spec = fields[q]
        big = field_make(*ext)
        for a in spec.elements():
            if a.is_zero():
                continue
            a_big = embed(a, big)
            for n in range(7):
                D = dickson(DicksonParams(n, a))
                for t in big.elements():
                    if t.is_zero():
                        continue
                    assert D(t + a_big / t) == t ** n + (a_big / t) ** n


def test_reconstruct_examples():
    F3 = field_make(3)
    assert reconstruct(P(F3, "x^4+1"), F3.one) == P(F3, "x^2+1")
    assert reconstruct(P(F3, "x^2+2"), F3.element(2)) == Polynomial.x(F3)
    with pytest.raises(errors.NotInvariant):
        reconstruct(P(F3, "x^2+x+2"), F3.one)


def test_reconstruct_roundtrip(fields, rng):
    for spec in fields.values():
        nonzero = [e for e in spec.elements() if not e.is_zero()]
        for _ in range(25):
            sigma = rng.choice(nonzero)
            f = random_poly(spec, rng.randrange(1, 7), rng, monic=True)
            F = transform(f, sigma_form(sigma)).result
            assert reconstruct(F, sigma) == f
            assert reconstruct_dickson_sum(F, sigma) == f


def test_reconstruct_solvers_agree_in_odd_char(fields, rng):
    for q in (3, 5, 7, 9):
        spec = fields[q]
        nonzero = [e for e in spec.elements() if not e.is_zero()]
        for _ in range(20):
            sigma = rng.choice(nonzero)
            f = random_poly(spec, rng.randrange(1, 6), rng)
            F = transform(f, sigma_form(sigma)).result
            assert _reconstruct_closed_form(F, sigma) \
                == _reconstruct_linear_solve(F, sigma)


def test_irreducibility_transport_exhaustive(fields):
    # an irreducible image forces an irreducible input (degree > 1)
    for q in (2, 3):
        spec = fields[q]
        exprs = [expr_parse(spec, "1,0,1 / 0,1"),
                 expr_parse(spec, "1,1,1 / 0,1,1" if q == 2 else "2,1,1 / 1,1")]
        for r in exprs:
            for n in (2, 3):
                for f in enumerate_monic(spec, n):
                    t = transform(f, r, monic=True)
                    if t.degree_dropped:
                        continue
                    if is_irreducible(t.result):
                        assert is_irreducible(f)


def test_transport_roundtrip(fields, rng):
    for spec in fields.values():
        for _ in range(10):
            r = random_expr(spec, rng)
            if spec.p == 2 and r.g.coeff(1).is_zero() and r.h.coeff(1).is_zero():
                continue
            form, trail = reduce_canonical(r)
            for f in itertools.islice(enumerate_monic_irreducible(spec, 2), 4):
                F = transform(f, r, monic=True).result
                if not is_irreducible(F):
                    continue
                F_star = transport_forward(F, trail)
                assert is_sigma_self_reciprocal(F_star, form.sigma)
                f_star = reconstruct(F_star, form.sigma)
                assert transport_back(f_star, trail).monic() == f


def test_count_preserving_bijections():
    F3 = field_make(3)
    r = expr_parse(F3, "1,0,1 / 0,1")
    m = MoebiusMap.affine(F3.one, F3.one)
    assert count_preserving_bijections_check(r, apply_pre(r, m), m, "pre", 2)
    ident = MoebiusMap.identity(F3)
    assert count_preserving_bijections_check(r, r, ident, "post", 2)
    F2 = field_make(2)
    r2 = expr_parse(F2, "1,1,1 / 0,1")
    inv = MoebiusMap.inversion(F2)
    assert count_preserving_bijections_check(r2, apply_post(r2, inv), inv,
                                             "post", 2)
    with pytest.raises(errors.RequiresNGreaterThan1):
        count_preserving_bijections_check(r, r, ident, "post", 1)


def test_count_preserving_randomized(fields, rng):
    for q in (2, 3, 4, 5):
        spec = fields[q]
        for _ in range(5):
            r = random_expr(spec, rng)
            m = random_moebius(spec, rng)
            side = rng.choice(["pre", "post"])
            r2 = apply_pre(r, m) if side == "pre" else apply_post(r, m)
            assert count_preserving_bijections_check(r, r2, m, side, 2)
