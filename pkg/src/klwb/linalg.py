"""Exact linear algebra over the rational function field Q(v).

Vectors are plain lists of Qv.  Univariate polynomials over Q(v) (used for
annihilators of operators) are lists of Qv coefficients in ascending degree.
Everything here is deterministic and exact.
"""

from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from .rings import QV_ONE, QV_ZERO, BivarPoly, LaurentPoly, Qv, gcd_laurent


def solve_linear(rows: Sequence[Sequence[Qv]], rhs: Sequence[Qv]) -> Optional[List[Qv]]:
    """One exact solution of A x = b, or None when inconsistent.

    Free variables are set to zero.  The input is not modified.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inv()
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    out = [QV_ZERO] * n
    for i, c in enumerate(pivots):
        out[c] = a[i][n]
    return out


# -- univariate polynomials over Q(v), ascending coefficients ---------------


def qpoly_normalize(p: List[Qv]) -> List[Qv]:
    q = list(p)
    while q and not q[-1]:
        q.pop()
    if q:
        lead = q[-1].inv()
        q = [c * lead for c in q]
    return q


def qpoly_mul(p: Sequence[Qv], q: Sequence[Qv]) -> List[Qv]:
    if not p or not q:
        return []
    out = [QV_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return out


def qpoly_divmod(p: Sequence[Qv], q: Sequence[Qv]):
    q = qpoly_normalize(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [QV_ZERO] * max(0, len(rem) - len(q) + 1)
    while len(rem) >= len(q):
        while rem and not rem[-1]:
            rem.pop()
        if len(rem) < len(q):
            break
        shift = len(rem) - len(q)
        f = rem[-1]
        quot[shift] = quot[shift] + f
        for i, c in enumerate(q):
            rem[shift + i] = rem[shift + i] - f * c
        rem.pop()
    while rem and not rem[-1]:
        rem.pop()
    return quot, rem


def qpoly_gcd(p: Sequence[Qv], q: Sequence[Qv]) -> List[Qv]:
    a = qpoly_normalize(list(p))
    b = qpoly_normalize(list(q))
    while b:
        _, r = qpoly_divmod(a, b)
        a, b = b, qpoly_normalize(r)
    return a


def qpoly_lcm(p: Sequence[Qv], q: Sequence[Qv]) -> List[Qv]:
    if not p:
        return qpoly_normalize(list(q))
    if not q:
        return qpoly_normalize(list(p))
    g = qpoly_gcd(p, q)
    quot, rem = qpoly_divmod(qpoly_mul(p, q), g)
    assert not rem
    return qpoly_normalize(quot)


def _krylov_annihilator(apply_fn, vec: List[Qv]) -> List[Qv]:
    # minimal monic polynomial killing vec under the operator
    dim = len(vec)
    rows = []  # (reduced vector, companion poly, pivot index)
    cur = list(vec)
    k = 0
    while True:
        r = list(cur)
        comp = [QV_ZERO] * k + [QV_ONE]
        for red, c, piv in rows:
            if r[piv]:
                f = r[piv]
                r = [x - f * y for x, y in zip(r, red)]
                comp = [
                    (comp[i] if i < len(comp) else QV_ZERO)
                    - f * (c[i] if i < len(c) else QV_ZERO)
                    for i in range(max(len(comp), len(c)))
                ]
        piv = None
        for i in range(dim):
            if r[i]:
                piv = i
                break
        if piv is None:
            return qpoly_normalize(comp)
        inv = r[piv].inv()
        r = [x * inv for x in r]
        comp = [x * inv for x in comp]
        rows.append((r, comp, piv))
        cur = apply_fn(cur)
        k += 1
        assert k <= dim


def minpoly_operator(apply_fn: Callable[[List[Qv]], List[Qv]], dim: int) -> List[Qv]:
    """Minimal polynomial of a linear operator given by its action on vectors.

    Returns monic coefficients over Q(v) in ascending degree.
    """
    if dim == 0:
        return [QV_ONE]
    m: List[Qv] = []
    for i in range(dim):
        e = [QV_ZERO] * dim
        e[i] = QV_ONE
        ann = _krylov_annihilator(apply_fn, e)
        m = qpoly_lcm(m, ann) if m else ann
        if len(m) - 1 == dim:
            break
    return m


def qpoly_to_bivar(coeffs: Sequence[Qv]) -> BivarPoly:
    """Clear denominators and content to a primitive integral polynomial.

    Normalization: no common Laurent factor among the x-coefficients, the
    least v-exponent across them is zero, and the leading x-coefficient has a
    positive leading v-coefficient.
    """
    cs = qpoly_normalize(list(coeffs))
    if not cs:
        return BivarPoly.zero()
    den = LaurentPoly.one()
    for c in cs:
        g = gcd_laurent(den, c.den)
        extra = c.den.divide_exact(g) if not g.is_zero else c.den
        den = den * extra
    nums = []
    for c in cs:
        q = den.divide_exact(c.den)
        assert q is not None
        nums.append(c.num * q)
    shift = min(p.min_exp for p in nums if not p.is_zero)
    if shift:
        nums = [p.shifted(-shift) for p in nums]
    g = LaurentPoly.zero()
    for p in nums:
        g = gcd_laurent(g, p)
    if not g.is_zero and g != LaurentPoly.one():
        nums = [p.divide_exact(g) for p in nums]
        assert all(p is not None for p in nums)
    lead = nums[-1]
    if lead.coefficient(lead.max_exp) < 0:
        nums = [-p for p in nums]
    return BivarPoly(tuple(nums))


def bivar_divides(d: BivarPoly, f: BivarPoly) -> bool:
    """Whether d divides f over Q(v)[x]."""
    dq = [Qv(c) for c in d.xcoeffs]
    fq = [Qv(c) for c in f.xcoeffs]
    if not dq:
        return not fq
    _, rem = qpoly_divmod(fq, dq)
    return not rem
