"""Torsion character points on the torus with their Weyl orbits.

A point is a vector of rationals mod 1 in fundamental-weight coordinates, so
the pairing with a simple coroot reads off a coordinate.  Each point carries a
reflection subgroup W_L, the subsystem of roots whose coroots pair to zero,
and a Poincare polynomial q_L built from intrinsic lengths.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coxeter import Subsystem, WeylElement, WeylGroup
from .rings import LaurentPoly


class CharacterPoint:
    """Rational vector mod 1 in fundamental-weight coordinates."""

    __slots__ = ("coords", "denominator", "_hash")

    def __init__(self, coords: Iterable):
        cs = tuple(Fraction(c) % 1 for c in coords)
        self.coords = cs
        self.denominator = lcm(*(c.denominator for c in cs)) if cs else 1
        self._hash = hash(cs)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, CharacterPoint) and other.coords == self.coords

    def __lt__(self, other):
        return self.coords < other.coords

    def __le__(self, other):
        return self.coords <= other.coords

    def __hash__(self):
        return self._hash

    def render(self) -> str:
        return ",".join(str(c) for c in self.coords)

    def __repr__(self):
        return "L(%s)" % self.render()


def parse_point(text: str, rank: Optional[int] = None) -> CharacterPoint:
    """Parse "1/2,0" into a point, optionally checking the rank."""
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    pt = CharacterPoint(Fraction(p) for p in parts)
    if rank is not None and pt.rank != rank:
        raise ValueError("expected %d coordinates, got %d" % (rank, pt.rank))
    return pt


def pairing(lam: CharacterPoint, coroot: Sequence[int]) -> Fraction:
    """<lam, coroot> mod 1 for a coroot in simple-coroot coordinates."""
    total = Fraction(0)
    for c, x in zip(lam.coords, coroot):
        total += c * x
    return total % 1


def act_generator(W: WeylGroup, j: int, lam: CharacterPoint) -> CharacterPoint:
    C = W.datum.cartan_matrix
    lj = lam.coords[j]
    if lj == 0:
        return lam
    return CharacterPoint(
        tuple(lam.coords[i] - lj * C[i][j] for i in range(W.rank))
    )


def act(W: WeylGroup, w: WeylElement, lam: CharacterPoint) -> CharacterPoint:
    # w = s_{i1} ... s_{ik} acts with the rightmost letter first
    out = lam
    for j in reversed(w.word):
        out = act_generator(W, j, out)
    return out


def _cache(W: WeylGroup) -> dict:
    got = getattr(W, "_charpoints_cache", None)
    if got is None:
        got = {}
        W._charpoints_cache = got
    return got


def wl_subsystem(W: WeylGroup, lam: CharacterPoint) -> Subsystem:
    """The reflection subgroup of roots on which lam vanishes."""
    cache = _cache(W)
    key = ("wl", lam.coords)
    got = cache.get(key)
    if got is None:
        kernel = [
            k
            for k in range(W.n_positive)
            if pairing(lam, W.root_pairs[k][1]) == 0
        ]
        got = W.reflection_subgroup(kernel)
        # the kernel set is already reflection-closed
        assert not got.closure_added
        cache[key] = got
    return got


class OrbitData:
    """Full W-orbit of a point with per-point W_L data.

    points are sorted with the representative (the least point) first; the
    product of the orbit size and the group-theoretic stabilizer order is the
    group order.
    """

    def __init__(self, W: WeylGroup, lam: CharacterPoint):
        self.group = W
        seen = {lam}
        frontier = [lam]
        while frontier:
            nxt = []
            for p in frontier:
                for j in range(W.rank):
                    q = act_generator(W, j, p)
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        pts = sorted(seen)
        self.points: Tuple[CharacterPoint, ...] = tuple(pts)
        self.representative = pts[0]
        self.stabilizers: Dict[CharacterPoint, Subsystem] = {
            p: wl_subsystem(W, p) for p in pts
        }
        self.w0L: Dict[CharacterPoint, WeylElement] = {
            p: self.stabilizers[p].w0 for p in pts
        }
        rep = self.representative
        self.stabilizer_order = sum(
            1 for w in W.elements if act(W, w, rep) == rep
        )
        assert len(pts) * self.stabilizer_order == W.size

    @property
    def size(self) -> int:
        return len(self.points)

    def index_of(self, p: CharacterPoint) -> int:
        return self.points.index(p)

    def __repr__(self):
        return "Orbit(%s; %d points)" % (self.representative.render(), self.size)

    def to_json(self):
        return {
            "representative": self.representative.render(),
            "points": [p.render() for p in self.points],
            "stabilizer_types": {
                p.render(): self.stabilizers[p].cartan_type for p in self.points
            },
            "w0L": {p.render(): self.w0L[p].word_str for p in self.points},
        }


def orbit(W: WeylGroup, lam: CharacterPoint) -> OrbitData:
    cache = _cache(W)
    probe = cache.get(("orbit_of", lam.coords))
    if probe is not None:
        return probe
    data = OrbitData(W, lam)
    for p in data.points:
        cache[("orbit_of", p.coords)] = data
    return data


def _points_with_denominator(W: WeylGroup, N: int) -> List[CharacterPoint]:
    pts = [()]
    for _ in range(W.rank):
        pts = [p + (Fraction(a, N),) for p in pts for a in range(N)]
    return [CharacterPoint(p) for p in pts]


def orbit_set(
    W: WeylGroup, den_bound: int, mode: str = "le"
) -> Tuple[OrbitData, ...]:
    """All orbits of points with bounded denominator.

    mode "le": every point whose least common denominator is at most the
    bound; mode "dividing": denominator divides the bound exactly.
    """
    if den_bound < 1:
        raise ValueError("denominator bound must be positive")
    if mode == "dividing":
        dens = [den_bound]
    elif mode == "le":
        dens = list(range(1, den_bound + 1))
    else:
        raise ValueError("unknown mode %r" % (mode,))
    seen = set()
    out = []
    for N in dens:
        for p in _points_with_denominator(W, N):
            if p in seen:
                continue
            data = orbit(W, p)
            seen.update(data.points)
            out.append(data)
    out.sort(key=lambda o: o.representative.coords)
    return tuple(out)


NEGATIVE_V2 = "negative_v2"
POSITIVE_V2 = "positive_v2"


def poincare_of_subsystem(sub: Subsystem, convention: str) -> LaurentPoly:
    """Sum of (+-v^2)^length over the subsystem group, intrinsic lengths."""
    if convention not in (NEGATIVE_V2, POSITIVE_V2):
        raise ValueError("unknown sign convention %r" % (convention,))
    sign = -1 if convention == NEGATIVE_V2 else 1
    coeffs: Dict[int, int] = {}
    for l in sub.group.lengths:
        coeffs[2 * l] = coeffs.get(2 * l, 0) + (sign ** l)
    return LaurentPoly(coeffs)


def poincare_q(W: WeylGroup, lam: CharacterPoint, convention: str) -> LaurentPoly:
    return poincare_of_subsystem(wl_subsystem(W, lam), convention)


_cyclotomic_cache: Dict[int, LaurentPoly] = {}


def cyclotomic(e: int) -> LaurentPoly:
    """The e-th cyclotomic polynomial in v."""
    got = _cyclotomic_cache.get(e)
    if got is None:
        num = LaurentPoly({e: 1}) - LaurentPoly.one()
        for d in range(1, e):
            if e % d == 0:
                q = num.divide_exact(cyclotomic(d))
                assert q is not None
                num = q
        got = num
        _cyclotomic_cache[e] = got
    return got


class ChevalleyReport:
    """Outcome of factoring q into divisors of the binomials 1 - v^{2i}."""

    def __init__(self, q, m, success, factors, remainder):
        self.q = q
        self.m = m
        self.success = success
        # list of (factor polynomial, witness i with factor | v^{2i} - 1, mult)
        self.factors = factors
        self.remainder = remainder

    def to_json(self):
        return {
            "q": self.q.render(),
            "m": self.m,
            "success": self.success,
            "factors": [
                {"factor": f.render(), "divides_binomial_i": i, "multiplicity": k}
                for (f, i, k) in self.factors
            ],
            "remainder": self.remainder.render(),
        }


def chevalley_divisibility(q: LaurentPoly, m: int) -> ChevalleyReport:
    """Try to write q as a unit times factors dividing some v^{2i}-1, i <= m.

    Trial division runs over the cyclotomic divisors of those binomials:
    Phi_e(v) qualifies when e is odd and e <= m, or e is even and e <= 2m.
    """
    if q.is_zero:
        return ChevalleyReport(q, m, False, [], q)
    rem = q
    factors = []
    candidates = []
    for e in range(1, 2 * m + 1):
        if e % 2 == 1 and e > m:
            continue
        witness = e if e % 2 == 1 else e // 2
        candidates.append((e, witness))
    for e, witness in candidates:
        phi = cyclotomic(e)
        mult = 0
        while True:
            nxt = rem.divide_exact(phi)
            if nxt is None:
                break
            rem = nxt
            mult += 1
        if mult:
            factors.append((phi, witness, mult))
    return ChevalleyReport(q, m, rem.is_unit, factors, rem)
