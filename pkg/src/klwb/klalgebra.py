"""Block Hecke modules over orbits of character points.

For one W-orbit o of character points, H_o carries orthogonal idempotents
1_L, one per point, with T_w 1_L = 1_{wL} T_w and a per-block quadratic
rule: T_s^2 1_L is the ly quadratic when s lies in the reflection subgroup
of L, and plain 1_L otherwise.  The signed generators

    a_s = sum over blocks of (+T_s 1_L if s in W_L, else -T_s 1_L)

generate, across a configured family of orbits, the algebra this module
exposes: elements are stored extensionally through their per-orbit
projections, which is faithful because the product of all projections is
injective on the generated algebra.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .charpoints import OrbitData, act_generator, orbit_set, pairing
from .hecke import LY, hecke_algebra
from .linalg import bivar_divides, minpoly_operator, qpoly_lcm, qpoly_to_bivar
from .rings import (
    BivarPoly,
    LaurentPoly,
    Qv,
    QV_ZERO,
    annihilator_family,
)

_ONE = LaurentPoly.one()
_V2 = LaurentPoly.monomial(2)
_ONE_MINUS_V2 = _ONE - _V2


class OrbitMismatch(ValueError):
    """Operands live over different orbits or orbit families."""


class OrbitHeckeElement:
    """Sparse combination of T_w 1_L over one orbit."""

    __slots__ = ("algebra", "_t")

    def __init__(self, algebra: "OrbitAlgebra", terms: Dict[Tuple[int, int], LaurentPoly]):
        self.algebra = algebra
        self._t = {k: c for k, c in terms.items() if not c.is_zero}

    @property
    def terms(self):
        """Map from (group element, character point) to coefficient."""
        els = self.algebra.group.elements
        pts = self.algebra.orbit.points
        return {(els[e], pts[p]): c for (e, p), c in self._t.items()}

    @property
    def is_zero(self) -> bool:
        return not self._t

    def coefficient(self, w, point) -> LaurentPoly:
        eid = w if isinstance(w, int) else self.algebra.group.id_of(w)
        pidx = point if isinstance(point, int) else self.algebra.orbit.index_of(point)
        return self._t.get((eid, pidx), LaurentPoly.zero())

    def column(self, point) -> "OrbitHeckeElement":
        """Restriction to the right idempotent 1_L of one block."""
        pidx = point if isinstance(point, int) else self.algebra.orbit.index_of(point)
        return OrbitHeckeElement(
            self.algebra, {k: c for k, c in self._t.items() if k[1] == pidx}
        )

    def _check(self, other: "OrbitHeckeElement"):
        if other.algebra is not self.algebra:
            raise OrbitMismatch("elements over different orbit algebras")

    def __add__(self, other):
        if not isinstance(other, OrbitHeckeElement):
            return NotImplemented
        self._check(other)
        out = dict(self._t)
        for k, c in other._t.items():
            out[k] = out.get(k, LaurentPoly.zero()) + c
        return OrbitHeckeElement(self.algebra, out)

    def __sub__(self, other):
        if not isinstance(other, OrbitHeckeElement):
            return NotImplemented
        self._check(other)
        out = dict(self._t)
        for k, c in other._t.items():
            out[k] = out.get(k, LaurentPoly.zero()) - c
        return OrbitHeckeElement(self.algebra, out)

    def __neg__(self):
        return OrbitHeckeElement(self.algebra, {k: -c for k, c in self._t.items()})

    def scale(self, c) -> "OrbitHeckeElement":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        return OrbitHeckeElement(self.algebra, {k: c * p for k, p in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        if not isinstance(other, OrbitHeckeElement):
            return NotImplemented
        self._check(other)
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, OrbitHeckeElement)
            and other.algebra is self.algebra
            and other._t == self._t
        )

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self._t.items()))))

    def render(self) -> str:
        if not self._t:
            return "0"
        g = self.algebra.group
        pts = self.algebra.orbit.points
        bits = []
        for e, p in sorted(self._t):
            word = "".join(str(i + 1) for i in g.words[e]) or "e"
            bits.append(
                "(%s)*T[%s]1[%s]" % (self._t[(e, p)].render(), word, pts[p].render())
            )
        return " + ".join(bits)

    def to_json(self):
        g = self.algebra.group
        pts = self.algebra.orbit.points
        out = []
        for e, p in sorted(self._t):
            word = "".join(str(i + 1) for i in g.words[e]) or "e"
            out.append([word, pts[p].render(), self._t[(e, p)].render()])
        return out

    def __repr__(self):
        return "OrbitHecke(%s)" % self.render()


class OrbitAlgebra:
    """H_o for one orbit: idempotent-decomposed Hecke module over W."""

    def __init__(self, W, orb: OrbitData):
        if orb.group is not W:
            raise OrbitMismatch("orbit was built over a different group")
        self.group = W
        self.orbit = orb
        npts = orb.size
        # generator moves on points, and per-point kernel membership of each s
        self._gen_move = [
            [orb.index_of(act_generator(W, s, p)) for p in orb.points]
            for s in range(W.rank)
        ]
        self._in_wl = [
            [pairing(p, W.root_pairs[s][1]) == 0 for p in orb.points]
            for s in range(W.rank)
        ]
        # moved[eid][pidx] = index of w L, filled along canonical words
        moved: List[List[int]] = [list(range(npts))]
        for eid in range(1, W.size):
            s = W.words[eid][0]
            rest = W.lmul_id(s, eid)
            gm = self._gen_move[s]
            moved.append([gm[q] for q in moved[rest]])
        self._moved = moved

    @property
    def dim(self) -> int:
        return self.group.size * self.orbit.size

    def zero(self) -> OrbitHeckeElement:
        return OrbitHeckeElement(self, {})

    def unit(self) -> OrbitHeckeElement:
        return OrbitHeckeElement(
            self, {(0, p): _ONE for p in range(self.orbit.size)}
        )

    def idempotent(self, point) -> OrbitHeckeElement:
        pidx = point if isinstance(point, int) else self.orbit.index_of(point)
        return OrbitHeckeElement(self, {(0, pidx): _ONE})

    def basis(self, w, point) -> OrbitHeckeElement:
        eid = w if isinstance(w, int) else self.group.id_of(w)
        pidx = point if isinstance(point, int) else self.orbit.index_of(point)
        return OrbitHeckeElement(self, {(eid, pidx): _ONE})

    def moved_point(self, w, point) -> int:
        """Index of w applied to the point."""
        eid = w if isinstance(w, int) else self.group.id_of(w)
        pidx = point if isinstance(point, int) else self.orbit.index_of(point)
        return self._moved[eid][pidx]

    def _lmul_gen(self, s: int, terms: Dict[Tuple[int, int], LaurentPoly]):
        """Multiply by plain T_s on the left."""
        g = self.group
        out: Dict[Tuple[int, int], LaurentPoly] = {}
        for (eid, pidx), c in terms.items():
            j = g.lmul_id(s, eid)
            if g.lengths[j] > g.lengths[eid]:
                key = (j, pidx)
                out[key] = out.get(key, LaurentPoly.zero()) + c
            elif self._in_wl[s][self._moved[eid][pidx]]:
                # T_s^2 1_{wL} is the ly quadratic inside the block
                kj, ke = (j, pidx), (eid, pidx)
                out[kj] = out.get(kj, LaurentPoly.zero()) + _V2 * c
                out[ke] = out.get(ke, LaurentPoly.zero()) + _ONE_MINUS_V2 * c
            else:
                # outside the kernel the square collapses: T_s^2 1_{wL} = 1_{wL}
                key = (j, pidx)
                out[key] = out.get(key, LaurentPoly.zero()) + c
        return out

    def mul(self, a: OrbitHeckeElement, b: OrbitHeckeElement) -> OrbitHeckeElement:
        if a.algebra is not self or b.algebra is not self:
            raise OrbitMismatch("operands belong to another orbit algebra")
        g = self.group
        # group the left factor by its idempotent so 1_L 1_{uM} filters cheaply
        by_point: Dict[int, List[Tuple[int, LaurentPoly]]] = {}
        for (eid, pidx), c in a._t.items():
            by_point.setdefault(pidx, []).append((eid, c))
        acc: Dict[Tuple[int, int], LaurentPoly] = {}
        for (u, m), cb in b._t.items():
            target = self._moved[u][m]
            for eid, ca in by_point.get(target, ()):
                cur = {(u, m): cb}
                for s in reversed(g.words[eid]):
                    cur = self._lmul_gen(s, cur)
                for k, p in cur.items():
                    acc[k] = acc.get(k, LaurentPoly.zero()) + ca * p
        return OrbitHeckeElement(self, acc)

    def pi_generator(self, s: int) -> OrbitHeckeElement:
        """Projection of the signed generator a_s into this orbit."""
        gid = self.group.id_of(self.group.gens[s])
        terms = {}
        for p in range(self.orbit.size):
            terms[(gid, p)] = _ONE if self._in_wl[s][p] else -_ONE
        return OrbitHeckeElement(self, terms)

    def flat_index(self, eid: int, pidx: int) -> int:
        return eid * self.orbit.size + pidx

    def element_to_vector(self, el: OrbitHeckeElement) -> List[Qv]:
        vec = [QV_ZERO] * self.dim
        for (eid, pidx), c in el._t.items():
            vec[self.flat_index(eid, pidx)] = Qv(c)
        return vec


class KLElement:
    """A product of signed generators, stored through all its projections."""

    __slots__ = ("context", "word", "projections")

    def __init__(self, context: "KLAlgebra", word: Tuple[int, ...], projections):
        self.context = context
        self.word = word
        self.projections = tuple(projections)

    def projection(self, orbit) -> OrbitHeckeElement:
        return self.projections[self.context.orbit_index(orbit)]

    def __mul__(self, other):
        if not isinstance(other, KLElement):
            return NotImplemented
        return self.context.mul(self, other)

    def __eq__(self, other):
        # extensional: equal when every projection agrees
        return (
            isinstance(other, KLElement)
            and other.context is self.context
            and other.projections == self.projections
        )

    def __hash__(self):
        return hash((id(self.context), self.projections))

    def to_json(self):
        return {
            "word": [i + 1 for i in self.word],
            "projections": {
                o.representative.render(): el.to_json()
                for o, el in zip(self.context.orbits, self.projections)
            },
        }

    def __repr__(self):
        return "KLElement(word=%s)" % ("".join(str(i + 1) for i in self.word) or "e")


class KLAlgebra:
    """The generator algebra evaluated over a configured orbit family."""

    def __init__(self, W, orbits: Sequence[OrbitData]):
        self.group = W
        self.orbits = tuple(orbits)
        if not self.orbits:
            raise OrbitMismatch("at least one orbit is required")
        self.algebras = tuple(OrbitAlgebra(W, o) for o in self.orbits)
        self._rep_index = {o.representative: i for i, o in enumerate(self.orbits)}
        self._gens = [
            tuple(alg.pi_generator(s) for alg in self.algebras)
            for s in range(W.rank)
        ]

    @classmethod
    def for_type(cls, cartan_type_or_group, den_bound: int = 6) -> "KLAlgebra":
        from .coxeter import build_weyl

        W = cartan_type_or_group
        if isinstance(W, str):
            W = build_weyl(W)
        return cls(W, orbit_set(W, den_bound))

    def orbit_index(self, orbit) -> int:
        if isinstance(orbit, int):
            return orbit
        if isinstance(orbit, OrbitData):
            orbit = orbit.representative
        got = self._rep_index.get(orbit)
        if got is None:
            raise OrbitMismatch("orbit not part of this configuration")
        return got

    def unit(self) -> KLElement:
        return KLElement(self, (), tuple(a.unit() for a in self.algebras))

    def generator(self, s: int) -> KLElement:
        return KLElement(self, (s,), self._gens[s])

    def element(self, word: Iterable[int]) -> KLElement:
        out = self.unit()
        for s in word:
            out = self.mul(out, self.generator(s))
        return out

    def element_of(self, w) -> KLElement:
        """a_w evaluated along the canonical word of w."""
        eid = w if isinstance(w, int) else self.group.id_of(w)
        return self.element(self.group.words[eid])

    def mul(self, a: KLElement, b: KLElement) -> KLElement:
        if a.context is not self or b.context is not self:
            raise OrbitMismatch("elements from another configuration")
        projs = tuple(
            alg.mul(x, y)
            for alg, x, y in zip(self.algebras, a.projections, b.projections)
        )
        return KLElement(self, a.word + b.word, projs)

    def full_twist(self) -> KLElement:
        word = self.group.words[self.group.longest_id]
        return self.element(word + word)

    # -- verification suites -------------------------------------------------

    def verify_cubic(self, s: int) -> List[dict]:
        """(a_s + v^2)(a_s^2 - 1) = 0 per orbit."""
        out = []
        for alg, g in zip(self.algebras, self._gens[s]):
            one = alg.unit()
            expr = alg.mul(g + one.scale(_V2), alg.mul(g, g) - one)
            out.append(
                _report(
                    "cubic",
                    self.group.cartan_type,
                    alg.orbit,
                    expr.is_zero,
                    witness=None if expr.is_zero else expr.render(),
                )
            )
        return out

    def operator_square_identity(self, s: int) -> List[dict]:
        """(a_s^2 - 1)^2 = (v^4 - 1)(a_s^2 - 1) per orbit."""
        v4_minus_1 = LaurentPoly.monomial(4) - _ONE
        out = []
        for alg, g in zip(self.algebras, self._gens[s]):
            d = alg.mul(g, g) - alg.unit()
            diff = alg.mul(d, d) - d.scale(v4_minus_1)
            out.append(
                _report(
                    "operator_square",
                    self.group.cartan_type,
                    alg.orbit,
                    diff.is_zero,
                    witness=None if diff.is_zero else diff.render(),
                )
            )
        return out

    def check_braid(self) -> List[dict]:
        """Defining braid relations for all generator pairs, per orbit."""
        W = self.group
        out = []
        for i in range(W.rank):
            for j in range(i + 1, W.rank):
                m = _pair_order(W, i, j)
                left = right = self.unit()
                for k in range(m):
                    left = self.mul(left, self.generator(i if k % 2 == 0 else j))
                    right = self.mul(right, self.generator(j if k % 2 == 0 else i))
                for alg, x, y in zip(self.algebras, left.projections, right.projections):
                    ok = x == y
                    out.append(
                        _report(
                            "braid",
                            W.cartan_type,
                            alg.orbit,
                            ok,
                            detail="pair (%d, %d)" % (i + 1, j + 1),
                            witness=None if ok else (x - y).render(),
                        )
                    )
        return out

    def check_twisted_product(self, word1, word2) -> bool:
        """pi_L(a b) = pi_{w2 L}(a) pi_L(b) for every block of every orbit."""
        a = self.element(word1)
        b = self.element(word2)
        ab = self.mul(a, b)
        w2 = self.group.identity
        for s in word2:
            w2 = w2 * self.group.gens[s]
        w2id = self.group.id_of(w2)
        for alg, pa, pb, pab in zip(
            self.algebras, a.projections, b.projections, ab.projections
        ):
            for pidx in range(alg.orbit.size):
                moved = alg._moved[w2id][pidx]
                lhs = pab.column(pidx)
                rhs = alg.mul(pa.column(moved), pb.column(pidx))
                if lhs != rhs:
                    return False
        return True

    def check_w0_identity(self) -> List[dict]:
        """pi_L(a_{w0}^2) equals the intrinsic square of the subsystem's top
        basis element, block by block."""
        z = self.full_twist()
        out = []
        for alg, proj in zip(self.algebras, z.projections):
            for pidx, point in enumerate(alg.orbit.points):
                sub = alg.orbit.stabilizers[point]
                H = hecke_algebra(sub.group, LY)
                top = H.basis(sub.group.longest_id)
                sq = H.t_mul(top, top)
                expected: Dict[Tuple[int, int], LaurentPoly] = {}
                for handle, c in sq.terms.items():
                    expected[(self.group.id_of(handle), pidx)] = c
                got = proj.column(pidx)
                ok = got == OrbitHeckeElement(alg, expected)
                out.append(
                    _report(
                        "w0_identity",
                        self.group.cartan_type,
                        alg.orbit,
                        ok,
                        detail="block %s" % point.render(),
                        witness=None if ok else got.render(),
                    )
                )
        return out

    def fulltwist_minpoly(self) -> Tuple[BivarPoly, Dict[str, bool]]:
        """Minimal polynomial of left multiplication by a_{w0}^2 on the sum
        of all configured orbit modules, with divisibility verdicts against
        the x - v^2i families for m = l(w0) and m = 2 l(w0)."""
        z = self.full_twist()
        combined = [Qv(1)]
        for alg, proj in zip(self.algebras, z.projections):
            images: List[OrbitHeckeElement] = []
            for eid in range(self.group.size):
                for pidx in range(alg.orbit.size):
                    images.append(alg.mul(proj, alg.basis(eid, pidx)))
            vecs = [alg.element_to_vector(im) for im in images]
            dim = alg.dim

            def apply(vec, vecs=vecs, dim=dim):
                out = [QV_ZERO] * dim
                for i, c in enumerate(vec):
                    if c:
                        col = vecs[i]
                        for r in range(dim):
                            if col[r]:
                                out[r] = out[r] + c * col[r]
                return out

            combined = qpoly_lcm(combined, minpoly_operator(apply, dim))
        mp = qpoly_to_bivar(combined)
        lw0 = self.group.lengths[self.group.longest_id]
        verdicts = {
            "paper": bivar_divides(mp, annihilator_family(lw0)),
            "safe": bivar_divides(mp, annihilator_family(2 * lw0)),
        }
        return mp, verdicts


def _pair_order(W, i: int, j: int) -> int:
    """Order of s_i s_j from the Cartan entries."""
    nab = W.datum.cartan_matrix[i][j] * W.datum.cartan_matrix[j][i]
    return {0: 2, 1: 3, 2: 4, 3: 6}[nab]


def _report(check, cartan_type, orb, ok, detail=None, witness=None) -> dict:
    out = {
        "check": check,
        "type": cartan_type,
        "orbit": orb.representative.render(),
        "status": "pass" if ok else "fail",
    }
    if detail:
        out["detail"] = detail
    if witness is not None:
        out["witness"] = witness
    return out
