"""Iwahori-Hecke algebras over Z[v, v^-1] for any enumerated Coxeter carrier.

Two quadratic normalizations of the standard basis are supported:

  std: (T_s + v)(T_s - 1/v) = 0, the Kazhdan-Lusztig-friendly one, and
  ly:  (T_s - 1)(T_s + v^2) = 0, the one monodromic formulas live in,

linked by the algebra isomorphism sending the ly generator to -v times the
inverse of the std generator.  The carrier can be a WeylGroup or a
SubsystemGroup; only the shared table interface is used, so cells, scalars
and minimal polynomials work intrinsically inside reflection subgroups.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .linalg import minpoly_operator, qpoly_to_bivar
from .rings import BivarPoly, LaurentPoly, Qv, QV_ZERO

STD = "std"
LY = "ly"

_ONE = LaurentPoly.one()
_V = LaurentPoly.monomial(1)
_VINV = LaurentPoly.monomial(-1)
_V2 = LaurentPoly.monomial(2)


class ConventionMismatch(ValueError):
    """Operands or requests disagree about the quadratic normalization."""


class NotCentral(ValueError):
    """Element fails the centrality check against the generators."""


class HeckeElement:
    """Sparse combination of standard basis elements T_w."""

    __slots__ = ("algebra", "_t")

    def __init__(self, algebra, terms: Dict[int, LaurentPoly]):
        self.algebra = algebra
        self._t = {e: c for e, c in terms.items() if not c.is_zero}

    @property
    def terms(self):
        """Map from group-element handle to coefficient."""
        els = self.algebra.group.elements
        return {els[e]: c for e, c in self._t.items()}

    @property
    def is_zero(self) -> bool:
        return not self._t

    def coefficient(self, w) -> LaurentPoly:
        eid = w if isinstance(w, int) else self.algebra.group.id_of(w)
        return self._t.get(eid, LaurentPoly.zero())

    def support_ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self._t))

    def _check(self, other: "HeckeElement"):
        if other.algebra is not self.algebra:
            if other.algebra.group is not self.algebra.group:
                raise ConventionMismatch("elements over different carriers")
            raise ConventionMismatch(
                "cannot mix %s and %s conventions"
                % (self.algebra.convention, other.algebra.convention)
            )

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        self._check(other)
        out = dict(self._t)
        for e, c in other._t.items():
            out[e] = out.get(e, LaurentPoly.zero()) + c
        return HeckeElement(self.algebra, out)

    def __sub__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        self._check(other)
        out = dict(self._t)
        for e, c in other._t.items():
            out[e] = out.get(e, LaurentPoly.zero()) - c
        return HeckeElement(self.algebra, out)

    def __neg__(self):
        return HeckeElement(self.algebra, {e: -c for e, c in self._t.items()})

    def scale(self, c) -> "HeckeElement":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        return HeckeElement(self.algebra, {e: c * p for e, p in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        if not isinstance(other, HeckeElement):
            return NotImplemented
        self._check(other)
        return self.algebra.t_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, HeckeElement)
            and other.algebra is self.algebra
            and other._t == self._t
        )

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self._t.items()))))

    def render(self) -> str:
        if not self._t:
            return "0"
        g = self.algebra.group
        bits = []
        for e in sorted(self._t):
            word = "".join(str(i + 1) for i in g.words[e]) or "e"
            bits.append("(%s)*T[%s]" % (self._t[e].render(), word))
        return " + ".join(bits)

    def to_json(self):
        g = self.algebra.group
        out = []
        for e in sorted(self._t):
            word = "".join(str(i + 1) for i in g.words[e]) or "e"
            out.append([word, self._t[e].render()])
        return out

    def __repr__(self):
        return "Hecke<%s>(%s)" % (self.algebra.convention, self.render())


def _algebra_cache(group) -> dict:
    got = getattr(group, "_hecke_cache", None)
    if got is None:
        got = {}
        group._hecke_cache = got
    return got


def hecke_algebra(group, convention: str = STD) -> "HeckeAlgebra":
    """The Hecke algebra over the carrier, one shared instance per convention."""
    if convention not in (STD, LY):
        raise ConventionMismatch("unknown convention %r" % (convention,))
    cache = _algebra_cache(group)
    got = cache.get(convention)
    if got is None:
        got = HeckeAlgebra(group, convention)
        cache[convention] = got
    return got


class HeckeAlgebra:
    """Hecke algebra bound to one carrier group and one convention."""

    def __init__(self, group, convention: str):
        self.group = group
        self.convention = convention
        # quadratic relation: T_s^2 = qa + qb * T_s on length drop
        if convention == STD:
            self._qa = _ONE
            self._qb = _VINV - _V
        else:
            self._qa = _V2
            self._qb = _ONE - _V2
        self._kl: Dict[int, HeckeElement] = {}
        self._inv_basis: Dict[int, HeckeElement] = {}
        self._convert: Dict[str, Dict[int, HeckeElement]] = {}
        self._cells: Optional[CellDecomposition] = None

    # -- constructors ------------------------------------------------------

    def zero(self) -> HeckeElement:
        return HeckeElement(self, {})

    def unit(self) -> HeckeElement:
        return HeckeElement(self, {0: _ONE})

    def basis(self, w) -> HeckeElement:
        eid = w if isinstance(w, int) else self.group.id_of(w)
        return HeckeElement(self, {eid: _ONE})

    def generator(self, i: int) -> HeckeElement:
        return self.basis(self.group.id_of(self.group.gens[i]))

    def from_terms(self, terms) -> HeckeElement:
        out: Dict[int, LaurentPoly] = {}
        for k, c in terms.items():
            eid = k if isinstance(k, int) else self.group.id_of(k)
            if isinstance(c, int):
                c = LaurentPoly.const(c)
            out[eid] = out.get(eid, LaurentPoly.zero()) + c
        return HeckeElement(self, out)

    # -- multiplication ------------------------------------------------------

    def _lmul_gen(self, i: int, terms: Dict[int, LaurentPoly]) -> Dict[int, LaurentPoly]:
        g = self.group
        out: Dict[int, LaurentPoly] = {}
        for eid, c in terms.items():
            j = g.lmul_id(i, eid)
            if g.lengths[j] > g.lengths[eid]:
                out[j] = out.get(j, LaurentPoly.zero()) + c
            else:
                # T_s T_w = qa * T_{sw} + qb * T_w when sw is shorter
                out[j] = out.get(j, LaurentPoly.zero()) + self._qa * c
                out[eid] = out.get(eid, LaurentPoly.zero()) + self._qb * c
        return out

    def _rmul_gen(self, terms: Dict[int, LaurentPoly], i: int) -> Dict[int, LaurentPoly]:
        g = self.group
        out: Dict[int, LaurentPoly] = {}
        for eid, c in terms.items():
            j = g.rmul_id(eid, i)
            if g.lengths[j] > g.lengths[eid]:
                out[j] = out.get(j, LaurentPoly.zero()) + c
            else:
                out[j] = out.get(j, LaurentPoly.zero()) + self._qa * c
                out[eid] = out.get(eid, LaurentPoly.zero()) + self._qb * c
        return out

    def t_mul(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        if a.algebra is not self or b.algebra is not self:
            a._check(b)
            if a.algebra is not self:
                raise ConventionMismatch("product outside this algebra")
        g = self.group
        acc: Dict[int, LaurentPoly] = {}
        for eid, c in a._t.items():
            cur = dict(b._t)
            for i in reversed(g.words[eid]):
                cur = self._lmul_gen(i, cur)
            for k, p in cur.items():
                acc[k] = acc.get(k, LaurentPoly.zero()) + c * p
        return HeckeElement(self, acc)

    def basis_inverse(self, w) -> HeckeElement:
        """The inverse of T_w."""
        eid = w if isinstance(w, int) else self.group.id_of(w)
        got = self._inv_basis.get(eid)
        if got is None:
            # T_s^{-1} = (T_s - qb) / qa, extended over a reduced word
            inv_gen = {}
            for i in range(self.group.rank):
                gid = self.group.id_of(self.group.gens[i])
                if self.convention == STD:
                    inv_gen[i] = HeckeElement(self, {gid: _ONE, 0: _V - _VINV})
                else:
                    inv_gen[i] = HeckeElement(
                        self, {gid: _VINV * _VINV, 0: _ONE - _VINV * _VINV}
                    )
            out = self.unit()
            for i in reversed(self.group.words[eid]):
                out = self.t_mul(out, inv_gen[i])
            got = out
            self._inv_basis[eid] = got
        return got

    def bar(self, a: HeckeElement) -> HeckeElement:
        """Bar involution: v -> 1/v and T_w -> (T_{w^{-1}})^{-1}."""
        g = self.group
        out = self.zero()
        for eid, c in a._t.items():
            out = out + self.basis_inverse(g.inv_id(eid)).scale(c.bar())
        return out

    # -- Kazhdan-Lusztig basis (std convention) -----------------------------

    def _require_std(self):
        if self.convention != STD:
            raise ConventionMismatch("operation defined in the std convention")

    def kl_basis(self, w) -> HeckeElement:
        """Self-dual basis element C_w; C_e = T_e and C_s = T_s + v."""
        self._require_std()
        eid = w if isinstance(w, int) else self.group.id_of(w)
        got = self._kl.get(eid)
        if got is None:
            g = self.group
            if g.lengths[eid] == 0:
                got = self.unit()
            else:
                s = g.words[eid][0]
                sw = g.lmul_id(s, eid)
                cs = HeckeElement(self, {g.id_of(g.gens[s]): _ONE, 0: _V})
                got = self.t_mul(cs, self.kl_basis(sw))
                csw = self.kl_basis(sw)
                for z, h in list(csw._t.items()):
                    if z == sw:
                        continue
                    mu = h.coefficient(1)
                    if mu and g.lengths[g.lmul_id(s, z)] < g.lengths[z]:
                        got = got - self.kl_basis(z).scale(mu)
            self._kl[eid] = got
        return got

    def mu(self, z, w) -> int:
        """Leading coefficient mu(z, w) of the KL polynomial."""
        self._require_std()
        zid = z if isinstance(z, int) else self.group.id_of(z)
        wid = w if isinstance(w, int) else self.group.id_of(w)
        if zid == wid:
            return 0
        return self.kl_basis(wid).coefficient(zid).coefficient(1)

    def kl_expand(self, a: HeckeElement) -> Dict[int, LaurentPoly]:
        """Coefficients of a in the KL basis, keyed by element id."""
        self._require_std()
        if a.algebra is not self:
            raise ConventionMismatch("element from another algebra")
        rem = dict(a._t)
        out: Dict[int, LaurentPoly] = {}
        for eid in range(self.group.size - 1, -1, -1):
            c = rem.get(eid)
            if c is None or c.is_zero:
                continue
            out[eid] = c
            for z, h in self.kl_basis(eid)._t.items():
                rem[z] = rem.get(z, LaurentPoly.zero()) - c * h
        assert all(p.is_zero for p in rem.values())
        return out

    # -- cells ---------------------------------------------------------------

    def cells(self) -> "CellDecomposition":
        if self.convention != STD:
            return hecke_algebra(self.group, STD).cells()
        if self._cells is None:
            self._cells = CellDecomposition(self)
        return self._cells

    # -- distinguished elements ----------------------------------------------

    def tilting_class(self, negative_v2: bool = False) -> HeckeElement:
        """Graded sum of all T_w weighted by codimension from the top.

        Default weight v^(l(w0) - l(w)); with negative_v2 the weight is
        (-v^2)^(l(w0) - l(w)).
        """
        g = self.group
        top = g.lengths[g.longest_id]
        out: Dict[int, LaurentPoly] = {}
        for eid in range(g.size):
            k = top - g.lengths[eid]
            if negative_v2:
                coeff = LaurentPoly({2 * k: (-1) ** k})
            else:
                coeff = LaurentPoly({k: 1})
            out[eid] = coeff
        return HeckeElement(self, out)

    def full_twist(self) -> HeckeElement:
        tw0 = self.basis(self.group.longest_id)
        return self.t_mul(tw0, tw0)

    def ic_e_coefficient(self, a: HeckeElement) -> LaurentPoly:
        """Coefficient of C_e when a is expanded in the KL basis."""
        if a.algebra.convention != STD:
            a = convert_convention(a, STD)
        alg = a.algebra
        return alg.kl_expand(a).get(0, LaurentPoly.zero())

    def is_central(self, z: HeckeElement) -> bool:
        for i in range(self.group.rank):
            t = self.generator(i)
            if self.t_mul(z, t) != self.t_mul(t, z):
                return False
        return True

    def cell_scalar(self, z: HeckeElement, cell) -> Optional[Tuple[int, int]]:
        """Scalar of a central element on one cell subquotient.

        Returns (sign, exponent) when multiplication by z on the subquotient
        spanned by the cell's C_x is the scalar sign * v^exponent; None when
        the matrix is not such a scalar.
        """
        if z.algebra.convention != STD:
            z = convert_convention(z, STD)
        alg = z.algebra
        if not alg.is_central(z):
            raise NotCentral("element does not commute with the generators")
        dec = alg.cells()
        cid = dec.cell_index(cell)
        members = [alg.group.id_of(x) for x in dec.two_sided[cid]]
        place = {e: k for k, e in enumerate(members)}
        mat: List[List[LaurentPoly]] = [
            [LaurentPoly.zero()] * len(members) for _ in members
        ]
        for col, x in enumerate(members):
            prod = alg.t_mul(z, alg.kl_basis(x))
            for y, c in alg.kl_expand(prod).items():
                if y in place:
                    mat[place[y]][col] = c
                else:
                    below = dec.cell_of_id(y)
                    assert below != cid and dec.leq(below, cid)
        scal = mat[0][0]
        for r in range(len(members)):
            for c in range(len(members)):
                want = scal if r == c else LaurentPoly.zero()
                if mat[r][c] != want:
                    return None
        if scal.is_unit:
            e = scal.min_exp
            return (scal.coefficient(e), e)
        return None

    # -- minimal polynomial ---------------------------------------------------

    def minpoly(self, z: HeckeElement) -> BivarPoly:
        """Minimal polynomial of right multiplication by z on the algebra."""
        if z.algebra is not self:
            raise ConventionMismatch("element from another algebra")
        n = self.group.size
        images = [self.t_mul(self.basis(eid), z) for eid in range(n)]

        def apply(vec):
            out = [QV_ZERO] * n
            for i, c in enumerate(vec):
                if c:
                    for eid, p in images[i]._t.items():
                        out[eid] = out[eid] + c * Qv(p)
            return out

        return qpoly_to_bivar(minpoly_operator(apply, n))


def convert_convention(a: HeckeElement, to: str) -> HeckeElement:
    """Transport along the isomorphism fixed by ly T_s = -v * (std T_s)^{-1}.

    Coefficients are unchanged; basis elements map multiplicatively over
    reduced words.  Converting to the element's own convention is a no-op.
    """
    if to not in (STD, LY):
        raise ConventionMismatch("unknown convention %r" % (to,))
    src = a.algebra
    if src.convention == to:
        return a
    target = hecke_algebra(src.group, to)
    cache = src._convert.setdefault(to, {})

    def image(eid: int) -> HeckeElement:
        got = cache.get(eid)
        if got is not None:
            return got
        g = src.group
        if g.lengths[eid] == 0:
            got = target.unit()
        elif g.lengths[eid] == 1:
            i = g.words[eid][0]
            gid = g.id_of(g.gens[i])
            if to == STD:
                # ly T_s -> (1 - v^2) T_e - v T_s
                got = HeckeElement(target, {0: _ONE - _V2, gid: -_V})
            else:
                # std T_s -> (1/v - v) T_e - 1/v T_s
                got = HeckeElement(target, {0: _VINV - _V, gid: -_VINV})
        else:
            s = g.words[eid][0]
            sw = g.lmul_id(s, eid)
            sid = g.id_of(g.gens[s])
            got = target.t_mul(image(sid), image(sw))
        cache[eid] = got
        return got

    out = target.zero()
    for eid, c in a._t.items():
        out = out + image(eid).scale(c)
    return out


def _scc(n: int, edges: Dict[int, set]) -> List[List[int]]:
    # Tarjan, iterative
    index = [0] * n
    low = [0] * n
    state = [0] * n  # 0 unseen, 1 on stack, 2 done
    stack: List[int] = []
    out: List[List[int]] = []
    counter = [1]
    for root in range(n):
        if state[root]:
            continue
        work = [(root, iter(sorted(edges.get(root, ()))))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        state[root] = 1
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if not state[nxt]:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    state[nxt] = 1
                    work.append((nxt, iter(sorted(edges.get(nxt, ())))))
                    advanced = True
                    break
                if state[nxt] == 1:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    state[x] = 2
                    comp.append(x)
                    if x == node:
                        break
                out.append(sorted(comp))
    return out


class CellDecomposition:
    """Left, right and two-sided Kazhdan-Lusztig cells with their order.

    The partial order is oriented so the identity's cell is maximal: c <= c'
    when some C_x, x in c, appears in products H * C_y * H for y in c'.
    two_sided lists cells in a linear extension with the maximal cell first.
    """

    def __init__(self, algebra: HeckeAlgebra):
        g = algebra.group
        n = g.size
        left_edges: Dict[int, set] = {e: set() for e in range(n)}
        right_edges: Dict[int, set] = {e: set() for e in range(n)}
        for eid in range(n):
            cw = algebra.kl_basis(eid)
            for i in range(g.rank):
                cs = algebra.kl_basis(g.id_of(g.gens[i]))
                for y in algebra.kl_expand(algebra.t_mul(cs, cw)):
                    if y != eid:
                        left_edges[eid].add(y)
                for y in algebra.kl_expand(algebra.t_mul(cw, cs)):
                    if y != eid:
                        right_edges[eid].add(y)
        both: Dict[int, set] = {
            e: left_edges[e] | right_edges[e] for e in range(n)
        }
        self.group = g
        self._left_ids = _scc(n, left_edges)
        self._right_ids = _scc(n, right_edges)
        two = _scc(n, both)

        # reachability between two-sided classes; edge a -> b means b <= a
        comp_of = {}
        for k, comp in enumerate(two):
            for e in comp:
                comp_of[e] = k
        m = len(two)
        dag: List[set] = [set() for _ in range(m)]
        for e, outs in both.items():
            for y in outs:
                if comp_of[e] != comp_of[y]:
                    dag[comp_of[e]].add(comp_of[y])
        reach: List[set] = [set() for _ in range(m)]

        def visit(k):
            if reach[k]:
                return reach[k]
            acc = {k}
            for j in dag[k]:
                acc |= visit(j)
            reach[k] = acc
            return acc

        for k in range(m):
            visit(k)

        # linear extension, maximal cell first, deterministic tie break
        order: List[int] = []
        placed = set()
        while len(order) < m:
            # a cell is ready when every cell above it is already placed
            ready = []
            for k in range(m):
                if k in placed:
                    continue
                above = [j for j in range(m) if j != k and k in reach[j]]
                if all(j in placed for j in above):
                    ready.append(k)
            pick = min(ready, key=lambda k: min(two[k]))
            order.append(pick)
            placed.add(pick)
        self._two_ids = [two[k] for k in order]
        self._reach = reach
        self._perm = order  # position -> original scc index
        self._cell_of = {}
        for pos, comp in enumerate(self._two_ids):
            for e in comp:
                self._cell_of[e] = pos

    # -- views ---------------------------------------------------------------

    @property
    def two_sided(self) -> Tuple[Tuple, ...]:
        els = self.group.elements
        return tuple(tuple(els[e] for e in comp) for comp in self._two_ids)

    @property
    def left_cells(self) -> Tuple[Tuple, ...]:
        els = self.group.elements
        return tuple(
            tuple(els[e] for e in comp)
            for comp in sorted(self._left_ids, key=lambda c: c[0])
        )

    @property
    def right_cells(self) -> Tuple[Tuple, ...]:
        els = self.group.elements
        return tuple(
            tuple(els[e] for e in comp)
            for comp in sorted(self._right_ids, key=lambda c: c[0])
        )

    def cell_of(self, w) -> int:
        eid = w if isinstance(w, int) else self.group.id_of(w)
        return self._cell_of[eid]

    def cell_of_id(self, eid: int) -> int:
        return self._cell_of[eid]

    def cell_index(self, cell) -> int:
        if isinstance(cell, int):
            if not 0 <= cell < len(self._two_ids):
                raise ValueError("cell index out of range")
            return cell
        members = list(cell)
        return self.cell_of(members[0])

    def leq(self, a: int, b: int) -> bool:
        """Whether cell a <= cell b (the identity's cell is maximal)."""
        return self._perm[a] in self._reach[self._perm[b]]

    def to_json(self):
        g = self.group
        return [
            ["".join(str(i + 1) for i in g.words[e]) or "e" for e in comp]
            for comp in self._two_ids
        ]
