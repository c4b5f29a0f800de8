"""The radical-square-zero algebra of a graph and its one-vertex modules.

``A`` has the vertices as orthogonal idempotents and the edges spanning a
radical whose square is zero: a product of basis paths survives only when
it composes and has length at most one.  For each vertex ``i`` we use two
left modules:

* the projective ``P_i``, spanned by ``e_i`` and the edges starting at
  ``i``, with the action given by multiplication in ``A``;
* the injective ``I_i``, the linear dual of the right module spanned by
  ``e_i`` and the edges ending at ``i``.

The left action on ``I_i`` is *derived* from duality, ``(a.f)(m) = f(m.a)``,
by expanding ``m.a`` against the primal basis once per graph and memoizing
the table.  Nothing about that action is transcribed by hand, which keeps
the sign and side conventions tied to the multiplication above.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .graph import Graph, GraphError

AKey = tuple[str, str]  # ("v", vertex-id) or ("e", edge-id)
ScalarLike = Union[Fraction, int]


def vertex_key(v: str) -> AKey:
    return ("v", v)


def edge_key(e: str) -> AKey:
    return ("e", e)


class AElement:
    """A rational linear combination of vertices and edges of the graph."""

    __slots__ = ("algebra", "_terms")
    __hash__ = None

    def __init__(self, algebra: "AlgebraA", terms: Mapping[AKey, ScalarLike]):
        self.algebra = algebra
        self._terms: dict[AKey, Fraction] = {}
        for k, c in terms.items():
            c = Fraction(c)
            if c:
                self._terms[k] = c

    def terms(self):
        return iter(self._terms.items())

    def coefficient(self, key: AKey) -> Fraction:
        return self._terms.get(key, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, AElement):
            return NotImplemented
        return self.algebra is other.algebra and self._terms == other._terms

    def __add__(self, other: "AElement") -> "AElement":
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return AElement(self.algebra, terms)

    def __neg__(self) -> "AElement":
        return AElement(self.algebra, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "AElement") -> "AElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AElement):
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return AElement(self.algebra, {k: Fraction(other) * c
                                           for k, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for (kind, name), c in sorted(self._terms.items()):
            prefix = "" if c == 1 else f"{c}."
            bits.append(f"{prefix}{name}")
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"<A: {self}>"


class AlgebraA:
    """The path algebra of the graph modulo paths of length two."""

    def __init__(self, graph: Graph):
        self.graph = graph

    def basis_keys(self) -> list[AKey]:
        keys = [vertex_key(v) for v in self.graph.vertices]
        keys.extend(edge_key(e) for e in self.graph.edges)
        return keys

    def element(self, terms: Mapping[AKey, ScalarLike]) -> AElement:
        for kind, name in terms:
            if kind == "v":
                if not self.graph.has_vertex(name):
                    raise GraphError(f"unknown vertex {name!r}")
            elif kind == "e":
                if not self.graph.has_edge(name):
                    raise GraphError(f"unknown edge {name!r}")
            else:
                raise GraphError(f"bad basis key kind {kind!r}")
        return AElement(self, terms)

    def zero(self) -> AElement:
        return AElement(self, {})

    def unit(self) -> AElement:
        return AElement(self, {vertex_key(v): 1 for v in self.graph.vertices})

    def vertex(self, v: str) -> AElement:
        return self.element({vertex_key(v): 1})

    def edge(self, e: str) -> AElement:
        return self.element({edge_key(e): 1})

    def multiply_keys(self, a: AKey, b: AKey) -> AKey | None:
        """Product of two basis elements, or None when it is zero."""
        g = self.graph
        (k1, n1), (k2, n2) = a, b
        if k1 == "v" and k2 == "v":
            return a if n1 == n2 else None
        if k1 == "v" and k2 == "e":
            return b if g.dst(n2) == n1 else None
        if k1 == "e" and k2 == "v":
            return a if g.src(n1) == n2 else None
        return None  # radical square zero

    def multiply(self, x: AElement, y: AElement) -> AElement:
        acc: dict[AKey, Fraction] = {}
        for ka, ca in x.terms():
            for kb, cb in y.terms():
                k = self.multiply_keys(ka, kb)
                if k is not None:
                    acc[k] = acc.get(k, Fraction(0)) + ca * cb
        return AElement(self, acc)


@dataclass(frozen=True)
class InjBasis:
    """Dual-basis symbol of I_i: the unit dual (edge None) or an edge dual."""

    vertex: str
    edge: str | None = None

    def sort_key(self):
        return (self.vertex, self.edge is not None, self.edge or "")

    def __str__(self) -> str:
        return f"{self.edge or self.vertex}#"


@dataclass(frozen=True)
class ProjBasis:
    """Basis symbol of P_i: the idempotent (edge None) or an edge out of i."""

    vertex: str
    edge: str | None = None

    def sort_key(self):
        return (self.vertex, self.edge is not None, self.edge or "")

    def __str__(self) -> str:
        return self.edge or self.vertex


def inj_basis_of(graph: Graph, i: str) -> list[InjBasis]:
    return [InjBasis(i)] + [InjBasis(i, e) for e in graph.in_edges(i)]


def proj_basis_of(graph: Graph, i: str) -> list[ProjBasis]:
    return [ProjBasis(i)] + [ProjBasis(i, e) for e in graph.out_edges(i)]


def inj_dim(graph: Graph, i: str) -> int:
    return 1 + len(graph.in_edges(i))


def proj_dim(graph: Graph, i: str) -> int:
    return 1 + len(graph.out_edges(i))


_INJ_TABLES: "weakref.WeakKeyDictionary[Graph, dict]" = weakref.WeakKeyDictionary()


def _primal_right_mult(graph: Graph, m: InjBasis, a: AKey) -> list[tuple[InjBasis, Fraction]]:
    """m.a inside the right module spanned by e_i and the edges into i.

    ``m`` names a primal basis element (unit or incoming edge) through the
    same record type as its dual.
    """
    kind, name = a
    i = m.vertex
    if m.edge is None:
        if kind == "v":
            return [(m, Fraction(1))] if name == i else []
        # e_i . edge = edge when it ends at i
        return [(InjBasis(i, name), Fraction(1))] if graph.dst(name) == i else []
    if kind == "v":
        return [(m, Fraction(1))] if graph.src(m.edge) == name else []
    return []  # edge . edge = 0


def _inj_table(graph: Graph) -> dict[tuple[AKey, InjBasis], tuple[tuple[InjBasis, Fraction], ...]]:
    table = _INJ_TABLES.get(graph)
    if table is not None:
        return table
    table = {}
    gens = [vertex_key(v) for v in graph.vertices]
    gens.extend(edge_key(e) for e in graph.edges)
    for i in graph.vertices:
        basis = inj_basis_of(graph, i)
        for a in gens:
            # (a.f)(m) = f(m.a): expand m.a and collect the dual coefficients
            for f in basis:
                out: dict[InjBasis, Fraction] = {}
                for m in basis:
                    for mm, c in _primal_right_mult(graph, m, a):
                        if mm == f:
                            out[m] = out.get(m, Fraction(0)) + c
                table[(a, f)] = tuple(sorted(out.items(), key=lambda kv: kv[0].sort_key()))
    _INJ_TABLES[graph] = table
    return table


def inj_action_key(graph: Graph, a: AKey, x: InjBasis) -> tuple[tuple[InjBasis, Fraction], ...]:
    return _inj_table(graph).get((a, x), ())


def proj_action_key(graph: Graph, a: AKey, x: ProjBasis) -> tuple[tuple[ProjBasis, Fraction], ...]:
    kind, name = a
    g = graph
    i = x.vertex
    if x.edge is None:
        if kind == "v":
            return ((x, Fraction(1)),) if name == i else ()
        return ((ProjBasis(i, name), Fraction(1)),) if g.src(name) == i else ()
    if kind == "v":
        return ((x, Fraction(1)),) if name == g.dst(x.edge) else ()
    return ()


def left_action_inj(graph: Graph, a: AElement, x: InjBasis) -> dict[InjBasis, Fraction]:
    """The duality action of ``a`` on a dual-basis symbol of I_i."""
    out: dict[InjBasis, Fraction] = {}
    for key, c in a.terms():
        for y, d in inj_action_key(graph, key, x):
            val = out.get(y, Fraction(0)) + c * d
            if val:
                out[y] = val
            else:
                out.pop(y, None)
    return out


def left_action_proj(graph: Graph, a: AElement, x: ProjBasis) -> dict[ProjBasis, Fraction]:
    """Multiplication in A restricted to P_i."""
    out: dict[ProjBasis, Fraction] = {}
    for key, c in a.terms():
        for y, d in proj_action_key(graph, key, x):
            val = out.get(y, Fraction(0)) + c * d
            if val:
                out[y] = val
            else:
                out.pop(y, None)
    return out
