"""Window-truncated injective and projective Leavitt complexes.

A basis vector of either complex pairs a one-vertex module symbol with an
index pair: ``x.z(p,q)`` denotes the copy of the symbol ``x`` sitting in
the coproduct component indexed by ``(p, q)``.  In the injective complex
the symbols are the dual-basis elements of ``I_i`` and the pairs are the
admissible pairs with ``s(q) = i``; in the projective complex the symbols
are the basis of ``P_i`` and the pairs the associated pairs with
``t(p) = i``.  The degree of a vector is ``len(q) - len(p)``.

Both differentials raise degree by one and are implemented from their
explicit case tables:

* injective: edge duals map to the unit dual indexed by ``(p, q.a)``,
  except that when ``q`` is trivial, ``p`` ends with ``a`` and ``a`` is
  special the index rewrites through the second Cuntz-Krieger relation,
  producing ``(phat, e) - sum over the special edge's siblings``;
* projective: unit symbols peel the last edge off ``p``, or fan out over
  the incoming edges when ``p`` is trivial.

The complexes themselves are infinite; a :class:`Window` (path-length cap
plus degree interval) selects finitely many basis vectors.  All operators
are computed uncapped, and check suites only assert identities on vectors
whose relevant images stay inside the window (:meth:`LeavittComplex.
window_safe`), so every reported equality is a true statement about the
full complex rather than an artifact of truncation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .graph import (ASSOCIATED, SPECIAL, EdgeChoice, Graph, GraphError, Path,
                    compose, enumerate_index_set, is_admissible,
                    is_associated_pair, opposite_path)
from .lpa import AlgebraElement, LeavittAlgebra, Monomial
from .rsz import (AElement, AKey, InjBasis, ProjBasis, inj_action_key,
                  inj_basis_of, proj_action_key, proj_basis_of)

INJECTIVE = "injective"
PROJECTIVE = "projective"

ModuleSymbol = Union[InjBasis, ProjBasis]


@dataclass(frozen=True)
class Window:
    """Finite truncation: path-length cap N and degree interval [lo, hi]."""

    N: int
    lo: int
    hi: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("window cap N must be >= 0")
        if self.lo > self.hi:
            raise ValueError("empty degree interval")

    def holds_degree(self, l: int) -> bool:
        return self.lo <= l <= self.hi

    def holds_pair(self, p: Path, q: Path) -> bool:
        return p.length <= self.N and q.length <= self.N

    def __str__(self) -> str:
        return f"N={self.N},deg={self.lo}..{self.hi}"


@dataclass(frozen=True)
class CxBasis:
    """A complex basis vector: module symbol times index pair."""

    symbol: ModuleSymbol
    p: Path
    q: Path

    @property
    def mode(self) -> str:
        return INJECTIVE if isinstance(self.symbol, InjBasis) else PROJECTIVE

    @property
    def degree(self) -> int:
        return len(self.q.edges) - len(self.p.edges)

    def sort_key(self):
        return (self.degree, self.symbol.vertex, self.p.edges, self.p.source,
                self.q.edges, self.q.source, self.symbol.sort_key())

    def __str__(self) -> str:
        return f"{self.symbol}.z({self.p},{self.q})"


class ChainVector:
    """A finite rational linear combination of complex basis vectors."""

    __slots__ = ("_terms",)
    __hash__ = None

    def __init__(self, terms: Mapping[CxBasis, Union[Fraction, int]] = ()):
        self._terms: dict[CxBasis, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for x, c in items:
            c = Fraction(c)
            if c:
                self._terms[x] = self._terms.get(x, Fraction(0)) + c
                if not self._terms[x]:
                    del self._terms[x]

    @classmethod
    def zero(cls) -> "ChainVector":
        return cls()

    @classmethod
    def basis(cls, x: CxBasis) -> "ChainVector":
        return cls({x: 1})

    def terms(self) -> Iterator[tuple[CxBasis, Fraction]]:
        return iter(self._terms.items())

    def basis_vectors(self) -> Iterator[CxBasis]:
        return iter(self._terms)

    def coefficient(self, x: CxBasis) -> Fraction:
        return self._terms.get(x, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainVector):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "ChainVector") -> "ChainVector":
        terms = dict(self._terms)
        for x, c in other._terms.items():
            terms[x] = terms.get(x, Fraction(0)) + c
        return ChainVector(terms)

    def __sub__(self, other: "ChainVector") -> "ChainVector":
        return self + (-other)

    def __neg__(self) -> "ChainVector":
        return ChainVector({x: -c for x, c in self._terms.items()})

    def scale(self, c: Union[Fraction, int]) -> "ChainVector":
        c = Fraction(c)
        return ChainVector({x: c * d for x, d in self._terms.items()})

    def occurring_degrees(self) -> list[int]:
        return sorted({x.degree for x in self._terms})

    def in_window(self, w: Window) -> bool:
        return all(w.holds_degree(x.degree) and w.holds_pair(x.p, x.q)
                   for x in self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for x, c in sorted(self._terms.items(), key=lambda xc: xc[0].sort_key()):
            mag = abs(c)
            body = str(x) if mag == 1 else f"{mag}.{x}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"<cx: {self}>"


BasisMap = Callable[[CxBasis], ChainVector]


def extend_linear(f: BasisMap, vec: ChainVector) -> ChainVector:
    out = ChainVector()
    for x, c in vec.terms():
        out = out + f(x).scale(c)
    return out


def compose_maps(outer: BasisMap, inner: BasisMap) -> BasisMap:
    """The basis-level map x -> outer(inner(x)), linear in the middle."""
    return lambda x: extend_linear(outer, inner(x))


# mutations deliberately breaking the injective differential, used by the
# negative-control tests to prove the check suites cannot pass vacuously
MUTATION_DROP_CK2_SUM = "drop-ck2-sum"        # keep the case split, drop the sibling sum
MUTATION_SKIP_SPECIAL_CASE = "skip-special-case"  # always apply the generic formula
_MUTATIONS = (None, MUTATION_DROP_CK2_SUM, MUTATION_SKIP_SPECIAL_CASE)


class LeavittComplex:
    """One mode of the Leavitt complex for a graph with a fixed edge choice.

    ``choice.kind`` must be "special" for the injective mode and
    "associated" for the projective mode.  The projective mode carries the
    Leavitt path algebra of the opposite graph (with the induced special
    choice); the injective mode carries the algebra of the graph itself.
    """

    def __init__(self, graph: Graph, choice: EdgeChoice, mode: str | None = None,
                 mutation: str | None = None):
        if mode is None:
            mode = INJECTIVE if choice.kind == SPECIAL else PROJECTIVE
        if mode not in (INJECTIVE, PROJECTIVE):
            raise ValueError(f"unknown mode {mode!r}")
        wanted = SPECIAL if mode == INJECTIVE else ASSOCIATED
        if choice.kind != wanted:
            raise GraphError(f"{mode} mode needs a {wanted} edge choice")
        if choice.graph is not graph:
            raise GraphError("edge choice belongs to a different graph")
        if mutation not in _MUTATIONS:
            raise ValueError(f"unknown mutation {mutation!r}")
        if mutation is not None and mode != INJECTIVE:
            raise ValueError("differential mutations exist for the injective mode only")
        self.graph = graph
        self.choice = choice
        self.mode = mode
        self.mutation = mutation
        if mode == INJECTIVE:
            self.algebra = LeavittAlgebra(graph, choice)
        else:
            self.algebra = LeavittAlgebra(graph.opposite(), choice.opposite())

    def __repr__(self) -> str:
        return f"LeavittComplex({self.graph.name}, {self.mode})"

    # -- basis bookkeeping ------------------------------------------------------

    def index_vertex(self, p: Path, q: Path) -> str:
        """The vertex whose module the pair indexes."""
        return q.source if self.mode == INJECTIVE else p.target

    def module_symbols(self, i: str) -> list[ModuleSymbol]:
        if self.mode == INJECTIVE:
            return list(inj_basis_of(self.graph, i))
        return list(proj_basis_of(self.graph, i))

    def basis_vector(self, symbol: ModuleSymbol, p: Path, q: Path) -> CxBasis:
        return CxBasis(symbol, p, q)

    def is_valid_basis(self, x: CxBasis) -> bool:
        """Symbol and index pair are coherent for this mode and choice."""
        g = self.graph
        if self.mode == INJECTIVE:
            if not isinstance(x.symbol, InjBasis):
                return False
            if x.symbol.edge is not None and g.dst(x.symbol.edge) != x.symbol.vertex:
                return False
            if x.symbol.vertex != x.q.source:
                return False
            return is_admissible(g, self.choice, x.p, x.q)
        if not isinstance(x.symbol, ProjBasis):
            return False
        if x.symbol.edge is not None and g.src(x.symbol.edge) != x.symbol.vertex:
            return False
        if x.symbol.vertex != x.p.target:
            return False
        return is_associated_pair(g, self.choice, x.p, x.q)

    def index_pairs(self, i: str, l: int, N: int) -> list[tuple[Path, Path]]:
        return enumerate_index_set(self.graph, self.choice, i, l, N)

    def window_basis(self, w: Window) -> list[CxBasis]:
        """All basis vectors inside the window, in a deterministic order."""
        out: list[CxBasis] = []
        for l in range(w.lo, w.hi + 1):
            for i in self.graph.vertices:
                symbols = self.module_symbols(i)
                for p, q in self.index_pairs(i, l, w.N):
                    out.extend(CxBasis(s, p, q) for s in symbols)
        return out

    def index_monomial(self, x: CxBasis) -> Monomial:
        """The algebra monomial carried by the vector's index pair.

        Projective-mode pairs translate to the opposite graph, where the
        complex's algebra lives.
        """
        if self.mode == INJECTIVE:
            return Monomial(x.p, x.q)
        return Monomial(opposite_path(x.p), opposite_path(x.q))

    def pair_of_monomial(self, m: Monomial) -> tuple[Path, Path]:
        if self.mode == INJECTIVE:
            return m.p, m.q
        return opposite_path(m.p), opposite_path(m.q)

    # -- the differential -------------------------------------------------------

    def differential(self, x: CxBasis) -> ChainVector:
        if self.mode == INJECTIVE:
            return self._d_inj(x)
        return self._d_proj(x)

    def differential_map(self) -> BasisMap:
        return self.differential

    def _d_inj(self, x: CxBasis) -> ChainVector:
        g = self.graph
        alpha = x.symbol.edge
        if alpha is None:
            return ChainVector.zero()
        s_alpha = g.src(alpha)
        unit = InjBasis(s_alpha)
        special_case = (self.mutation != MUTATION_SKIP_SPECIAL_CASE
                        and x.q.is_trivial
                        and not x.p.is_trivial
                        and x.p.edges[-1] == alpha
                        and self.choice.is_chosen(alpha))
        if special_case:
            p_hat, _ = g.truncations(x.p)
            terms: dict[CxBasis, int] = {
                CxBasis(unit, p_hat, g.trivial_path(s_alpha)): 1}
            if self.mutation != MUTATION_DROP_CK2_SUM:
                for b in self.choice.siblings(alpha):
                    bp = compose(g.edge_path(b), p_hat)
                    assert bp is not None
                    terms[CxBasis(unit, bp, g.edge_path(b))] = -1
            return ChainVector(terms)
        q_alpha = compose(x.q, g.edge_path(alpha))
        assert q_alpha is not None, "symbol edge must end at s(q)"
        return ChainVector({CxBasis(unit, x.p, q_alpha): 1})

    def _d_proj(self, x: CxBasis) -> ChainVector:
        g = self.graph
        if x.symbol.edge is not None:
            return ChainVector.zero()
        i = x.symbol.vertex
        if not x.p.is_trivial:
            beta = x.p.edges[-1]
            p_hat, _ = g.truncations(x.p)
            return ChainVector({CxBasis(ProjBasis(g.src(beta), beta), p_hat, x.q): 1})
        terms: dict[CxBasis, int] = {}
        for beta in g.in_edges(i):
            q_beta = compose(x.q, g.edge_path(beta))
            assert q_beta is not None, "incoming edge must end at s(q)"
            terms[CxBasis(ProjBasis(g.src(beta), beta),
                          g.trivial_path(g.src(beta)), q_beta)] = 1
        return ChainVector(terms)

    # -- left A-action ------------------------------------------------------------

    def left_action_key(self, a: AKey, vec: ChainVector) -> ChainVector:
        """Act by a basis element of A on the module symbols, index-wise."""
        out: dict[CxBasis, Fraction] = {}
        for x, c in vec.terms():
            if self.mode == INJECTIVE:
                moved = inj_action_key(self.graph, a, x.symbol)
            else:
                moved = proj_action_key(self.graph, a, x.symbol)
            for sym, d in moved:
                y = CxBasis(sym, x.p, x.q)
                out[y] = out.get(y, Fraction(0)) + c * d
        return ChainVector(out)

    def left_action(self, a: AElement, vec: ChainVector) -> ChainVector:
        out = ChainVector.zero()
        for key, c in a.terms():
            out = out + self.left_action_key(key, vec).scale(c)
        return out

    # -- window safety ---------------------------------------------------------------

    def window_safe(self, x: CxBasis, w: Window,
                    ops: Mapping[str, BasisMap]) -> bool:
        """True when every listed operator keeps x inside the window.

        Operators are computed uncapped; a vector is safe when each named
        image has all its basis terms within the window, so an identity
        asserted on safe vectors cannot be broken by truncation.
        """
        return all(op(x).in_window(w) for op in ops.values())

    def safe_basis(self, w: Window, ops: Mapping[str, BasisMap]) -> list[CxBasis]:
        return [x for x in self.window_basis(w) if self.window_safe(x, w, ops)]


def inj_differential(graph: Graph, choice: EdgeChoice, x: CxBasis,
                     mutation: str | None = None) -> ChainVector:
    return LeavittComplex(graph, choice, INJECTIVE, mutation=mutation).differential(x)


def proj_differential(graph: Graph, choice: EdgeChoice, x: CxBasis) -> ChainVector:
    return LeavittComplex(graph, choice, PROJECTIVE).differential(x)


# -- check reports ------------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one verification suite on one graph/mode/window."""

    suite: str
    graph: str
    mode: str
    window: str
    passed: bool
    checked: int
    counterexamples: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    MAX_SHOWN = 3

    def record_failure(self, description: str) -> None:
        self.passed = False
        if len(self.counterexamples) < 50:
            self.counterexamples.append(description)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        bits = [self.suite, self.graph, self.mode, self.window, verdict,
                f"checked={self.checked}"]
        bits.extend(f"counterexample={c}" for c in self.counterexamples[: self.MAX_SHOWN])
        return " ".join(bits)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "graph": self.graph,
            "mode": self.mode,
            "window": self.window,
            "passed": self.passed,
            "checked": self.checked,
            "counterexamples": list(self.counterexamples),
            "extras": self.extras,
        }


def write_json_report(path: str, reports: Sequence[CheckReport], meta: dict) -> None:
    doc = dict(meta)
    doc["suites"] = [r.to_dict() for r in reports]
    doc["all_passed"] = all(r.passed for r in reports)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- suites -----------------------------------------------------------------------

def check_d_squared(cx: LeavittComplex, w: Window) -> CheckReport:
    """The differential squares to zero, exactly, on doubly-safe vectors.

    Also asserts normal-form closure: every basis vector produced by the
    differential must be valid for the mode (symbol endpoints match and
    the index pair satisfies the pair predicate), so a differential that
    emits out-of-basis indexes is reported here even though its square
    still vanishes.
    """
    d = cx.differential
    ops = {"d": d, "dd": compose_maps(d, d)}
    report = CheckReport("d2", cx.graph.name, cx.mode, str(w), True, 0)
    for x in cx.window_basis(w):
        image = d(x)
        for y in image.basis_vectors():
            if not cx.is_valid_basis(y):
                report.record_failure(f"{x} -> invalid index {y}")
        if not cx.window_safe(x, w, ops):
            continue
        report.checked += 1
        square = extend_linear(d, image)
        if not square.is_zero:
            report.record_failure(f"{x} -> d(d(x)) = {square}")
    return report


def check_A_linearity(cx: LeavittComplex, w: Window) -> CheckReport:
    """d(a.x) = a.d(x) for every algebra generator a and every d-safe vector."""
    d = cx.differential
    ops = {"d": d}
    gens: list[AKey] = [("v", v) for v in cx.graph.vertices]
    gens.extend(("e", e) for e in cx.graph.edges)
    report = CheckReport("alinear", cx.graph.name, cx.mode, str(w), True, 0)
    for x in cx.window_basis(w):
        if not cx.window_safe(x, w, ops):
            continue
        dx = d(x)
        vec = ChainVector.basis(x)
        for a in gens:
            report.checked += 1
            lhs = extend_linear(d, cx.left_action_key(a, vec))
            rhs = cx.left_action_key(a, dx)
            if lhs != rhs:
                report.record_failure(f"a={a[1]} x={x}: d(a.x)-a.d(x) = {lhs - rhs}")
    return report
