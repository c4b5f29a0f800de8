"""The Leavitt path algebra of a graph, over exact rationals.

Elements are rational linear combinations of normal-form monomials ``p*q``,
one for each admissible pair ``(p, q)`` of the graph's special edge choice.
``p*q`` stands for the ghost path ``p*`` followed by the real path ``q``;
its degree is ``len(q) - len(p)``.

Multiplication convention (load-bearing): in any product the right factor
acts first, matching the defining relation ``t(e)e = e s(e) = e``.  The
middle of a monomial product ``(p*q)(u*v)`` cancels by the first Cuntz-
Krieger relation ``e f* = delta_{e,f} t(e)`` working outward from the first
traversed edges of ``q`` and ``u``, so the product is nonzero exactly when
one of ``q``, ``u`` is an initial segment of the other.  A resulting pair
whose components both end in the same special edge ``g`` is expanded by the
second Cuntz-Krieger relation, written as the rewrite::

    (g.phat)*(g.qhat)  ->  phat*qhat - sum_{b in S(g)} (b.phat)*(b.qhat)

whose first summand is strictly shorter and whose other summands are
already in normal form, so the rewriting terminates.

The coefficient field is fixed to ``fractions.Fraction`` so every identity
checked downstream is an exact equality with a decidable zero test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .graph import (SPECIAL, EdgeChoice, Graph, GraphError, Path, compose,
                    is_admissible)

Scalar = Fraction
ScalarLike = Union[Fraction, int]


class ExprError(ValueError):
    """Syntax or resolution error in the expression language."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"position {pos}: {message}"
        super().__init__(message)
        self.pos = pos


@dataclass(frozen=True)
class Monomial:
    """Normal-form basis monomial ``p*q`` for an admissible pair ``(p, q)``."""

    p: Path
    q: Path

    @property
    def degree(self) -> int:
        return len(self.q.edges) - len(self.p.edges)

    def sort_key(self):
        return (self.degree, self.p.edges, self.p.source, self.q.edges, self.q.source)

    def __str__(self) -> str:
        factors = [f"{e}*" for e in self.p.edges]
        factors.extend(reversed(self.q.edges))
        if not factors:
            return self.p.source
        return ".".join(factors)


class AlgebraElement:
    """A finite rational linear combination of normal-form monomials.

    Immutable in use: arithmetic returns new elements.  Zero coefficients
    are never stored.
    """

    __slots__ = ("algebra", "_terms")
    __hash__ = None

    def __init__(self, algebra: "LeavittAlgebra", terms: Mapping[Monomial, ScalarLike]):
        self.algebra = algebra
        self._terms: dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            c = Fraction(c)
            if c:
                self._terms[m] = c

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def monomials(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self._terms == other._terms

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return AlgebraElement(self.algebra, terms)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: ScalarLike) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.algebra, {m: c * x for m, x in self._terms.items()})

    def degree(self):
        """Common degree of all terms, or "mixed", or "zero" for 0."""
        if not self._terms:
            return "zero"
        degrees = {m.degree for m in self._terms}
        if len(degrees) == 1:
            return degrees.pop()
        return "mixed"

    def homogeneous_component(self, l: int) -> "AlgebraElement":
        return AlgebraElement(self.algebra,
                              {m: c for m, c in self._terms.items() if m.degree == l})

    def occurring_degrees(self) -> list[int]:
        return sorted({m.degree for m in self._terms})

    def _check_same(self, other: "AlgebraElement") -> None:
        if self.algebra is not other.algebra:
            raise ValueError("elements belong to different algebras")

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for m, c in sorted(self._terms.items(), key=lambda mc: mc[0].sort_key()):
            mag = abs(c)
            body = str(m) if mag == 1 else f"{mag}.{m}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"<{self}>"


class LeavittAlgebra:
    """The Leavitt path algebra of a graph with a fixed special edge choice.

    The choice fixes the normal form (which pairs are basis monomials); the
    underlying algebra is the same for every choice.
    """

    def __init__(self, graph: Graph, choice: EdgeChoice):
        if choice.kind != SPECIAL:
            raise GraphError("a Leavitt algebra needs a special edge choice")
        if choice.graph is not graph:
            raise GraphError("edge choice belongs to a different graph")
        self.graph = graph
        self.choice = choice
        self._pair_cache: dict[tuple[Path, Path], tuple[tuple[Monomial, int], ...]] = {}
        self._mul_cache: dict[tuple[Monomial, Monomial], tuple[tuple[Monomial, int], ...]] = {}

    def __repr__(self) -> str:
        return f"LeavittAlgebra({self.graph.name}, {self.choice!r})"

    # -- element construction ------------------------------------------------

    def element(self, terms: Mapping[Monomial, ScalarLike]) -> AlgebraElement:
        for m in terms:
            self._check_monomial(m)
        return AlgebraElement(self, terms)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {self._vertex_monomial(v): 1
                                     for v in self.graph.vertices})

    def vertex(self, v: str) -> AlgebraElement:
        if not self.graph.has_vertex(v):
            raise GraphError(f"unknown vertex {v!r}")
        return AlgebraElement(self, {self._vertex_monomial(v): 1})

    def edge(self, e: str) -> AlgebraElement:
        if not self.graph.has_edge(e):
            raise GraphError(f"unknown edge {e!r}")
        t = self.graph.trivial_path(self.graph.dst(e))
        return AlgebraElement(self, {Monomial(t, self.graph.edge_path(e)): 1})

    def ghost(self, e: str) -> AlgebraElement:
        if not self.graph.has_edge(e):
            raise GraphError(f"unknown edge {e!r}")
        t = self.graph.trivial_path(self.graph.dst(e))
        return AlgebraElement(self, {Monomial(self.graph.edge_path(e), t): 1})

    def generator(self, ident: str, ghost: bool = False) -> AlgebraElement:
        """Resolve an identifier to a vertex or edge generator.

        A ghost marker on a vertex is accepted and returns the vertex
        itself (``v* = v``).
        """
        is_vertex = self.graph.has_vertex(ident)
        is_edge = self.graph.has_edge(ident)
        if is_vertex and is_edge:
            raise ExprError(f"{ident!r} names both a vertex and an edge; "
                            "rename one of them in the graph file")
        if is_edge:
            return self.ghost(ident) if ghost else self.edge(ident)
        if is_vertex:
            return self.vertex(ident)
        raise ExprError(f"unknown identifier {ident!r}")

    def monomial(self, p: Path, q: Path) -> AlgebraElement:
        m = Monomial(p, q)
        self._check_monomial(m)
        return AlgebraElement(self, {m: 1})

    def from_pair(self, p: Path, q: Path, coeff: ScalarLike = 1) -> AlgebraElement:
        """The element ``p*q`` of any composable pair, in normal form."""
        if p.target != q.target:
            raise GraphError("p and q must share their target")
        terms: dict[Monomial, Fraction] = {}
        c = Fraction(coeff)
        for m, sign in self.normalize_pair(p, q):
            terms[m] = terms.get(m, Fraction(0)) + sign * c
        return AlgebraElement(self, terms)

    def _vertex_monomial(self, v: str) -> Monomial:
        t = self.graph.trivial_path(v)
        return Monomial(t, t)

    def _check_monomial(self, m: Monomial) -> None:
        if not is_admissible(self.graph, self.choice, m.p, m.q):
            raise GraphError(f"pair ({m.p}, {m.q}) is not admissible; "
                             "not a normal-form monomial")

    def is_admissible_pair(self, p: Path, q: Path) -> bool:
        return is_admissible(self.graph, self.choice, p, q)

    # -- normal form ---------------------------------------------------------

    def normalize_pair(self, p: Path, q: Path) -> tuple[tuple[Monomial, int], ...]:
        """Expand the pair ``(p, q)`` into signed normal-form monomials."""
        key = (p, q)
        cached = self._pair_cache.get(key)
        if cached is not None:
            return cached
        out: list[tuple[Monomial, int]] = []
        cur_p, cur_q = p, q
        g = self.graph
        while not is_admissible(g, self.choice, cur_p, cur_q):
            # both nonempty, ending in the same special edge
            gamma = cur_p.edges[-1]
            p_hat, _ = g.truncations(cur_p)
            q_hat, _ = g.truncations(cur_q)
            for b in self.choice.siblings(gamma):
                bp = compose(g.edge_path(b), p_hat)
                bq = compose(g.edge_path(b), q_hat)
                out.append((Monomial(bp, bq), -1))
            cur_p, cur_q = p_hat, q_hat
        out.append((Monomial(cur_p, cur_q), 1))
        result = tuple(out)
        self._pair_cache[key] = result
        return result

    # -- multiplication --------------------------------------------------------

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Product in the Leavitt path algebra; the right factor acts first."""
        if x.algebra is not self or y.algebra is not self:
            raise ValueError("elements belong to a different algebra")
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in x.terms():
            for m2, c2 in y.terms():
                c = c1 * c2
                for m, sign in self._mul_monomials(m1, m2):
                    acc[m] = acc.get(m, Fraction(0)) + sign * c
        return AlgebraElement(self, acc)

    def right_mult(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Alias of :meth:`multiply` naming the action convention.

        ``right_mult(x, y)`` appends ``y`` on the right, so ``y`` is applied
        first under the right-factor-acts-first convention.  The homotopy
        and differential formulas are phrased through this operation.
        """
        return self.multiply(x, y)

    def _mul_monomials(self, m1: Monomial, m2: Monomial) -> tuple[tuple[Monomial, int], ...]:
        key = (m1, m2)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        q, u = m1.q, m2.p
        if q.length >= u.length:
            rest = self._strip_prefix(q, u)
            if rest is None:
                result: tuple[tuple[Monomial, int], ...] = ()
            else:
                new_q = compose(rest, m2.q)
                assert new_q is not None
                result = self.normalize_pair(m1.p, new_q)
        else:
            rest = self._strip_prefix(u, q)
            if rest is None:
                result = ()
            else:
                new_p = compose(rest, m1.p)
                assert new_p is not None
                result = self.normalize_pair(new_p, m2.q)
        self._mul_cache[key] = result
        return result

    @staticmethod
    def _strip_prefix(longer: Path, prefix: Path) -> Path | None:
        """Remainder of ``longer`` after its initial segment ``prefix``, or None."""
        if longer.source != prefix.source:
            return None
        n = prefix.length
        if longer.edges[:n] != prefix.edges:
            return None
        return Path(prefix.target, longer.target, longer.edges[n:])

    # -- expression language -----------------------------------------------------

    def parse(self, text: str) -> AlgebraElement:
        """Evaluate an expression in the grammar::

            expr   := '-'? term (('+'|'-') term)*
            term   := (rational '.')? factor ('.' factor)*
            factor := IDENT '*'? | '(' expr ')'
            rational := INT ('/' INT)?

        ``.`` is multiplication; a trailing ``*`` marks a ghost edge.  The
        leading minus is a convenience extension so printed elements parse
        back.
        """
        return _ExprParser(self, text).parse()


_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")


class _ExprParser:
    def __init__(self, algebra: LeavittAlgebra, text: str):
        self.algebra = algebra
        self.text = text
        self.pos = 0

    # one-character tokens plus INT and IDENT; whitespace insignificant
    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _take(self, ch: str) -> None:
        if self._peek() != ch:
            raise ExprError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def _int(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ExprError("expected an integer", start)
        return int(self.text[start:self.pos])

    def _ident(self) -> str:
        self._skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or self.text[self.pos] not in _IDENT_START:
            raise ExprError("expected an identifier", self.pos)
        while self.pos < len(self.text) and self.text[self.pos] in _IDENT_CONT:
            self.pos += 1
        return self.text[start:self.pos]

    def parse(self) -> AlgebraElement:
        value = self._expr()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ExprError("trailing input", self.pos)
        return value

    def _expr(self) -> AlgebraElement:
        negate = False
        if self._peek() == "-":
            self._take("-")
            negate = True
        value = self._term()
        if negate:
            value = -value
        while self._peek() in "+-":
            op = self._peek()
            self._take(op)
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> AlgebraElement:
        coeff: Fraction | None = None
        if self._peek().isdigit():
            num = self._int()
            den = 1
            if self._peek() == "/":
                self._take("/")
                den = self._int()
                if den == 0:
                    raise ExprError("zero denominator", self.pos)
            coeff = Fraction(num, den)
            self._take(".")
        value = self._factor()
        while self._peek() == ".":
            self._take(".")
            value = value * self._factor()
        if coeff is not None:
            value = value.scale(coeff)
        return value

    def _factor(self) -> AlgebraElement:
        if self._peek() == "(":
            self._take("(")
            value = self._expr()
            self._take(")")
            return value
        start = self.pos
        ident = self._ident()
        ghost = False
        if self.pos < len(self.text) and self.text[self.pos] == "*":
            self.pos += 1
            ghost = True
        try:
            return self.algebra.generator(ident, ghost=ghost)
        except GraphError as exc:
            raise ExprError(str(exc), start) from exc
