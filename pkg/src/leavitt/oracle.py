"""Brute-force normalizer on free words over the algebra generators.

This is the independent cross-check for :meth:`LeavittAlgebra.multiply`.
A word is a tuple of symbols ``("v", id)``, ``("e", id)`` or ``("g", id)``
(vertex, edge, ghost edge), read left to right in product order.  The
rewriter applies the defining relations one adjacent pair at a time until
no rule matches, tracking the result as a linear combination of words; a
terminal word is a single vertex or a block of ghosts followed by a block
of reals, which is exactly a normal-form monomial.

By design this shares no code with the algebra's multiplication beyond the
``Path``/``Monomial`` value types: independence is its entire value, so it
is deliberately naive and is trusted only at small word lengths.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Graph, Path
from .lpa import AlgebraElement, LeavittAlgebra, Monomial

Symbol = tuple[str, str]
Word = tuple[Symbol, ...]

DEFAULT_MAX_STEPS = 10 ** 6


class RewriteBudgetExceeded(RuntimeError):
    """The rewrite-step cap was hit; termination is guaranteed, so this is a bug."""


def vertex_symbol(v: str) -> Symbol:
    return ("v", v)


def edge_symbol(e: str) -> Symbol:
    return ("e", e)


def ghost_symbol(e: str) -> Symbol:
    return ("g", e)


def word_str(word: Word) -> str:
    return ".".join(name + ("*" if kind == "g" else "") for kind, name in word)


def _rewrite_at(algebra: LeavittAlgebra, word: Word, i: int):
    """Apply the one matching relation to ``word[i], word[i+1]``.

    Returns a list of (word, coefficient) replacements, or None when no
    rule matches at this position.
    """
    g = algebra.graph
    (k1, n1), (k2, n2) = word[i], word[i + 1]
    head, tail = word[:i], word[i + 2:]

    def out(*pairs):
        return [(head + mid + tail, Fraction(c)) for mid, c in pairs]

    if k1 == "v" and k2 == "v":
        return out(((word[i],), 1)) if n1 == n2 else []
    if k1 == "v":
        # v e = e when v = t(e); v e* = e* when v = s(e)
        keep = g.dst(n2) == n1 if k2 == "e" else g.src(n2) == n1
        return out(((word[i + 1],), 1)) if keep else []
    if k2 == "v":
        # e v = e when v = s(e); e* v = e* when v = t(e)
        keep = g.src(n1) == n2 if k1 == "e" else g.dst(n1) == n2
        return out(((word[i],), 1)) if keep else []
    if k1 == "e" and k2 == "g":
        # first Cuntz-Krieger relation: e f* = delta t(e)
        return out(((vertex_symbol(g.dst(n1)),), 1)) if n1 == n2 else []
    if k1 == "e" and k2 == "e":
        # adjacent reals must compose (right factor acts first)
        return None if g.src(n1) == g.dst(n2) else []
    if k1 == "g" and k2 == "g":
        return None if g.dst(n1) == g.src(n2) else []
    # ghost then real: zero unless the targets meet; the matching special
    # pair g*g expands by the second Cuntz-Krieger relation
    if g.dst(n1) != g.dst(n2):
        return []
    if n1 == n2 and algebra.choice.is_chosen(n1):
        v = g.src(n1)
        repl = [((vertex_symbol(v),), 1)]
        repl.extend((((ghost_symbol(b), edge_symbol(b))), -1)
                    for b in algebra.choice.siblings(n1))
        return out(*repl)
    return None


def _redex_positions(algebra: LeavittAlgebra, word: Word) -> list[int]:
    positions = []
    for i in range(len(word) - 1):
        if _rewrite_at(algebra, word, i) is not None:
            positions.append(i)
    return positions


def _word_to_element(algebra: LeavittAlgebra, word: Word) -> AlgebraElement:
    """Read a terminal word off as a normal-form monomial."""
    g = algebra.graph
    if len(word) == 1 and word[0][0] == "v":
        v = word[0][1]
        t = g.trivial_path(v)
        return algebra.element({Monomial(t, t): 1})
    ghosts = [n for k, n in word if k == "g"]
    reals = [n for k, n in word if k == "e"]
    assert len(ghosts) + len(reals) == len(word), f"non-terminal word {word_str(word)}"
    p = g.path(ghosts) if ghosts else None
    q = g.path(list(reversed(reals))) if reals else None
    if p is None:
        assert q is not None
        p = g.trivial_path(q.target)
    if q is None:
        q = g.trivial_path(p.target)
    return algebra.element({Monomial(p, q): 1})


def normalize_word(algebra: LeavittAlgebra, word: Sequence[Symbol],
                   strategy: str = "leftmost",
                   max_steps: int = DEFAULT_MAX_STEPS,
                   rng: random.Random | None = None) -> AlgebraElement:
    """Exhaustively rewrite a free word to its normal form.

    ``strategy`` picks which redex of a word is contracted first:
    "leftmost", "rightmost", or "random" (needs ``rng``).  All strategies
    agree at the fixpoint; :func:`confluence_probe` asserts this.

    The empty word denotes the algebra unit.  Raises
    :class:`RewriteBudgetExceeded` after ``max_steps`` single rewrites.
    """
    if strategy == "random" and rng is None:
        raise ValueError("random strategy needs an rng")
    if not word:
        return algebra.one()
    pending: dict[Word, Fraction] = {tuple(word): Fraction(1)}
    done: dict[Word, Fraction] = {}
    steps = 0
    while pending:
        word_now, coeff = next(iter(sorted(pending.items()))) if strategy != "random" \
            else rng.choice(sorted(pending.items()))
        del pending[word_now]
        if not coeff:
            continue
        positions = _redex_positions(algebra, word_now)
        if not positions:
            done[word_now] = done.get(word_now, Fraction(0)) + coeff
            continue
        if strategy == "leftmost":
            i = positions[0]
        elif strategy == "rightmost":
            i = positions[-1]
        elif strategy == "random":
            i = rng.choice(positions)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        steps += 1
        if steps > max_steps:
            raise RewriteBudgetExceeded(
                f"no fixpoint after {max_steps} rewrites on {word_str(word)}")
        for new_word, c in _rewrite_at(algebra, word_now, i):
            pending[new_word] = pending.get(new_word, Fraction(0)) + coeff * c
    result = algebra.zero()
    for w, c in done.items():
        if c:
            result = result + _word_to_element(algebra, w).scale(c)
    return result


def confluence_probe(algebra: LeavittAlgebra, word: Sequence[Symbol],
                     seed: int = 0, rounds: int = 5,
                     max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """Normalize under several strategies and report whether all agree."""
    reference = normalize_word(algebra, word, "leftmost", max_steps)
    if normalize_word(algebra, word, "rightmost", max_steps) != reference:
        return False
    rng = random.Random(seed)
    for _ in range(rounds):
        if normalize_word(algebra, word, "random", max_steps, rng=rng) != reference:
            return False
    return True


def generator_symbols(graph: Graph) -> list[Symbol]:
    syms = [vertex_symbol(v) for v in graph.vertices]
    syms.extend(edge_symbol(e) for e in graph.edges)
    syms.extend(ghost_symbol(e) for e in graph.edges)
    return syms


def random_word(graph: Graph, rng: random.Random, max_len: int = 8) -> Word:
    syms = generator_symbols(graph)
    n = rng.randint(1, max_len)
    return tuple(rng.choice(syms) for _ in range(n))


def word_element(algebra: LeavittAlgebra, word: Sequence[Symbol]) -> AlgebraElement:
    """Fold the word through the algebra's own multiplication (no rewriting here)."""
    value = algebra.one()
    for kind, name in word:
        if kind == "v":
            gen = algebra.vertex(name)
        elif kind == "e":
            gen = algebra.edge(name)
        else:
            gen = algebra.ghost(name)
        value = algebra.multiply(value, gen)
    return value


def check_nf_oracle(algebra: LeavittAlgebra, seed: int = 0, samples: int = 500,
                    max_len: int = 8, max_steps: int = DEFAULT_MAX_STEPS,
                    graph_name: str | None = None, mode: str = "-",
                    window: str = "-"):
    """Cross-validate the algebra's multiplication against the rewriter.

    For each seeded random word: the fold through ``multiply`` must equal
    the rewriter's normal form, the rewriter must agree with itself under
    every strategy, and normalizing must commute with splitting the word
    in two (the homomorphism law).  A rewrite-budget overrun propagates as
    :class:`RewriteBudgetExceeded` rather than failing the report.
    """
    from .complexes import CheckReport  # local import; complexes sits above us

    rng = random.Random(seed)
    name = graph_name if graph_name is not None else algebra.graph.name
    report = CheckReport("nf-oracle", name, mode, window, True, 0)
    words: list[str] = []
    for _ in range(samples):
        word = random_word(algebra.graph, rng, max_len)
        words.append(word_str(word))
        reference = normalize_word(algebra, word, max_steps=max_steps)
        report.checked += 1
        if word_element(algebra, word) != reference:
            report.record_failure(f"multiply != rewriter on {word_str(word)}")
        report.checked += 1
        if not confluence_probe(algebra, word, seed=rng.randint(0, 2 ** 30),
                                max_steps=max_steps):
            report.record_failure(f"strategies disagree on {word_str(word)}")
        cut = rng.randint(0, len(word))
        left = normalize_word(algebra, word[:cut], max_steps=max_steps)
        right = normalize_word(algebra, word[cut:], max_steps=max_steps)
        report.checked += 1
        if algebra.multiply(left, right) != reference:
            report.record_failure(
                f"normalize(w1.w2) != normalize(w1).normalize(w2) on "
                f"{word_str(word)} cut at {cut}")
    report.extras["samples"] = words
    return report
