"""Independence of the complexes from the distinguished-edge choice.

Two layers, implemented independently and cross-checked:

* :func:`pair_bijection` is the index-level bijection between the pair
  sets of two choices.  It replaces a shared terminal edge that is special
  for the target choice by the source choice's pick at the same vertex
  (mirrored on first edges for associated choices) and is its own inverse
  construction with the roles swapped.
* :func:`transport` is the chain-level isomorphism: re-normalize the index
  monomial of each basis vector in the target choice's algebra and embed
  through the target maps.  This can split one basis vector into several
  (the second Cuntz-Krieger rewrite), which the index bijection never
  does; agreement of the two layers' slice dimensions is part of the
  suite.

``check_independence`` verifies the chain-map equation, A-linearity,
sampled B-linearity, two-sided invertibility, and the dimension agreement.
When the two choices coincide the transport is asserted to be the
identity.
"""

from __future__ import annotations

import random

from .bimodule import embed, embed_beta, monomial_pool, right_action
from .complexes import (ChainVector, CheckReport, CxBasis, LeavittComplex,
                        Window, extend_linear)
from .graph import (SPECIAL, EdgeChoice, Graph, GraphError, Path, compose,
                    pair_is_valid)


def pair_bijection(graph: Graph, choice_from: EdgeChoice, choice_to: EdgeChoice,
                   pair: tuple[Path, Path]) -> tuple[Path, Path]:
    """Map an index pair of ``choice_from`` to one of ``choice_to``."""
    if choice_from.kind != choice_to.kind:
        raise GraphError("both choices must have the same kind")
    p, q = pair
    if not pair_is_valid(graph, choice_from, p, q):
        raise GraphError(f"pair ({p}, {q}) is not valid for the source choice")
    if p.is_trivial or q.is_trivial:
        return pair
    if choice_from.kind == SPECIAL:
        shared = p.edges[-1]
        if shared != q.edges[-1] or not choice_to.is_chosen(shared):
            return pair
        replacement = choice_from.chosen_at(graph.src(shared))
        p_hat, _ = graph.truncations(p)
        q_hat, _ = graph.truncations(q)
        new_p = compose(graph.edge_path(replacement), p_hat)
        new_q = compose(graph.edge_path(replacement), q_hat)
    else:
        shared = p.edges[0]
        if shared != q.edges[0] or not choice_to.is_chosen(shared):
            return pair
        replacement = choice_from.chosen_at(graph.dst(shared))
        _, p_tilde = graph.truncations(p)
        _, q_tilde = graph.truncations(q)
        new_p = compose(p_tilde, graph.edge_path(replacement))
        new_q = compose(q_tilde, graph.edge_path(replacement))
    assert new_p is not None and new_q is not None
    return new_p, new_q


def transport(cx: LeavittComplex, cx_to: LeavittComplex, x: CxBasis) -> ChainVector:
    """Rewrite a basis vector of ``cx`` in the basis of ``cx_to``.

    The index monomial is the same algebra element under both choices;
    only its normal form differs, and the target embedding is applied to
    that normal form.
    """
    _check_pairing(cx, cx_to)
    m = cx.index_monomial(x)
    renormalized = cx_to.algebra.from_pair(m.p, m.q)
    if x.symbol.edge is None:
        return embed(cx_to, renormalized)
    return embed_beta(cx_to, renormalized, x.symbol.edge)


def transport_map(cx: LeavittComplex, cx_to: LeavittComplex):
    return lambda x: transport(cx, cx_to, x)


def _check_pairing(cx: LeavittComplex, cx_to: LeavittComplex) -> None:
    if cx.graph is not cx_to.graph:
        raise GraphError("both complexes must be over the same graph")
    if cx.mode != cx_to.mode:
        raise GraphError("both complexes must be in the same mode")


def check_independence(cx: LeavittComplex, cx_to: LeavittComplex, w: Window,
                       seed: int = 0, samples: int = 500) -> CheckReport:
    """The transport is a two-sided A- and B-linear chain isomorphism."""
    _check_pairing(cx, cx_to)
    rng = random.Random(seed)
    report = CheckReport("independence", cx.graph.name, cx.mode, str(w), True, 0)
    omega = transport_map(cx, cx_to)
    omega_back = transport_map(cx_to, cx)
    identical = cx.choice == cx_to.choice
    report.extras["same_choice"] = identical

    basis = cx.window_basis(w)
    basis_to = cx_to.window_basis(w)
    gens = [("v", v) for v in cx.graph.vertices]
    gens.extend(("e", e) for e in cx.graph.edges)
    d_ops = {"d": cx.differential}

    for x in basis:
        wx = omega(x)
        report.checked += 1
        if identical and wx != ChainVector.basis(x):
            report.record_failure(f"transport != id at {x} for equal choices")
        if extend_linear(omega_back, wx) != ChainVector.basis(x):
            report.record_failure(f"round trip != id at {x}")
        if cx.window_safe(x, w, d_ops):
            lhs = extend_linear(cx_to.differential, wx)
            rhs = extend_linear(omega, cx.differential(x))
            if lhs != rhs:
                report.record_failure(f"chain-map equation fails at {x}")
        for a in gens:
            if (cx_to.left_action_key(a, wx)
                    != extend_linear(omega, cx.left_action_key(a, ChainVector.basis(x)))):
                report.record_failure(f"A-linearity fails at a={a[1]} x={x}")
    for y in basis_to:
        report.checked += 1
        if extend_linear(omega, omega_back(y)) != ChainVector.basis(y):
            report.record_failure(f"reverse round trip != id at {y}")

    # index-level bijection agrees with the window slice dimensions
    slice_dims = {}
    for l in range(w.lo, w.hi + 1):
        for i in cx.graph.vertices:
            pairs = cx.index_pairs(i, l, w.N)
            target_pairs = cx_to.index_pairs(i, l, w.N)
            mapped = [pair_bijection(cx.graph, cx.choice, cx_to.choice, pr)
                      for pr in pairs]
            report.checked += 1
            if len(set(mapped)) != len(pairs) or set(mapped) != set(target_pairs):
                report.record_failure(f"pair bijection fails on slice (i={i}, l={l})")
            slice_dims[f"{i},{l}"] = len(pairs)
    report.extras["slice_pairs"] = slice_dims

    # sampled B-linearity of the transport
    pool = monomial_pool(cx)
    sampled = []
    if basis and pool:
        for _ in range(samples):
            x = rng.choice(basis)
            b = cx.algebra.element({rng.choice(pool): 1})
            b_to = cx_to.algebra.from_pair(*_pair_of(b))
            sampled.append(f"{x};{b}")
            report.checked += 1
            lhs = extend_linear(omega, right_action(cx, ChainVector.basis(x), b))
            rhs = right_action(cx_to, transport(cx, cx_to, x), b_to)
            if lhs != rhs:
                report.record_failure(f"B-linearity fails at x={x} b={b}")
    report.extras["samples"] = sampled
    return report


def _pair_of(b) -> tuple[Path, Path]:
    (m, _), = list(b.terms())
    return m.p, m.q
