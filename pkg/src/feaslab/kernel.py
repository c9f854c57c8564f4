"""Sequent-calculus proof kernel.

A proof is a tree of nodes; every node stores its full conclusion sequent,
a rule tag, and premises.  Rules carry no principal-formula annotations
except where genuinely needed (theory-axiom instantiations, quantifier
witnesses and eigenvariables); the checker re-infers everything else by
multiset bookkeeping.

Theory axioms come in two shapes sharing one tag:

  * leaf (no premises): the instantiated schema itself as a sequent,
  * applied (one premise per schema antecedent): premise i proves
    Gamma_i |- Delta_i, Phi_i and the conclusion merges the contexts and
    concludes the schema's succedent.

The applied shape is what makes genuinely cut-free derivations of facts
like |- F(n) possible at all; with leaves only, no right rule could ever
discharge the antecedents.

`analyze` is the single source of truth for rule correctness and for the
occurrence-level correspondences the flow-graph builder consumes.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from . import semantics
from .lang import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Quant,
    Sequent,
    Signature,
    Term,
    Var,
    atom,
    conj,
    dag_size,
    disj,
    formula_str,
    free_vars,
    fresh_name,
    imp,
    neg,
    parse_sequent,
    parse_term,
    sequent_str,
    subst_formula,
    subst_term,
    substitute,
    term_str,
    var,
    _children,
)


class KernelError(Exception):
    pass


class CheckError(KernelError):
    """A proof failed validation; the message names the offending node."""


RULE_TAGS = frozenset(
    {
        "LogicalAxiom",
        "TheoryAxiom",
        "EqOracle",
        "Cut",
        "WeakenLeft",
        "WeakenRight",
        "ContractLeft",
        "ContractRight",
        "AndLeft",
        "AndRight",
        "OrLeft",
        "OrRight",
        "ImpliesLeft",
        "ImpliesRight",
        "NotLeft",
        "NotRight",
        "ForallLeft",
        "ForallRight",
        "ExistsLeft",
        "ExistsRight",
    }
)

_TERM_RULES = ("ForallLeft", "ExistsRight")
_EIGEN_RULES = ("ForallRight", "ExistsLeft")


@dataclass(frozen=True)
class Rule:
    tag: str
    axiom: Optional[str] = None  # TheoryAxiom: schema name
    subst: Optional[tuple] = None  # TheoryAxiom: sorted (var, Term) pairs
    term: Optional[Term] = None  # ForallLeft / ExistsRight witness
    eigen: Optional[str] = None  # ForallRight / ExistsLeft eigenvariable

    def __post_init__(self):
        if self.tag not in RULE_TAGS:
            raise KernelError(f"unknown rule tag {self.tag!r}")
        if (self.axiom is not None or self.subst is not None) and self.tag != "TheoryAxiom":
            raise KernelError(f"{self.tag} carries no axiom data")
        if self.tag == "TheoryAxiom" and (self.axiom is None or self.subst is None):
            raise KernelError("TheoryAxiom needs an axiom name and substitution")
        if self.term is not None and self.tag not in _TERM_RULES:
            raise KernelError(f"{self.tag} carries no witness term")
        if self.tag in _TERM_RULES and self.term is None:
            raise KernelError(f"{self.tag} needs a witness term")
        if self.eigen is not None and self.tag not in _EIGEN_RULES:
            raise KernelError(f"{self.tag} carries no eigenvariable")
        if self.tag in _EIGEN_RULES and self.eigen is None:
            raise KernelError(f"{self.tag} needs an eigenvariable")

    def subst_dict(self) -> dict:
        return dict(self.subst or ())


class Proof:
    """One node of a proof tree.  Subtrees may be shared as Python objects;
    all size accounting still counts them once per occurrence."""

    __slots__ = ("conclusion", "rule", "premises")

    def __init__(self, conclusion: Sequent, rule: Rule, premises: tuple = ()):
        expected = _ARITY.get(rule.tag)
        if expected is not None and len(premises) != expected:
            raise KernelError(f"{rule.tag} takes {expected} premises, got {len(premises)}")
        object.__setattr__(self, "conclusion", conclusion)
        object.__setattr__(self, "rule", rule)
        object.__setattr__(self, "premises", tuple(premises))

    def __setattr__(self, *a):
        raise AttributeError("proofs are immutable")

    def __repr__(self):
        return f"<Proof {self.rule.tag}: {sequent_str(self.conclusion)}>"


_ARITY = {
    "LogicalAxiom": 0,
    "EqOracle": 0,
    "Cut": 2,
    "WeakenLeft": 1,
    "WeakenRight": 1,
    "ContractLeft": 1,
    "ContractRight": 1,
    "AndLeft": 1,
    "AndRight": 2,
    "OrLeft": 2,
    "OrRight": 1,
    "ImpliesLeft": 2,
    "ImpliesRight": 1,
    "NotLeft": 1,
    "NotRight": 1,
    "ForallLeft": 1,
    "ForallRight": 1,
    "ExistsLeft": 1,
    "ExistsRight": 1,
}


def end_sequent(p: Proof) -> Sequent:
    return p.conclusion


# ---------------------------------------------------------------------------
# Multiset helpers (formulas are interned, so hashing is identity-based)


def _remove_one(fs: tuple, f: Formula) -> tuple:
    for i, g in enumerate(fs):
        if g is f:
            return fs[:i] + fs[i + 1 :]
    raise KernelError(f"formula {formula_str(f)} not present")


def _first_index(fs: tuple, f: Formula, skip: int = -1) -> int:
    for i, g in enumerate(fs):
        if g is f and i != skip:
            return i
    return -1


# ---------------------------------------------------------------------------
# Constructors.  Each builds the canonical conclusion: principal formulas go
# first in antecedents and last in succedents.


def logical_axiom(a: Formula) -> Proof:
    return Proof(Sequent((a,), (a,)), Rule("LogicalAxiom"))


def eq_leaf(lhs: Term, rhs: Term) -> Proof:
    return Proof(Sequent((), (atom("=", lhs, rhs),)), Rule("EqOracle"))


def _rule_subst(subst: dict) -> tuple:
    return tuple(sorted(subst.items(), key=lambda kv: kv[0]))


def theory_leaf(theory, name: str, subst: dict) -> Proof:
    ant, succ = theory.instantiate(name, subst)
    return Proof(
        Sequent(ant, (succ,)),
        Rule("TheoryAxiom", axiom=name, subst=_rule_subst(subst)),
    )


def theory_apply(theory, name: str, subst: dict, premises) -> Proof:
    premises = tuple(premises)
    phis, psi = theory.instantiate(name, subst)
    if len(premises) != len(phis):
        raise KernelError(f"{name} applied form needs {len(phis)} premises")
    ant = []
    succ = []
    for p, phi in zip(premises, phis):
        ant.extend(p.conclusion.ant)
        succ.extend(_remove_one(p.conclusion.succ, phi))
    succ.append(psi)
    return Proof(
        Sequent(tuple(ant), tuple(succ)),
        Rule("TheoryAxiom", axiom=name, subst=_rule_subst(subst)),
        premises,
    )


def cut(p1: Proof, p2: Proof, a: Formula) -> Proof:
    ant = p1.conclusion.ant + _remove_one(p2.conclusion.ant, a)
    succ = _remove_one(p1.conclusion.succ, a) + p2.conclusion.succ
    return Proof(Sequent(ant, succ), Rule("Cut"), (p1, p2))


def weaken_left(p: Proof, a: Formula) -> Proof:
    return Proof(Sequent((a,) + p.conclusion.ant, p.conclusion.succ), Rule("WeakenLeft"), (p,))


def weaken_right(p: Proof, a: Formula) -> Proof:
    return Proof(Sequent(p.conclusion.ant, p.conclusion.succ + (a,)), Rule("WeakenRight"), (p,))


def contract_left(p: Proof, a: Formula) -> Proof:
    ant = _remove_one(p.conclusion.ant, a)
    if _first_index(ant, a) < 0:
        raise KernelError("contraction needs two occurrences")
    return Proof(Sequent(ant, p.conclusion.succ), Rule("ContractLeft"), (p,))


def contract_right(p: Proof, a: Formula) -> Proof:
    succ = _remove_one(p.conclusion.succ, a)
    if _first_index(succ, a) < 0:
        raise KernelError("contraction needs two occurrences")
    return Proof(Sequent(p.conclusion.ant, succ), Rule("ContractRight"), (p,))


def and_left(p: Proof, a: Formula, b: Formula) -> Proof:
    ant = _remove_one(_remove_one(p.conclusion.ant, a), b)
    return Proof(Sequent((conj(a, b),) + ant, p.conclusion.succ), Rule("AndLeft"), (p,))


def and_right(p1: Proof, p2: Proof, a: Formula, b: Formula) -> Proof:
    ant = p1.conclusion.ant + p2.conclusion.ant
    succ = _remove_one(p1.conclusion.succ, a) + _remove_one(p2.conclusion.succ, b)
    return Proof(Sequent(ant, succ + (conj(a, b),)), Rule("AndRight"), (p1, p2))


def or_right(p: Proof, a: Formula, b: Formula) -> Proof:
    succ = _remove_one(_remove_one(p.conclusion.succ, a), b)
    return Proof(Sequent(p.conclusion.ant, succ + (disj(a, b),)), Rule("OrRight"), (p,))


def or_left(p1: Proof, p2: Proof, a: Formula, b: Formula) -> Proof:
    ant = _remove_one(p1.conclusion.ant, a) + _remove_one(p2.conclusion.ant, b)
    succ = p1.conclusion.succ + p2.conclusion.succ
    return Proof(Sequent((disj(a, b),) + ant, succ), Rule("OrLeft"), (p1, p2))


def implies_right(p: Proof, a: Formula, b: Formula) -> Proof:
    ant = _remove_one(p.conclusion.ant, a)
    succ = _remove_one(p.conclusion.succ, b)
    return Proof(Sequent(ant, succ + (imp(a, b),)), Rule("ImpliesRight"), (p,))


def implies_left(p1: Proof, p2: Proof, a: Formula, b: Formula) -> Proof:
    ant = (imp(a, b),) + p1.conclusion.ant + _remove_one(p2.conclusion.ant, b)
    succ = _remove_one(p1.conclusion.succ, a) + p2.conclusion.succ
    return Proof(Sequent(ant, succ), Rule("ImpliesLeft"), (p1, p2))


def not_left(p: Proof, a: Formula) -> Proof:
    succ = _remove_one(p.conclusion.succ, a)
    return Proof(Sequent((neg(a),) + p.conclusion.ant, succ), Rule("NotLeft"), (p,))


def not_right(p: Proof, a: Formula) -> Proof:
    ant = _remove_one(p.conclusion.ant, a)
    return Proof(Sequent(ant, p.conclusion.succ + (neg(a),)), Rule("NotRight"), (p,))


def forall_left(p: Proof, qf: Forall, t: Term) -> Proof:
    inst = substitute(qf.body, qf.v, t)
    ant = (qf,) + _remove_one(p.conclusion.ant, inst)
    return Proof(Sequent(ant, p.conclusion.succ), Rule("ForallLeft", term=t), (p,))


def forall_right(p: Proof, qf: Forall, eigen: str) -> Proof:
    inst = substitute(qf.body, qf.v, var(eigen))
    succ = _remove_one(p.conclusion.succ, inst) + (qf,)
    node = Proof(Sequent(p.conclusion.ant, succ), Rule("ForallRight", eigen=eigen), (p,))
    _check_eigen(node, eigen)
    return node


def exists_left(p: Proof, qf: Exists, eigen: str) -> Proof:
    inst = substitute(qf.body, qf.v, var(eigen))
    ant = (qf,) + _remove_one(p.conclusion.ant, inst)
    node = Proof(Sequent(ant, p.conclusion.succ), Rule("ExistsLeft", eigen=eigen), (p,))
    _check_eigen(node, eigen)
    return node


def exists_right(p: Proof, qf: Exists, t: Term) -> Proof:
    inst = substitute(qf.body, qf.v, t)
    succ = _remove_one(p.conclusion.succ, inst) + (qf,)
    return Proof(Sequent(p.conclusion.ant, succ), Rule("ExistsRight", term=t), (p,))


def _check_eigen(node: Proof, eigen: str):
    for f in node.conclusion.ant + node.conclusion.succ:
        if eigen in free_vars(f):
            raise KernelError(f"eigenvariable {eigen} occurs free in the conclusion")


# ---------------------------------------------------------------------------
# Rule analysis: validation + occurrence correspondences.
#
# Occurrence endpoints are ('c', side, i) for the conclusion and
# (premise_index, side, i) for premises, with side in {'L', 'R'}.


def analyze(node: Proof, theory=None, want_edges: bool = False):
    """Validate one inference step; optionally return flow edges.

    Edges are (premise_end, conclusion_end_or_other, tag) triples with tag
    one of ancestry / axiom-link / cut-link / contraction-merge.  When no
    theory is given, theory-axiom steps are matched structurally (shape
    only), which suffices for flow building on canonically built proofs.
    """
    tag = node.rule.tag
    c = node.conclusion
    ps = [q.conclusion for q in node.premises]
    fail = lambda msg: _fail(node, msg)

    if tag == "LogicalAxiom":
        if len(c.ant) != 1 or len(c.succ) != 1 or c.ant[0] is not c.succ[0]:
            fail("logical axiom must be A |- A")
        return [(("c", "L", 0), ("c", "R", 0), "axiom-link")] if want_edges else None

    if tag == "EqOracle":
        if c.ant or len(c.succ) != 1:
            fail("equality oracle concludes a single equation")
        f = c.succ[0]
        if not (isinstance(f, Atom) and f.pred == "="):
            fail("equality oracle concludes an equation")
        if theory is not None:
            verdict = theory.oracle(f.args[0], f.args[1])
            if verdict != "equal":
                fail(f"oracle verdict for {formula_str(f)} is {verdict!r}")
        return [] if want_edges else None

    if tag == "TheoryAxiom":
        return _analyze_theory_axiom(node, theory, want_edges)

    if tag == "Cut":
        for i, f in enumerate(ps[0].succ):
            j = _first_index(ps[1].ant, f)
            if j < 0:
                continue
            ant_ok = Counter(ps[0].ant) + Counter(ps[1].ant) - Counter((f,)) == Counter(c.ant)
            succ_ok = Counter(ps[0].succ) - Counter((f,)) + Counter(ps[1].succ) == Counter(c.succ)
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [((0, "R", i), (1, "L", j), "cut-link")]
                edges += _ancestry(node, consumed={(0, "R", i), (1, "L", j)}, principal=[])
                return edges
        fail("no cut formula matches the premises")

    if tag in ("WeakenLeft", "WeakenRight"):
        side = "L" if tag == "WeakenLeft" else "R"
        cs, psside = (c.ant, ps[0].ant) if side == "L" else (c.succ, ps[0].succ)
        diff = Counter(cs) - Counter(psside)
        if len(diff) != 1 or set(diff.values()) != {1}:
            fail("weakening must add exactly one formula")
        (f,) = diff
        if Counter(psside) + Counter((f,)) != Counter(cs):
            fail("weakening context mismatch")
        if side == "L" and Counter(c.succ) != Counter(ps[0].succ):
            fail("weakening must leave the other side unchanged")
        if side == "R" and Counter(c.ant) != Counter(ps[0].ant):
            fail("weakening must leave the other side unchanged")
        if not want_edges:
            return None
        i = _first_index(cs, f)
        return _ancestry(node, consumed=set(), principal=[("c", side, i)])

    if tag in ("ContractLeft", "ContractRight"):
        side = "L" if tag == "ContractLeft" else "R"
        cs, pside = (c.ant, ps[0].ant) if side == "L" else (c.succ, ps[0].succ)
        diff = Counter(pside) - Counter(cs)
        if len(diff) != 1 or set(diff.values()) != {1}:
            fail("contraction must merge exactly one duplicate")
        (f,) = diff
        if _first_index(cs, f) < 0:
            fail("contracted formula must remain in the conclusion")
        if side == "L" and Counter(c.succ) != Counter(ps[0].succ):
            fail("contraction must leave the other side unchanged")
        if side == "R" and Counter(c.ant) != Counter(ps[0].ant):
            fail("contraction must leave the other side unchanged")
        if not want_edges:
            return None
        i1 = _first_index(pside, f)
        i2 = _first_index(pside, f, skip=i1)
        jc = _first_index(cs, f)
        edges = [
            ((0, side, i1), ("c", side, jc), "contraction-merge"),
            ((0, side, i2), ("c", side, jc), "contraction-merge"),
        ]
        edges += _ancestry(
            node, consumed={(0, side, i1), (0, side, i2)}, principal=[("c", side, jc)]
        )
        return edges

    if tag == "AndLeft":
        for i, f in enumerate(c.ant):
            if not isinstance(f, And):
                continue
            want = Counter(c.ant) - Counter((f,)) + Counter((f.left, f.right))
            if want == Counter(ps[0].ant) and Counter(c.succ) == Counter(ps[0].succ):
                if not want_edges:
                    return None
                a_i = _first_index(ps[0].ant, f.left)
                b_i = _first_index(ps[0].ant, f.right, skip=a_i)
                edges = [
                    ((0, "L", a_i), ("c", "L", i), "ancestry"),
                    ((0, "L", b_i), ("c", "L", i), "ancestry"),
                ]
                edges += _ancestry(
                    node, consumed={(0, "L", a_i), (0, "L", b_i)}, principal=[("c", "L", i)]
                )
                return edges
        fail("no conjunction matches an AndLeft step")

    if tag == "OrRight":
        for i, f in enumerate(c.succ):
            if not isinstance(f, Or):
                continue
            want = Counter(c.succ) - Counter((f,)) + Counter((f.left, f.right))
            if want == Counter(ps[0].succ) and Counter(c.ant) == Counter(ps[0].ant):
                if not want_edges:
                    return None
                a_i = _first_index(ps[0].succ, f.left)
                b_i = _first_index(ps[0].succ, f.right, skip=a_i)
                edges = [
                    ((0, "R", a_i), ("c", "R", i), "ancestry"),
                    ((0, "R", b_i), ("c", "R", i), "ancestry"),
                ]
                edges += _ancestry(
                    node, consumed={(0, "R", a_i), (0, "R", b_i)}, principal=[("c", "R", i)]
                )
                return edges
        fail("no disjunction matches an OrRight step")

    if tag == "AndRight":
        for i, f in enumerate(c.succ):
            if not isinstance(f, And):
                continue
            a_i = _first_index(ps[0].succ, f.left)
            b_i = _first_index(ps[1].succ, f.right)
            if a_i < 0 or b_i < 0:
                continue
            ant_ok = Counter(ps[0].ant) + Counter(ps[1].ant) == Counter(c.ant)
            succ_ok = (
                Counter(ps[0].succ)
                - Counter((f.left,))
                + Counter(ps[1].succ)
                - Counter((f.right,))
                + Counter((f,))
                == Counter(c.succ)
            )
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [
                    ((0, "R", a_i), ("c", "R", i), "ancestry"),
                    ((1, "R", b_i), ("c", "R", i), "ancestry"),
                ]
                edges += _ancestry(
                    node, consumed={(0, "R", a_i), (1, "R", b_i)}, principal=[("c", "R", i)]
                )
                return edges
        fail("no conjunction matches an AndRight step")

    if tag == "OrLeft":
        for i, f in enumerate(c.ant):
            if not isinstance(f, Or):
                continue
            a_i = _first_index(ps[0].ant, f.left)
            b_i = _first_index(ps[1].ant, f.right)
            if a_i < 0 or b_i < 0:
                continue
            ant_ok = (
                Counter(ps[0].ant)
                - Counter((f.left,))
                + Counter(ps[1].ant)
                - Counter((f.right,))
                + Counter((f,))
                == Counter(c.ant)
            )
            succ_ok = Counter(ps[0].succ) + Counter(ps[1].succ) == Counter(c.succ)
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [
                    ((0, "L", a_i), ("c", "L", i), "ancestry"),
                    ((1, "L", b_i), ("c", "L", i), "ancestry"),
                ]
                edges += _ancestry(
                    node, consumed={(0, "L", a_i), (1, "L", b_i)}, principal=[("c", "L", i)]
                )
                return edges
        fail("no disjunction matches an OrLeft step")

    if tag == "ImpliesRight":
        for i, f in enumerate(c.succ):
            if not isinstance(f, Implies):
                continue
            a_i = _first_index(ps[0].ant, f.left)
            b_i = _first_index(ps[0].succ, f.right)
            if a_i < 0 or b_i < 0:
                continue
            ant_ok = Counter(ps[0].ant) - Counter((f.left,)) == Counter(c.ant)
            succ_ok = Counter(ps[0].succ) - Counter((f.right,)) + Counter((f,)) == Counter(c.succ)
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [
                    ((0, "L", a_i), ("c", "R", i), "ancestry"),
                    ((0, "R", b_i), ("c", "R", i), "ancestry"),
                ]
                edges += _ancestry(
                    node, consumed={(0, "L", a_i), (0, "R", b_i)}, principal=[("c", "R", i)]
                )
                return edges
        fail("no implication matches an ImpliesRight step")

    if tag == "ImpliesLeft":
        for i, f in enumerate(c.ant):
            if not isinstance(f, Implies):
                continue
            a_i = _first_index(ps[0].succ, f.left)
            b_i = _first_index(ps[1].ant, f.right)
            if a_i < 0 or b_i < 0:
                continue
            ant_ok = (
                Counter(ps[0].ant) + Counter(ps[1].ant) - Counter((f.right,)) + Counter((f,))
                == Counter(c.ant)
            )
            succ_ok = Counter(ps[0].succ) - Counter((f.left,)) + Counter(ps[1].succ) == Counter(
                c.succ
            )
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [
                    ((0, "R", a_i), ("c", "L", i), "ancestry"),
                    ((1, "L", b_i), ("c", "L", i), "ancestry"),
                ]
                edges += _ancestry(
                    node, consumed={(0, "R", a_i), (1, "L", b_i)}, principal=[("c", "L", i)]
                )
                return edges
        fail("no implication matches an ImpliesLeft step")

    if tag == "NotLeft":
        for i, f in enumerate(c.ant):
            if not isinstance(f, Not):
                continue
            b_i = _first_index(ps[0].succ, f.body)
            if b_i < 0:
                continue
            ant_ok = Counter(ps[0].ant) + Counter((f,)) == Counter(c.ant)
            succ_ok = Counter(ps[0].succ) - Counter((f.body,)) == Counter(c.succ)
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [((0, "R", b_i), ("c", "L", i), "ancestry")]
                edges += _ancestry(node, consumed={(0, "R", b_i)}, principal=[("c", "L", i)])
                return edges
        fail("no negation matches a NotLeft step")

    if tag == "NotRight":
        for i, f in enumerate(c.succ):
            if not isinstance(f, Not):
                continue
            b_i = _first_index(ps[0].ant, f.body)
            if b_i < 0:
                continue
            ant_ok = Counter(ps[0].ant) - Counter((f.body,)) == Counter(c.ant)
            succ_ok = Counter(ps[0].succ) + Counter((f,)) == Counter(c.succ)
            if ant_ok and succ_ok:
                if not want_edges:
                    return None
                edges = [((0, "L", b_i), ("c", "R", i), "ancestry")]
                edges += _ancestry(node, consumed={(0, "L", b_i)}, principal=[("c", "R", i)])
                return edges
        fail("no negation matches a NotRight step")

    if tag in ("ForallLeft", "ExistsRight"):
        side = "L" if tag == "ForallLeft" else "R"
        cls = Forall if tag == "ForallLeft" else Exists
        cs, pside = (c.ant, ps[0].ant) if side == "L" else (c.succ, ps[0].succ)
        for i, f in enumerate(cs):
            if not isinstance(f, cls):
                continue
            inst = substitute(f.body, f.v, node.rule.term)
            j = _first_index(pside, inst)
            if j < 0:
                continue
            want = Counter(cs) - Counter((f,)) + Counter((inst,))
            other_ok = (
                Counter(c.succ) == Counter(ps[0].succ)
                if side == "L"
                else Counter(c.ant) == Counter(ps[0].ant)
            )
            if want == Counter(pside) and other_ok:
                if not want_edges:
                    return None
                edges = [((0, side, j), ("c", side, i), "ancestry")]
                edges += _ancestry(node, consumed={(0, side, j)}, principal=[("c", side, i)])
                return edges
        fail(f"no quantifier matches a {tag} step")

    if tag in ("ForallRight", "ExistsLeft"):
        side = "R" if tag == "ForallRight" else "L"
        cls = Forall if tag == "ForallRight" else Exists
        cs, pside = (c.succ, ps[0].succ) if side == "R" else (c.ant, ps[0].ant)
        eigen = node.rule.eigen
        for i, f in enumerate(cs):
            if not isinstance(f, cls):
                continue
            inst = substitute(f.body, f.v, var(eigen))
            j = _first_index(pside, inst)
            if j < 0:
                continue
            want = Counter(cs) - Counter((f,)) + Counter((inst,))
            other_ok = (
                Counter(c.ant) == Counter(ps[0].ant)
                if side == "R"
                else Counter(c.succ) == Counter(ps[0].succ)
            )
            if want == Counter(pside) and other_ok:
                for g in c.ant + c.succ:
                    if eigen in free_vars(g):
                        fail(f"eigenvariable {eigen} occurs free in the conclusion")
                if not want_edges:
                    return None
                edges = [((0, side, j), ("c", side, i), "ancestry")]
                edges += _ancestry(node, consumed={(0, side, j)}, principal=[("c", side, i)])
                return edges
        fail(f"no quantifier matches a {tag} step")

    fail(f"unhandled rule {tag}")


def _fail(node: Proof, msg: str):
    raise CheckError(f"{node.rule.tag} at {sequent_str(node.conclusion)}: {msg}")


def _ancestry(node: Proof, consumed: set, principal: list):
    """Greedy identity-based matching of context occurrences.

    Maps every non-consumed premise occurrence to the first available
    non-principal conclusion occurrence of the same formula.
    """
    c = node.conclusion
    free_concl = {"L": {}, "R": {}}
    principal_set = set(principal)
    for side, fs in (("L", c.ant), ("R", c.succ)):
        for i, f in enumerate(fs):
            if ("c", side, i) in principal_set:
                continue
            free_concl[side].setdefault(f, []).append(i)
    for sidefs in free_concl.values():
        for lst in sidefs.values():
            lst.reverse()  # pop from the front cheaply
    edges = []
    for k, q in enumerate(node.premises):
        for side, fs in (("L", q.conclusion.ant), ("R", q.conclusion.succ)):
            for i, f in enumerate(fs):
                if (k, side, i) in consumed:
                    continue
                lst = free_concl[side].get(f)
                if not lst:
                    _fail(node, f"unmatched context occurrence {formula_str(f)}")
                j = lst.pop()
                edges.append(((k, side, i), ("c", side, j), "ancestry"))
    return edges


def _analyze_theory_axiom(node: Proof, theory, want_edges: bool):
    c = node.conclusion
    fail = lambda msg: _fail(node, msg)
    if not c.succ:
        fail("theory axiom concludes a formula on the right")
    if theory is not None:
        name = node.rule.axiom
        if name not in theory.axioms:
            fail(f"unknown axiom {name!r}")
        subst = node.rule.subst_dict()
        schema = theory.axioms[name]
        if set(subst) != set(schema.vars):
            fail(f"instantiation must cover exactly {schema.vars}")
        phis, psi = theory.instantiate(name, subst)
        theory.validate_instantiation(name, subst)
        if not node.premises:
            if Counter(c.ant) != Counter(phis) or Counter(c.succ) != Counter((psi,)):
                fail("leaf does not match the instantiated schema")
            if not want_edges:
                return None
            j = 0  # single succedent
            return [(("c", "L", i), ("c", "R", j), "axiom-link") for i in range(len(c.ant))]
        if len(node.premises) != len(phis):
            fail(f"applied form needs {len(phis)} premises")
        consumed = set()
        ant_expect = Counter()
        succ_expect = Counter((psi,))
        special = []
        for k, q in enumerate(node.premises):
            i = _first_index(q.conclusion.succ, phis[k])
            if i < 0:
                fail(f"premise {k} must prove {formula_str(phis[k])} on the right")
            consumed.add((k, "R", i))
            special.append((k, "R", i))
            ant_expect += Counter(q.conclusion.ant)
            succ_expect += Counter(q.conclusion.succ) - Counter((phis[k],))
        if ant_expect != Counter(c.ant) or succ_expect != Counter(c.succ):
            fail("applied form context mismatch")
        psi_at = _first_index(c.succ, psi)
        if not want_edges:
            return None
        edges = [(sp, ("c", "R", psi_at), "axiom-link") for sp in special]
        edges += _ancestry(node, consumed=consumed, principal=[("c", "R", psi_at)])
        return edges
    # no theory: structural fallback used by flow building
    psi_at = len(c.succ) - 1
    if not node.premises:
        if not want_edges:
            return None
        return [(("c", "L", i), ("c", "R", psi_at), "axiom-link") for i in range(len(c.ant))]
    leftover = Counter()
    for q in node.premises:
        leftover += Counter(q.conclusion.succ)
    leftover -= Counter(c.succ) - Counter((c.succ[psi_at],))
    consumed = set()
    special = []
    for k, q in enumerate(node.premises):
        pick = -1
        for i, f in enumerate(q.conclusion.succ):
            if leftover.get(f, 0) > 0:
                pick = i
                leftover[f] -= 1
                break
        if pick < 0:
            fail("cannot infer the consumed succedents without a theory")
        consumed.add((k, "R", pick))
        special.append((k, "R", pick))
    if not want_edges:
        return None
    edges = [(sp, ("c", "R", psi_at), "axiom-link") for sp in special]
    edges += _ancestry(node, consumed=consumed, principal=[("c", "R", psi_at)])
    return edges


# ---------------------------------------------------------------------------
# Checking and size accounting


@dataclass(frozen=True)
class SizeStats:
    lines: int
    cut_count: int
    contraction_count: int
    max_formula_dag_nodes: int
    expanded_symbol_size: object  # exact int, or float log2 once oversized

    def summary(self) -> str:
        ess = self.expanded_symbol_size
        ess_txt = f"~2^{ess:.1f}" if isinstance(ess, float) else str(ess)
        return (
            f"lines={self.lines} cuts={self.cut_count} "
            f"contractions={self.contraction_count} "
            f"max_formula_dag={self.max_formula_dag_nodes} "
            f"expanded_symbols={ess_txt}"
        )


def _iter_unique_nodes(p: Proof):
    """Distinct Proof objects, premises before conclusions."""
    seen = set()
    stack = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for q in node.premises:
            if id(q) not in seen:
                stack.append((q, False))


# formulas are interned, so their size figures are cached per process
_fdag_cache: dict = {}
_fexp_cache: dict = {}
_fexp_memo: dict = {}


def size(p: Proof) -> SizeStats:
    """Size report; shared subtrees count once per occurrence (tree view)."""
    lines: dict = {}
    cuts: dict = {}
    contractions: dict = {}
    expanded: dict = {}
    max_dag = 0
    for node in _iter_unique_nodes(p):
        l = 1
        cc = 1 if node.rule.tag == "Cut" else 0
        ct = 1 if node.rule.tag in ("ContractLeft", "ContractRight") else 0
        ex = 0
        for q in node.premises:
            l += lines[id(q)]
            cc += cuts[id(q)]
            ct += contractions[id(q)]
            ex = semantics._sz_add(ex, expanded[id(q)])
        for f in node.conclusion.ant + node.conclusion.succ:
            if f not in _fdag_cache:
                _fdag_cache[f] = dag_size(f)
                _fexp_cache[f] = semantics.expanded_size(f, _fexp_memo)
            if _fdag_cache[f] > max_dag:
                max_dag = _fdag_cache[f]
            ex = semantics._sz_add(ex, _fexp_cache[f])
        lines[id(node)] = l
        cuts[id(node)] = cc
        contractions[id(node)] = ct
        expanded[id(node)] = ex
    return SizeStats(
        lines=lines[id(p)],
        cut_count=cuts[id(p)],
        contraction_count=contractions[id(p)],
        max_formula_dag_nodes=max_dag,
        expanded_symbol_size=expanded[id(p)],
    )


def _wellformed(f, sig: Signature, memo: set):
    if id(f) in memo:
        return
    memo.add(id(f))
    if isinstance(f, Atom):
        if f.pred not in sig.predicates or sig.predicates[f.pred] != len(f.args):
            raise CheckError(f"predicate {f.pred!r} does not fit signature {sig.name}")
    if isinstance(f, Term):
        if isinstance(f, Var):
            return
        if hasattr(f, "args"):
            sym = f.sym
            if sym not in sig.functions or sig.functions[sym] != len(f.args):
                raise CheckError(f"function {sym!r} does not fit signature {sig.name}")
        else:
            if f.sym not in sig.constants:
                raise CheckError(f"constant {f.sym!r} not in signature {sig.name}")
    for ch in _children(f):
        _wellformed(ch, sig, memo)


def check(p: Proof, theory) -> SizeStats:
    """Validate every inference in p against the theory; return sizes."""
    wf_memo: set = set()
    for node in _iter_unique_nodes(p):
        for f in node.conclusion.ant + node.conclusion.succ:
            _wellformed(f, theory.signature, wf_memo)
        if node.rule.term is not None:
            _wellformed(node.rule.term, theory.signature, wf_memo)
        if node.rule.subst is not None:
            for _, t in node.rule.subst:
                _wellformed(t, theory.signature, wf_memo)
        analyze(node, theory)
    return size(p)


# ---------------------------------------------------------------------------
# Serialization: deterministic JSON with a fixed field order
#   {"rule": ..., "instantiation": {...}?, "conclusion": "...", "premises": [...]}


def _rule_inst_json(rule: Rule) -> Optional[str]:
    if rule.tag == "TheoryAxiom":
        pairs = ",".join(
            f"{json.dumps(v)}:{json.dumps(term_str(t))}" for v, t in rule.subst
        )
        return f'{{"axiom":{json.dumps(rule.axiom)},"subst":{{{pairs}}}}}'
    if rule.term is not None:
        return f'{{"term":{json.dumps(term_str(rule.term))}}}'
    if rule.eigen is not None:
        return f'{{"eigen":{json.dumps(rule.eigen)}}}'
    return None


def serialize_proof(p: Proof) -> str:
    out = []
    stack = [("node", p)]
    while stack:
        op, x = stack.pop()
        if op == "txt":
            out.append(x)
            continue
        inst = _rule_inst_json(x.rule)
        head = f'{{"rule":{json.dumps(x.rule.tag)},'
        if inst is not None:
            head += f'"instantiation":{inst},'
        head += f'"conclusion":{json.dumps(sequent_str(x.conclusion))},"premises":['
        out.append(head)
        tail = [("txt", "]}")]
        parts = []
        for i, q in enumerate(x.premises):
            if i:
                parts.append(("txt", ","))
            parts.append(("node", q))
        stack.extend(reversed(parts + tail))
    return "".join(out)


def proof_to_file(p: Proof, path: str):
    with open(path, "w") as fh:
        fh.write(serialize_proof(p))
        fh.write("\n")


def parse_proof(text: str, sig: Signature) -> Proof:
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100_000))
    try:
        data = json.loads(text)
    finally:
        sys.setrecursionlimit(old)
    return _proof_from_data(data, sig)


def proof_from_file(path: str, sig: Signature) -> Proof:
    with open(path) as fh:
        return parse_proof(fh.read(), sig)


def _proof_from_data(data, sig: Signature) -> Proof:
    if not isinstance(data, dict):
        raise KernelError("proof file must contain a JSON object")
    done: dict = {}
    stack = [(data, False)]
    while stack:
        d, expanded = stack.pop()
        if not expanded:
            stack.append((d, True))
            prems = d.get("premises", [])
            if not isinstance(prems, list):
                raise KernelError("premises must form a list")
            for q in reversed(prems):
                stack.append((q, False))
            continue
        if id(d) in done:
            continue
        extra = set(d) - {"rule", "instantiation", "conclusion", "premises"}
        if extra:
            raise KernelError(f"unknown proof fields {sorted(extra)}")
        tag = d.get("rule")
        if tag not in RULE_TAGS:
            raise KernelError(f"unknown rule tag {tag!r}")
        inst = d.get("instantiation")
        axiom = subst = term = eigen = None
        if tag == "TheoryAxiom":
            if not isinstance(inst, dict) or set(inst) != {"axiom", "subst"}:
                raise KernelError("TheoryAxiom needs {'axiom', 'subst'}")
            axiom = inst["axiom"]
            subst = tuple(
                sorted((v, parse_term(s, sig)) for v, s in inst["subst"].items())
            )
        elif tag in _TERM_RULES:
            if not isinstance(inst, dict) or set(inst) != {"term"}:
                raise KernelError(f"{tag} needs a witness term")
            term = parse_term(inst["term"], sig)
        elif tag in _EIGEN_RULES:
            if not isinstance(inst, dict) or set(inst) != {"eigen"}:
                raise KernelError(f"{tag} needs an eigenvariable")
            eigen = inst["eigen"]
        elif inst is not None:
            raise KernelError(f"{tag} carries no instantiation")
        concl = parse_sequent(d.get("conclusion", ""), sig)
        rule = Rule(tag, axiom=axiom, subst=subst, term=term, eigen=eigen)
        prem_proofs = tuple(done[id(q)] for q in d.get("premises", []))
        done[id(d)] = Proof(concl, rule, prem_proofs)
    return done[id(data)]


# ---------------------------------------------------------------------------
# Proof-level substitution (used by cut elimination at quantifier steps)


def substitute_proof(p: Proof, mapping: dict) -> Proof:
    """Apply a variable -> term substitution throughout a proof.

    Eigenvariables act as binders for their subtree: mapped names stop at
    the binding node, and eigenvariables clashing with incoming terms are
    renamed on the way.
    """
    mapping = {k: v for k, v in mapping.items()}
    if not mapping:
        return p
    memo: dict = {}

    def walk(node: Proof) -> Proof:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        rule = node.rule
        prems = node.premises
        if rule.eigen is not None:
            e = rule.eigen
            sub = {k: v for k, v in mapping.items() if k != e}
            if any(e in free_vars(v) for v in sub.values()):
                avoid = set(sub)
                for v in sub.values():
                    avoid |= free_vars(v)
                for q in prems:
                    for f in q.conclusion.ant + q.conclusion.succ:
                        avoid |= free_vars(f)
                e2 = fresh_name(e, avoid)
                prems = tuple(substitute_proof(q, {e: var(e2)}) for q in prems)
                rule = Rule(rule.tag, eigen=e2)
            if sub != mapping or rule is not node.rule:
                prems = tuple(substitute_proof(q, sub) for q in prems)
            else:
                prems = tuple(walk(q) for q in prems)
        else:
            prems = tuple(walk(q) for q in prems)
            if rule.term is not None:
                rule = Rule(rule.tag, term=subst_term(rule.term, mapping))
            elif rule.subst is not None:
                rule = Rule(
                    rule.tag,
                    axiom=rule.axiom,
                    subst=tuple((v, subst_term(t, mapping)) for v, t in rule.subst),
                )
        concl = Sequent(
            tuple(subst_formula(f, mapping) for f in node.conclusion.ant),
            tuple(subst_formula(f, mapping) for f in node.conclusion.succ),
        )
        out = Proof(concl, rule, prems)
        memo[id(node)] = out
        return out

    return walk(p)
