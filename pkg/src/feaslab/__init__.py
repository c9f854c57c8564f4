"""feaslab: feasibility predicates, short proofs, and their geometry.

A small sequent-calculus kernel with theory axioms for arithmetic, group,
and rational feasibility; generators for families of short proofs of
F(enormous value); cut elimination that measures the compression cuts buy;
logical flow graphs; and independent oracles for minimal derivation sizes
and word metrics.
"""

from .lang import (
    App,
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    Implies,
    LangError,
    Not,
    ParseError,
    Sequent,
    Signature,
    Term,
    Var,
    app,
    arith_signature,
    atom,
    conj,
    const,
    dag_size,
    disj,
    exists,
    forall,
    formula_str,
    free_vars,
    group_signature,
    imp,
    int_term,
    mul,
    neg,
    parse_formula,
    parse_sequent,
    parse_term,
    plus,
    rational_signature,
    sequent_str,
    subst_formula,
    subst_term,
    substitute,
    term_str,
    tree_size,
    var,
)
from .semantics import (
    DIGIT_BUDGET,
    INF,
    BSElement,
    EvalBudgetError,
    ExtRational,
    Mat2,
    OpenTermError,
    PowerTower,
    SemanticsError,
    UndefinedOperation,
    bs_element,
    bs_eq,
    bs_inv,
    bs_mul,
    eigenvalues_sym2,
    eval_group_bs,
    eval_group_free,
    eval_nat,
    eval_rat,
    expanded_size,
    make_tower,
    mat2,
    mobius_apply,
    nat_str,
    parse_ext_rational,
    parse_mat2,
    winding_growth,
)
from .kernel import (
    CheckError,
    KernelError,
    Proof,
    Rule,
    SizeStats,
    analyze,
    and_left,
    and_right,
    check,
    contract_left,
    contract_right,
    cut,
    end_sequent,
    eq_leaf,
    exists_left,
    exists_right,
    forall_left,
    forall_right,
    implies_left,
    implies_right,
    logical_axiom,
    not_left,
    not_right,
    or_left,
    or_right,
    parse_proof,
    proof_from_file,
    proof_to_file,
    serialize_proof,
    size,
    substitute_proof,
    theory_apply,
    theory_leaf,
    weaken_left,
    weaken_right,
)
from .theories import (
    AxiomSchema,
    Theory,
    TheoryError,
    UnsupportedPresentation,
    arith_feasibility,
    feasibility_formula,
    group_feasibility,
    matrix_entry_terms,
    matrix_phi,
    rational_feasibility,
    rational_term,
    theory_from_selector,
    triviality_theory,
    word_term,
)
from .generators import (
    GENERATORS,
    GenReport,
    GeneratorError,
    gen_distorted,
    gen_geometric,
    gen_group_power,
    gen_matrix_power,
    gen_quantifier,
    gen_rational_orbit,
    gen_square_cut,
    gen_unary,
    numeral,
)
from .cutelim import (
    BlowupRow,
    DEFAULT_NODE_BUDGET,
    FragmentError,
    NodeBudgetError,
    blowup_report,
    eliminate_cuts,
    node_budget,
)
from .flowgraph import FlowGraph, build_flow_graph, emit_dot
from .oracle import (
    DistortionRow,
    OracleError,
    RadiusExhausted,
    distortion_table,
    enumerate_min_proof,
    min_proof_lines,
    min_tree_derivation,
    min_tree_table,
    word_metric_distance,
)

__version__ = "0.1.0"
