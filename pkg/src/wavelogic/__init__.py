"""Phase-encoded wave logic circuits.

A circuit IR of phase shifts, copies and three-way merges; wave-phasor and
truth-table semantics; a certified library of diagram rewrite rules; and a
rewrite engine for designing, analysing and optimising majority-based logic.
"""

from .boolexpr import (
    And,
    BoolExpr,
    Const,
    Maj,
    Not,
    Or,
    Var,
    Xor,
    eval_bool,
    expr_vars,
    from_boolean,
    from_truth_table,
    full_adder,
    half_adder,
    to_boolean,
)
from .circuit import (
    Circuit,
    CircuitBundle,
    Cost,
    Edge,
    Node,
    NodeKind,
    Phase,
    PhaseParam,
    canonical_form,
    compose_parallel,
    compose_series,
    cost,
    fingerprint,
    is_isomorphic,
    is_valid,
    mk_and,
    mk_const,
    mk_maj,
    mk_nand,
    mk_not,
    mk_or,
    mk_var,
    mk_xnor,
    mk_xor,
    substitute,
    topo_order,
    validate,
    variables,
    wire,
)
from .engine import (
    DerivationTrace,
    ReplayResult,
    Step,
    analyze,
    apply,
    find_matches,
    prove_equal,
    replay,
    simplify,
)
from .errors import (
    BudgetError,
    CircuitError,
    EvaluationError,
    ExprParseError,
    FileFormatError,
    InterferenceError,
    RewriteError,
    SoundnessError,
    StaleSiteError,
    TableTooLargeError,
    ValidationError,
    WaveLogicError,
)
from .parser import format_expr, parse_expr
from .patterns import Direction, MatchSite
from .rules import (
    Certification,
    MetaVar,
    RewriteRule,
    all_rules,
    base_rules,
    boolean_reading,
    check_soundness,
    rule_by_name,
    rule_definitions,
)
from .semantics import (
    DEFAULT_VAR_CAP,
    TruthTable,
    equivalent,
    eval_bit,
    eval_wave,
    merge_interference,
    truth_table,
)
from .serialize import (
    circuit_from_dict,
    circuit_to_dict,
    export_dot,
    load_circuit,
    save_circuit,
)

__version__ = "0.1.0"
