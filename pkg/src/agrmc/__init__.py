"""Model checker for strategic abilities of asynchronous multi-agent systems.

Modules communicate through shared variables: each variable is written by
exactly one module and may be read (as an input) by others.  Verification
asks whether a coalition of modules has a uniform strategy enforcing a
temporal goal, either on the full composition or compositionally against
auto-generated assumptions about the rest of the system.
"""

from .lang import (
    SpecError,
    ParseError,
    DuplicateName,
    DuplicateModule,
    DomainMismatch,
    GroupsNotPartition,
    InvalidParameter,
    UnknownVariable,
    UnknownState,
    UnknownModule,
    UnknownAgent,
    NestedCoalition,
    UnsupportedTemporal,
    parse_spec,
    parse_module,
    parse_formula,
    pretty_formula,
    pretty_print,
    validate_spec,
)
from .composer import compose, Caps, ResourceLimit
from .logic import Strategy, Counterexample, PartialStrategy, check_strategy, win_set
from .engines import VerifyResult, dfs_synthesize, fixpoint_approx
from .agr import (
    MissingGoal,
    MixedTemporalOperators,
    global_formula,
    verify_agr,
    verify_monolithic,
)
from .assumptions import (
    CoverageReport,
    generate_assumption,
    close_modules,
    communication_distance,
    quotient_reduce,
    abstract_then_quotient,
    check_path_coverage,
)
from .export import (
    as_document,
    export_json,
    export_dot,
    load_model,
    is_isomorphic,
    strategy_records,
    counterexample_records,
)
from .runner import run_verification
from .randspec import random_spec
from .voting import generate_simple_voting

__all__ = [
    "SpecError",
    "ParseError",
    "DuplicateName",
    "DuplicateModule",
    "DomainMismatch",
    "GroupsNotPartition",
    "InvalidParameter",
    "UnknownVariable",
    "UnknownState",
    "UnknownModule",
    "UnknownAgent",
    "NestedCoalition",
    "UnsupportedTemporal",
    "MissingGoal",
    "MixedTemporalOperators",
    "PartialStrategy",
    "parse_spec",
    "parse_module",
    "parse_formula",
    "pretty_formula",
    "pretty_print",
    "validate_spec",
    "compose",
    "Caps",
    "ResourceLimit",
    "Strategy",
    "Counterexample",
    "check_strategy",
    "win_set",
    "VerifyResult",
    "dfs_synthesize",
    "fixpoint_approx",
    "global_formula",
    "verify_agr",
    "verify_monolithic",
    "CoverageReport",
    "generate_assumption",
    "close_modules",
    "communication_distance",
    "quotient_reduce",
    "abstract_then_quotient",
    "check_path_coverage",
    "as_document",
    "export_json",
    "export_dot",
    "load_model",
    "is_isomorphic",
    "strategy_records",
    "counterexample_records",
    "run_verification",
    "random_spec",
    "generate_simple_voting",
]

__version__ = "0.1.0"
