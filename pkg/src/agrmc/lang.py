"""Specification language: AST, parser, pretty-printer, static validation.

A system is a set of modules.  Each module owns a disjoint set of state
variables; every local state carries a total valuation of the owned
variables.  Transitions are guarded by constraints on *input* variables,
i.e. variables owned by other modules.  Goals are single-coalition
formulas of the shape <<A,B>> G pred or <<A,B>> F pred.

The surface syntax (.stv files) is line oriented; '#' starts a comment.

    MODULE Train
    VAR pos : { out, tunnel }
    INPUT signal
    STATE wait [ pos=out ]
    STATE in   [ pos=tunnel ]
    INIT wait
    TRANS wait -> in   [ signal=green ]
    TRANS wait -> wait [ signal!=green ]
    TRANS in -> wait [ ]
    GROUP Trains { Train } GOAL "<<Train>> F (pos=tunnel)"

Guard constraints are a comma list of var=value, var!=value or var=*
(explicit "any value"); an empty guard list constrains nothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Union


class SpecError(Exception):
    """Base class for all specification-level errors."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None and col is not None:
            message = f"line {line}, col {col}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(SpecError):
    pass


class DuplicateName(SpecError):
    pass


class DuplicateModule(DuplicateName):
    pass


class UnknownVariable(SpecError):
    pass


class UnknownState(SpecError):
    pass


class UnknownModule(SpecError):
    pass


class UnknownAgent(UnknownModule):
    pass


class DomainMismatch(SpecError):
    """A value used where the variable's domain does not contain it."""


class GroupsNotPartition(SpecError):
    """GROUP declarations must partition the set of modules."""


class InvalidParameter(SpecError):
    """A generator parameter outside its legal range."""


class NestedCoalition(SpecError):
    """A second <<...>> inside the body of a formula."""


class UnsupportedTemporal(SpecError):
    """Temporal structure outside the supported <<A>> G/F pred fragment."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class VarDecl:
    name: str
    domain: tuple[str, ...]  # declaration order is load bearing


@dataclass(frozen=True)
class GuardConstraint:
    var: str
    op: str  # "eq" | "neq" | "any"
    value: str | None = None  # None iff op == "any"


@dataclass(frozen=True)
class Guard:
    constraints: tuple[GuardConstraint, ...] = ()

    def constraint_on(self, var: str) -> GuardConstraint | None:
        for c in self.constraints:
            if c.var == var:
                return c
        return None


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    guard: Guard
    action: str


@dataclass(frozen=True)
class State:
    id: str
    valuation: tuple[tuple[str, str], ...]  # (var, value) in declared var order

    def value(self, var: str) -> str:
        for v, x in self.valuation:
            if v == var:
                return x
        raise KeyError(var)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    state_vars: tuple[VarDecl, ...]
    input_vars: tuple[str, ...]
    states: tuple[State, ...]
    init: str
    transitions: tuple[Transition, ...]
    synthetic: bool = False
    provenance: str = ""

    @cached_property
    def states_by_id(self) -> dict[str, State]:
        return {s.id: s for s in self.states}

    @cached_property
    def transitions_by_src(self) -> dict[str, tuple[Transition, ...]]:
        out: dict[str, list[Transition]] = {s.id: [] for s in self.states}
        for t in self.transitions:
            out[t.src].append(t)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.state_vars)


@dataclass(frozen=True)
class Atom:
    var: str
    value: str


@dataclass(frozen=True)
class Not:
    sub: "Pred"


@dataclass(frozen=True)
class And:
    left: "Pred"
    right: "Pred"


@dataclass(frozen=True)
class Or:
    left: "Pred"
    right: "Pred"


Pred = Union[Atom, Not, And, Or]


@dataclass(frozen=True)
class Formula:
    coalition: tuple[str, ...]
    operator: str  # "G" | "F"
    pred: Pred


@dataclass(frozen=True)
class GroupDecl:
    name: str
    members: tuple[str, ...]
    goal: Formula | None = None


@dataclass(frozen=True)
class SpecDocument:
    modules: tuple[ModuleDecl, ...]
    groups: tuple[GroupDecl, ...] = ()

    @cached_property
    def modules_by_name(self) -> dict[str, ModuleDecl]:
        return {m.name: m for m in self.modules}

    @cached_property
    def owner_of(self) -> dict[str, str]:
        """Variable name -> owning module name."""
        out = {}
        for m in self.modules:
            for v in m.state_vars:
                out[v.name] = m.name
        return out


# ---------------------------------------------------------------------------
# Formula parsing

_FORMULA_TOKEN = re.compile(
    r"\s*(<<|>>|\(|\)|&|\||!|=|,|\?|[A-Za-z0-9_]+)"
)

_TEMPORAL_TOKENS = {"G", "F", "X", "U", "R", "W"}


def _tokenize_formula(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _FORMULA_TOKEN.match(text, pos)
        if not m:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r} in formula")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _FormulaParser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of formula")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        self.take("<<")
        coalition = [self._ident()]
        while self.peek() == ",":
            self.take(",")
            coalition.append(self._ident())
        self.take(">>")
        op = self.take()
        if op in ("X", "U", "R", "W"):
            raise UnsupportedTemporal(
                f"operator {op} is not supported; only G and F are"
            )
        if op not in ("G", "F"):
            raise ParseError(f"expected temporal operator G or F, found {op!r}")
        pred = self._pred()
        if self.peek() is not None:
            tok = self.peek()
            if tok == "<<":
                raise NestedCoalition("coalition operators cannot be nested")
            raise ParseError(f"trailing token {tok!r} after formula")
        return Formula(tuple(coalition), op, pred)

    def _ident(self) -> str:
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise ParseError(f"expected a name, found {tok!r}")
        return tok

    # precedence: | lowest, & next, ! highest
    def _pred(self) -> Pred:
        left = self._and()
        while self.peek() == "|":
            self.take("|")
            left = Or(left, self._and())
        return left

    def _and(self) -> Pred:
        left = self._unary()
        while self.peek() == "&":
            self.take("&")
            left = And(left, self._unary())
        return left

    def _unary(self) -> Pred:
        tok = self.peek()
        if tok == "!":
            self.take("!")
            return Not(self._unary())
        if tok == "(":
            self.take("(")
            inner = self._pred()
            self.take(")")
            return inner
        if tok == "<<":
            raise NestedCoalition("coalition operators cannot be nested")
        if tok is None:
            raise ParseError("unexpected end of formula")
        # must be an atom: var = value
        var = self.take()
        if var in _TEMPORAL_TOKENS and self.peek() != "=":
            raise UnsupportedTemporal(
                f"temporal operator {var} inside the body; "
                "only one outermost G or F is supported"
            )
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", var):
            raise ParseError(f"expected an atom, found {var!r}")
        self.take("=")
        value = self.take()
        if value in ("(", ")", "&", "|", "=", ",", "<<", ">>"):
            raise ParseError(f"expected a value, found {value!r}")
        return Atom(var, value)


def parse_formula(text: str) -> Formula:
    """Parse a goal formula of the shape <<A,B>> G pred / <<A,B>> F pred."""
    tokens = _tokenize_formula(text)
    if not tokens:
        raise ParseError("empty formula")
    if tokens[0] != "<<":
        raise ParseError("formula must start with a coalition <<...>>")
    return _FormulaParser(tokens).parse()


def pretty_formula(f: Formula) -> str:
    return f"<<{','.join(f.coalition)}>> {f.operator} {_pp_pred(f.pred)}"


def _pp_pred(p: Pred) -> str:
    if isinstance(p, Atom):
        return f"{p.var}={p.value}"
    if isinstance(p, Not):
        return f"!({_pp_pred(p.sub)})"
    if isinstance(p, And):
        return f"({_pp_pred(p.left)} & {_pp_pred(p.right)})"
    if isinstance(p, Or):
        return f"({_pp_pred(p.left)} | {_pp_pred(p.right)})"
    raise TypeError(f"not a predicate: {p!r}")


# ---------------------------------------------------------------------------
# Spec parsing

_VALUE_RE = re.compile(r"[A-Za-z0-9_]+|\?|!")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_LINE_TOKEN = re.compile(
    r"\s*(->|!=|\{|\}|\[|\]|\(|\)|,|:|;|=|\*|\?|!|\"[^\"]*\"|[A-Za-z0-9_]+)"
)


def _tokenize_line(text: str, line_no: int) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _LINE_TOKEN.match(text, pos)
        if not m:
            bad = text[pos:].strip()[0]
            raise ParseError(
                f"unexpected character {bad!r}", line_no, text.index(bad, pos) + 1
            )
        tokens.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return tokens


class _Lines:
    """Token stream over one physical line."""

    def __init__(self, tokens: list[tuple[str, int]], line_no: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    @property
    def col(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.tokens[-1][1] + len(self.tokens[-1][0]) if self.tokens else 1

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line_no, self.col)
        if expected is not None and tok != expected:
            raise ParseError(
                f"expected {expected!r}, found {tok!r}", self.line_no, self.col
            )
        self.pos += 1
        return tok

    def ident(self, what: str = "name") -> str:
        col = self.col
        tok = self.take()
        if not _IDENT_RE.fullmatch(tok):
            raise ParseError(f"expected a {what}, found {tok!r}", self.line_no, col)
        return tok

    def value(self) -> str:
        col = self.col
        tok = self.take()
        if not _VALUE_RE.fullmatch(tok):
            raise ParseError(f"expected a value, found {tok!r}", self.line_no, col)
        return tok

    def done(self):
        if self.peek() is not None:
            raise ParseError(
                f"trailing token {self.peek()!r}", self.line_no, self.col
            )


class _ModuleBuilder:
    def __init__(self, name: str, line_no: int):
        self.name = name
        self.line_no = line_no
        self.state_vars: list[VarDecl] = []
        self.input_vars: list[str] = []
        self.states: list[State] = []
        self.init: str | None = None
        self.transitions: list[Transition] = []
        self._var_names: set[str] = set()
        self._state_ids: set[str] = set()

    def add_var(self, decl: VarDecl, line_no: int):
        if decl.name in self._var_names or decl.name in self.input_vars:
            raise DuplicateName(
                f"variable {decl.name!r} already declared in module {self.name}",
                line_no,
            )
        self._var_names.add(decl.name)
        self.state_vars.append(decl)

    def add_input(self, name: str, line_no: int):
        if name in self._var_names or name in self.input_vars:
            raise DuplicateName(
                f"variable {name!r} already declared in module {self.name}",
                line_no,
            )
        self.input_vars.append(name)

    def add_state(self, state: State, line_no: int):
        if state.id in self._state_ids:
            raise DuplicateName(
                f"state {state.id!r} already declared in module {self.name}",
                line_no,
            )
        declared = {v.name for v in self.state_vars}
        given = [v for v, _ in state.valuation]
        if set(given) != declared or len(given) != len(declared):
            missing = declared - set(given)
            extra = set(given) - declared
            parts = []
            if missing:
                parts.append(f"missing {sorted(missing)}")
            if extra:
                parts.append(f"unknown {sorted(extra)}")
            raise ParseError(
                f"state {state.id!r} valuation must assign each declared "
                f"variable exactly once ({'; '.join(parts) or 'duplicates'})",
                line_no,
            )
        domains = {v.name: v.domain for v in self.state_vars}
        for var, val in state.valuation:
            if val not in domains[var]:
                raise DomainMismatch(
                    f"value {val!r} not in domain of {var!r}", line_no
                )
        # normalize valuation to declared variable order
        order = {v.name: i for i, v in enumerate(self.state_vars)}
        val = tuple(sorted(state.valuation, key=lambda p: order[p[0]]))
        self._state_ids.add(state.id)
        self.states.append(State(state.id, val))

    def add_init(self, state_id: str, line_no: int):
        if self.init is not None:
            raise ParseError(
                f"module {self.name} already has an INIT state", line_no
            )
        if state_id not in self._state_ids:
            raise UnknownState(
                f"INIT state {state_id!r} not declared in module {self.name}",
                line_no,
            )
        self.init = state_id

    def add_transition(self, src: str, dst: str, guard: Guard, line_no: int):
        for endpoint in (src, dst):
            if endpoint not in self._state_ids:
                raise UnknownState(
                    f"state {endpoint!r} not declared in module {self.name}",
                    line_no,
                )
        for c in guard.constraints:
            if c.var not in self.input_vars:
                raise UnknownVariable(
                    f"guard variable {c.var!r} is not an input of module "
                    f"{self.name}",
                    line_no,
                )
        action = f"t{len(self.transitions)}"
        self.transitions.append(Transition(src, dst, guard, action))

    def build(self) -> ModuleDecl:
        if not self.states:
            raise ParseError(
                f"module {self.name} declares no states", self.line_no
            )
        if self.init is None:
            raise ParseError(
                f"module {self.name} has no INIT state", self.line_no
            )
        return ModuleDecl(
            name=self.name,
            state_vars=tuple(self.state_vars),
            input_vars=tuple(self.input_vars),
            states=tuple(self.states),
            init=self.init,
            transitions=tuple(self.transitions),
        )


def _parse_guard(ln: _Lines) -> Guard:
    ln.take("[")
    constraints = []
    if ln.peek() != "]":
        while True:
            var = ln.ident("variable")
            op = ln.take()
            if op == "=":
                if ln.peek() == "*":
                    ln.take("*")
                    constraints.append(GuardConstraint(var, "any", None))
                else:
                    constraints.append(GuardConstraint(var, "eq", ln.value()))
            elif op == "!=":
                constraints.append(GuardConstraint(var, "neq", ln.value()))
            else:
                raise ParseError(
                    f"expected '=' or '!=' in guard, found {op!r}", ln.line_no
                )
            if ln.peek() == ",":
                ln.take(",")
                continue
            break
    ln.take("]")
    seen = set()
    for c in constraints:
        if c.var in seen:
            raise ParseError(
                f"guard constrains {c.var!r} twice", ln.line_no
            )
        seen.add(c.var)
    return Guard(tuple(constraints))


def _parse_valuation(ln: _Lines) -> tuple[tuple[str, str], ...]:
    ln.take("[")
    pairs = []
    if ln.peek() != "]":
        while True:
            var = ln.ident("variable")
            ln.take("=")
            pairs.append((var, ln.value()))
            if ln.peek() == ",":
                ln.take(",")
                continue
            break
    ln.take("]")
    return tuple(pairs)


def _parse_name_list(ln: _Lines) -> tuple[str, ...]:
    ln.take("{")
    names = []
    if ln.peek() != "}":
        while True:
            names.append(ln.ident())
            if ln.peek() == ",":
                ln.take(",")
                continue
            break
    ln.take("}")
    return tuple(names)


def _parse_document(text: str) -> tuple[list[ModuleDecl], list[GroupDecl]]:
    modules: list[ModuleDecl] = []
    groups: list[GroupDecl] = []
    current: _ModuleBuilder | None = None
    module_names: set[str] = set()
    group_names: set[str] = set()

    def finish():
        nonlocal current
        if current is not None:
            modules.append(current.build())
            current = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = _tokenize_line(line, line_no)
        ln = _Lines(tokens, line_no)
        kw = ln.take()
        if kw == "MODULE":
            finish()
            name = ln.ident("module name")
            ln.done()
            if name in module_names:
                raise DuplicateModule(f"module {name!r} declared twice", line_no)
            module_names.add(name)
            current = _ModuleBuilder(name, line_no)
        elif kw in ("VAR", "INPUT", "STATE", "INIT", "TRANS"):
            if current is None:
                raise ParseError(f"{kw} outside of a MODULE", line_no)
            if kw == "VAR":
                name = ln.ident("variable name")
                ln.take(":")
                ln.take("{")
                domain = []
                while True:
                    domain.append(ln.value())
                    if ln.peek() == ",":
                        ln.take(",")
                        continue
                    break
                ln.take("}")
                ln.done()
                if len(set(domain)) != len(domain):
                    raise ParseError(
                        f"domain of {name!r} lists a value twice", line_no
                    )
                current.add_var(VarDecl(name, tuple(domain)), line_no)
            elif kw == "INPUT":
                name = ln.ident("variable name")
                ln.done()
                current.add_input(name, line_no)
            elif kw == "STATE":
                sid = ln.ident("state id")
                valuation = _parse_valuation(ln)
                ln.done()
                current.add_state(State(sid, valuation), line_no)
            elif kw == "INIT":
                sid = ln.ident("state id")
                ln.done()
                current.add_init(sid, line_no)
            else:  # TRANS
                src = ln.ident("state id")
                ln.take("->")
                dst = ln.ident("state id")
                guard = _parse_guard(ln) if ln.peek() == "[" else Guard()
                if ln.peek() == ";":  # terminator is optional
                    ln.take(";")
                ln.done()
                current.add_transition(src, dst, guard, line_no)
        elif kw == "GROUP":
            finish()
            name = ln.ident("group name")
            if name in group_names:
                raise DuplicateName(f"group {name!r} declared twice", line_no)
            group_names.add(name)
            members = _parse_name_list(ln)
            goal = None
            if ln.peek() == "GOAL":
                ln.take("GOAL")
                quoted = ln.take()
                if not (quoted.startswith('"') and quoted.endswith('"')):
                    raise ParseError("GOAL formula must be quoted", line_no)
                try:
                    goal = parse_formula(quoted[1:-1])
                except SpecError as e:
                    if e.line is None:
                        e.line = line_no
                    raise type(e)(str(e), line_no) from None
            ln.done()
            groups.append(GroupDecl(name, members, goal))
        else:
            raise ParseError(f"unknown keyword {kw!r}", line_no)
    finish()
    return modules, groups


def parse_spec(text: str) -> SpecDocument:
    """Parse a full system document and run cross-module checks."""
    modules, groups = _parse_document(text)
    if not modules:
        raise ParseError("document declares no modules")
    doc = SpecDocument(tuple(modules), tuple(groups))

    owners: dict[str, str] = {}
    for m in doc.modules:
        for v in m.state_vars:
            if v.name in owners:
                raise DuplicateName(
                    f"variable {v.name!r} owned by both {owners[v.name]} "
                    f"and {m.name}"
                )
            owners[v.name] = m.name
    for m in doc.modules:
        for iv in m.input_vars:
            if iv not in owners:
                raise UnknownVariable(
                    f"input {iv!r} of module {m.name} is not owned by any module"
                )
            if owners[iv] == m.name:
                raise UnknownVariable(
                    f"input {iv!r} of module {m.name} is owned by the module itself"
                )
    if doc.groups:
        # declared groups must partition the module set
        seen_members: dict[str, str] = {}
        for g in doc.groups:
            for member in g.members:
                if member not in doc.modules_by_name:
                    raise UnknownModule(
                        f"group {g.name} lists unknown module {member!r}"
                    )
                if member in seen_members:
                    raise GroupsNotPartition(
                        f"module {member!r} appears in groups "
                        f"{seen_members[member]} and {g.name}"
                    )
                seen_members[member] = g.name
        uncovered = [m.name for m in doc.modules if m.name not in seen_members]
        if uncovered:
            raise GroupsNotPartition(
                f"modules not covered by any group: {', '.join(uncovered)}"
            )
    for g in doc.groups:
        if g.goal is not None:
            for agent in g.goal.coalition:
                if agent not in doc.modules_by_name:
                    raise UnknownModule(
                        f"goal of group {g.name} names unknown module {agent!r}"
                    )
                if agent not in g.members:
                    raise UnknownModule(
                        f"goal coalition member {agent!r} is not in group {g.name}"
                    )
            _check_goal_vars(doc, g)
    return doc


def _check_goal_vars(doc: SpecDocument, g: GroupDecl):
    owners = doc.owner_of

    def walk(p: Pred):
        if isinstance(p, Atom):
            if p.var not in owners:
                raise UnknownVariable(
                    f"goal of group {g.name} references unknown variable "
                    f"{p.var!r}"
                )
            owner = doc.modules_by_name[owners[p.var]]
            domain = next(
                v.domain for v in owner.state_vars if v.name == p.var
            )
            if p.value not in domain:
                raise DomainMismatch(
                    f"goal of group {g.name}: value {p.value!r} not in "
                    f"domain of {p.var!r}"
                )
        elif isinstance(p, Not):
            walk(p.sub)
        else:
            walk(p.left)
            walk(p.right)

    walk(g.goal.pred)


def parse_module(text: str) -> ModuleDecl:
    """Parse a document containing exactly one module, without cross-module
    checks.  Used for externally supplied assumption files whose inputs
    resolve against a different document."""
    modules, groups = _parse_document(text)
    if groups:
        raise ParseError("a module file cannot declare groups")
    if len(modules) != 1:
        raise ParseError(
            f"expected exactly one module, found {len(modules)}"
        )
    return modules[0]


# ---------------------------------------------------------------------------
# Pretty printing


def _pp_guard(g: Guard) -> str:
    parts = []
    for c in g.constraints:
        if c.op == "eq":
            parts.append(f"{c.var}={c.value}")
        elif c.op == "neq":
            parts.append(f"{c.var}!={c.value}")
        else:
            parts.append(f"{c.var}=*")
    return f"[ {', '.join(parts)} ]" if parts else "[ ]"


def pretty_print(doc: SpecDocument | ModuleDecl) -> str:
    """Emit canonical surface syntax.  parse(pretty_print(parse(text)))
    equals parse(text) for every well-formed document."""
    if isinstance(doc, ModuleDecl):
        doc = SpecDocument((doc,), ())
    lines: list[str] = []
    for m in doc.modules:
        lines.append(f"MODULE {m.name}" + ("  # synthetic" if m.synthetic else ""))
        for v in m.state_vars:
            lines.append(f"VAR {v.name} : {{ {', '.join(v.domain)} }}")
        for iv in m.input_vars:
            lines.append(f"INPUT {iv}")
        for s in m.states:
            val = ", ".join(f"{var}={x}" for var, x in s.valuation)
            lines.append(f"STATE {s.id} [ {val} ]")
        lines.append(f"INIT {m.init}")
        for t in m.transitions:
            lines.append(f"TRANS {t.src} -> {t.dst} {_pp_guard(t.guard)};")
        lines.append("")
    for g in doc.groups:
        goal = f' GOAL "{pretty_formula(g.goal)}"' if g.goal else ""
        lines.append(f"GROUP {g.name} {{ {', '.join(g.members)} }}{goal}")
    return "\n".join(lines).rstrip() + "\n"


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class GapEntry:
    module: str
    state: str
    inputs: tuple[tuple[str, str], ...]  # input valuation with no move


@dataclass(frozen=True)
class ValidationReport:
    gaps: tuple[GapEntry, ...]

    @property
    def total(self) -> bool:
        return not self.gaps


def _constraint_holds(c: GuardConstraint, value: str) -> bool:
    if c.op == "any":
        return True
    if c.op == "eq":
        return value == c.value
    return value != c.value


def guard_satisfied(guard: Guard, inputs: dict[str, str]) -> bool:
    """Inputs must assign every guard variable; unlisted inputs are free."""
    return all(
        _constraint_holds(c, inputs[c.var]) for c in guard.constraints
    )


def validate_spec(doc: SpecDocument, combo_cap: int = 1_000_000) -> ValidationReport:
    """Report totality gaps: (module, state, input valuation) triples with
    no enabled transition.  Such configurations stutter at composition
    time; a clean design has none."""
    owners = doc.owner_of
    gaps: list[GapEntry] = []
    for m in doc.modules:
        domains = []
        for iv in m.input_vars:
            owner = doc.modules_by_name[owners[iv]]
            dom = next(v.domain for v in owner.state_vars if v.name == iv)
            domains.append(dom)
        combos = 1
        for d in domains:
            combos *= len(d)
        if combos * len(m.states) > combo_cap:
            raise ResourceWarning(
                f"validation of module {m.name} would enumerate "
                f"{combos * len(m.states)} combinations (cap {combo_cap})"
            )
        for s in m.states:
            outgoing = m.transitions_by_src.get(s.id, ())
            for combo in product(*domains) if domains else [()]:
                inputs = dict(zip(m.input_vars, combo))
                if not any(
                    guard_satisfied(t.guard, inputs) for t in outgoing
                ):
                    gaps.append(
                        GapEntry(m.name, s.id, tuple(zip(m.input_vars, combo)))
                    )
    return ValidationReport(tuple(gaps))
