"""Bounded SMT-LIB 2 solver for quantifier-free linear integer arithmetic.

Reads an SMT-LIB 2 script (stdin or a file), answers ``check-sat`` and
``get-value`` on stdout. Boolean structure is Tseitin-encoded, linear
integer atoms become indicator rows, and the resulting mixed-integer
program is solved exactly with HiGHS (zero MIP gap). ``(maximize t)`` /
``(minimize t)`` from the optimization extension are supported.

Integer variables are searched inside a finite window [-BOUND, BOUND]
(default 2^20, see --int-bound). That is ample for the scheduling-sized
problems this package emits, but makes the solver incomplete for formulas
whose only models lie outside the window. Every sat model is re-checked
against the original assertions in exact integer arithmetic before being
reported; a model that fails the check downgrades the answer to unknown.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

_TOKEN = re.compile(r';[^\n]*|"(?:[^"]|"")*"|[()]|[^\s()";]+')
_NUMERAL = re.compile(r"^[0-9]+$")

BOOL = "Bool"
INT = "Int"


class SmtInputError(Exception):
    pass


def tokenize(text: str) -> list[str]:
    return [t for t in _TOKEN.findall(text) if not t.startswith(";")]


def parse_all(text: str) -> list:
    """Parse every top-level s-expression into nested tuples of strings."""
    tokens = tokenize(text)
    stack: list[list] = []
    out: list = []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise SmtInputError("unbalanced ')'")
            done = tuple(stack.pop())
            if stack:
                stack[-1].append(done)
            else:
                out.append(done)
        else:
            if stack:
                stack[-1].append(tok)
            else:
                out.append(tok)
    if stack:
        raise SmtInputError("unbalanced '('")
    return out


def serialize(expr) -> str:
    if isinstance(expr, tuple):
        return "(" + " ".join(serialize(e) for e in expr) + ")"
    return expr


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value < 0:
        return f"(- {-value})"
    return str(value)


class _Builder:
    """Compiles expanded QF_LIA assertions into a 0/1 + integer MILP.

    Literals are signed ints: +i / -i refer to binary column i-1. Rows are
    (coefficient dict, lower, upper) with None for an open side.

    Narrow integer columns (width <= DOMAIN_WIDTH_LIMIT after bound
    preprocessing) additionally get a one-hot value encoding channelled to
    the integer column, so single-variable atoms on them become plain
    literals instead of big-M indicator rows.
    """

    DOMAIN_WIDTH_LIMIT = 160

    def __init__(self, decls: dict[str, str], bound: int):
        self.decls = decls
        self.bound = bound
        self.lb: list[int] = []
        self.ub: list[int] = []
        self.columns: dict[str, int] = {}
        self.rows: list[tuple[dict[int, int], int | None, int | None]] = []
        self.lit_memo: dict = {}
        self.atom_memo: dict = {}
        self.ite_memo: dict = {}
        self.domain: dict[int, tuple[int, list[int]]] = {}  # col -> (lo, bit cols)
        self.le_memo: dict[tuple[int, int], int] = {}
        self.true_lit = self._new_column(1, 1) + 1  # fixed binary = 1

    def _new_column(self, lo: int, hi: int) -> int:
        self.lb.append(lo)
        self.ub.append(hi)
        return len(self.lb) - 1

    def column_for(self, name: str) -> int:
        idx = self.columns.get(name)
        if idx is None:
            sort = self.decls.get(name)
            if sort is None:
                raise SmtInputError(f"undeclared symbol {name}")
            if sort == BOOL:
                idx = self._new_column(0, 1)
            else:
                idx = self._new_column(-self.bound, self.bound)
            self.columns[name] = idx
        return idx

    def install_domains(self) -> None:
        """One-hot encode every narrow integer column created so far."""
        for name, idx in self.columns.items():
            if self.decls.get(name) != INT:
                continue
            lo, hi = self.lb[idx], self.ub[idx]
            if not 1 <= hi - lo <= self.DOMAIN_WIDTH_LIMIT:
                continue
            bits = [self._new_column(0, 1) for _ in range(hi - lo + 1)]
            self.rows.append(({b: 1 for b in bits}, 1, 1))  # exactly one value
            channel = {b: lo + offset for offset, b in enumerate(bits)
                       if lo + offset != 0}
            channel[idx] = -1
            self.rows.append((channel, 0, 0))  # x = sum(v * bit_v)
            self.domain[idx] = (lo, bits)

    def _value_literal(self, idx: int, value: int) -> int:
        lo, bits = self.domain[idx]
        if not lo <= value <= lo + len(bits) - 1:
            return -self.true_lit
        return bits[value - lo] + 1

    def _le_literal(self, idx: int, bound: int) -> int:
        """Literal for (x <= bound) over a one-hot encoded column."""
        lo, bits = self.domain[idx]
        hi = lo + len(bits) - 1
        if bound >= hi:
            return self.true_lit
        if bound < lo:
            return -self.true_lit
        key = (idx, bound)
        cached = self.le_memo.get(key)
        if cached is None:
            prefix = self._le_literal(idx, bound - 1)
            cached = self._make_or([prefix, self._value_literal(idx, bound)], 0)
            self.le_memo[key] = cached
        return cached

    def add_clause(self, lits) -> None:
        coeffs: dict[int, int] = {}
        floor = 1
        for lit in lits:
            if lit == self.true_lit:
                return  # satisfied clause
            idx = abs(lit) - 1
            delta = 1 if lit > 0 else -1
            if lit < 0:
                floor -= 1
            coeffs[idx] = coeffs.get(idx, 0) + delta
        self.rows.append((coeffs, floor, None))

    def new_aux(self) -> int:
        return self._new_column(0, 1) + 1

    # ---- integer terms -------------------------------------------------

    def linearize(self, expr) -> tuple[dict[int, int], int]:
        """Return (column coefficients, constant) for an Int term."""
        if isinstance(expr, str):
            if _NUMERAL.match(expr):
                return {}, int(expr)
            if self.decls.get(expr) == INT:
                return {self.column_for(expr): 1}, 0
            raise SmtInputError(f"not an integer term: {expr}")
        op = expr[0]
        args = expr[1:]
        if op == "+":
            coeffs: dict[int, int] = {}
            const = 0
            for a in args:
                c, k = self.linearize(a)
                const += k
                for idx, v in c.items():
                    coeffs[idx] = coeffs.get(idx, 0) + v
            return coeffs, const
        if op == "-":
            if len(args) == 1:
                c, k = self.linearize(args[0])
                return {i: -v for i, v in c.items()}, -k
            coeffs, const = self.linearize(args[0])
            coeffs = dict(coeffs)
            for a in args[1:]:
                c, k = self.linearize(a)
                const -= k
                for idx, v in c.items():
                    coeffs[idx] = coeffs.get(idx, 0) - v
            return coeffs, const
        if op == "*":
            coeffs: dict[int, int] = {}
            const = 1
            pending = None
            for a in args:
                c, k = self.linearize(a)
                if c:
                    if pending is not None:
                        raise SmtInputError("nonlinear product")
                    pending = c
                else:
                    const *= k
            if pending is None:
                return {}, const
            return {i: v * const for i, v in pending.items()}, 0
        if op == "ite":
            return self._int_ite(expr)
        raise SmtInputError(f"unsupported integer operator {op}")

    def _term_range(self, coeffs: dict[int, int], const: int) -> tuple[int, int]:
        lo = hi = const
        for idx, v in coeffs.items():
            if v > 0:
                lo += v * self.lb[idx]
                hi += v * self.ub[idx]
            else:
                lo += v * self.ub[idx]
                hi += v * self.lb[idx]
        return lo, hi

    def _int_ite(self, expr) -> tuple[dict[int, int], int]:
        key = expr
        cached = self.ite_memo.get(key)
        if cached is not None:
            return {cached: 1}, 0
        _, cond, then_e, else_e = expr
        cond_lit = self.literal(cond)
        t_coeffs, t_const = self.linearize(then_e)
        e_coeffs, e_const = self.linearize(else_e)
        t_lo, t_hi = self._term_range(t_coeffs, t_const)
        e_lo, e_hi = self._term_range(e_coeffs, e_const)
        y = self._new_column(min(t_lo, e_lo), max(t_hi, e_hi))
        self.ite_memo[key] = y
        for guard, coeffs, const in ((cond_lit, t_coeffs, t_const),
                                     (-cond_lit, e_coeffs, e_const)):
            # guard -> branch term - y = 0, split into <= and >= halves
            diff = dict(coeffs)
            diff[y] = diff.get(y, 0) - 1
            le = self._atom_literal(diff, -const, 1)
            ge = self._atom_literal({i: -v for i, v in diff.items()}, const, 1)
            self.add_clause([-guard, le])
            self.add_clause([-guard, ge])
        return {y: 1}, 0

    # ---- atoms ---------------------------------------------------------

    def _atom_literal(self, coeffs: dict[int, int], limit: int,
                      pol: int = 0) -> int:
        """Literal for the atom  sum(coeffs) <= limit."""
        coeffs = {i: v for i, v in coeffs.items() if v != 0}
        if not coeffs:
            return self.true_lit if 0 <= limit else -self.true_lit
        g = 0
        for v in coeffs.values():
            g = math.gcd(g, abs(v))
        if g > 1:
            coeffs = {i: v // g for i, v in coeffs.items()}
            limit = limit // g
        if len(coeffs) == 1:
            ((idx, coef),) = coeffs.items()
            if idx in self.domain:
                if coef > 0:  # x <= floor(limit / coef)
                    return self._le_literal(idx, limit // coef)
                # x >= ceil(limit / coef)  ==  not (x <= ceil - 1)
                return -self._le_literal(idx, -((-limit) // coef) - 1)
        lo, hi = self._term_range(coeffs, 0)
        if hi <= limit:
            return self.true_lit
        if lo > limit:
            return -self.true_lit
        key = (tuple(sorted(coeffs.items())), limit)
        state = self.atom_memo.get(key)
        if state is None:
            state = [self.new_aux(), False, False]  # literal, fwd rows, bwd rows
            self.atom_memo[key] = state
        p = state[0]
        idx = p - 1
        if pol >= 0 and not state[1]:
            # p -> sum <= limit
            row = dict(coeffs)
            row[idx] = row.get(idx, 0) + (hi - limit)
            self.rows.append((row, None, hi))
            state[1] = True
        if pol <= 0 and not state[2]:
            # not p -> sum >= limit + 1
            row = dict(coeffs)
            row[idx] = row.get(idx, 0) + (limit + 1 - lo)
            self.rows.append((row, limit + 1, None))
            state[2] = True
        return p

    def compare(self, op: str, left, right, pol: int = 0) -> int:
        lc, lk = self.linearize(left)
        rc, rk = self.linearize(right)
        diff = dict(lc)
        for idx, v in rc.items():
            diff[idx] = diff.get(idx, 0) - v
        const = lk - rk  # atom: diff + const  OP  0
        if op == "<=":
            return self._atom_literal(diff, -const, pol)
        if op == "<":
            return self._atom_literal(diff, -const - 1, pol)
        if op == ">=":
            return self._atom_literal({i: -v for i, v in diff.items()}, const, pol)
        if op == ">":
            return self._atom_literal({i: -v for i, v in diff.items()}, const - 1, pol)
        raise SmtInputError(f"unknown comparison {op}")

    def int_equal(self, left, right, pol: int = 0) -> int:
        lc, lk = self.linearize(left)
        rc, rk = self.linearize(right)
        diff = dict(lc)
        for idx, v in rc.items():
            diff[idx] = diff.get(idx, 0) - v
        diff = {i: v for i, v in diff.items() if v != 0}
        const = rk - lk  # atom: diff == const
        if not diff:
            return self.true_lit if const == 0 else -self.true_lit
        if len(diff) == 1:
            ((idx, coef),) = diff.items()
            if const % coef != 0:
                return -self.true_lit
            value = const // coef
            if idx in self.domain:
                return self._value_literal(idx, value)
            if not self.lb[idx] <= value <= self.ub[idx]:
                return -self.true_lit
        le = self._atom_literal(dict(diff), const, pol)
        ge = self._atom_literal({i: -v for i, v in diff.items()}, -const, pol)
        return self._make_and([le, ge], pol)

    # ---- boolean structure ----------------------------------------------
    #
    # Gates are polarity-aware: clauses are only emitted for the directions
    # a gate is actually used in (pol > 0: gate implies its definition,
    # pol < 0: definition implies gate, pol = 0: both).

    def _gate_state(self, key) -> list:
        state = self.lit_memo.get(key)
        if state is None:
            state = [self.new_aux(), False, False]
            self.lit_memo[key] = state
        return state

    def _make_and(self, lits: list[int], pol: int = 0) -> int:
        lits = [l for l in lits if l != self.true_lit]
        if any(l == -self.true_lit for l in lits):
            return -self.true_lit
        if not lits:
            return self.true_lit
        unique = sorted(set(lits))
        if len(unique) == 1:
            return unique[0]
        if any(-l in unique for l in unique):
            return -self.true_lit
        state = self._gate_state(("and", tuple(unique)))
        g = state[0]
        if pol >= 0 and not state[1]:
            for l in unique:
                self.add_clause([-g, l])
            state[1] = True
        if pol <= 0 and not state[2]:
            self.add_clause([g] + [-l for l in unique])
            state[2] = True
        return g

    def _make_or(self, lits: list[int], pol: int = 0) -> int:
        return -self._make_and([-l for l in lits], -pol)

    def _make_iff(self, a: int, b: int) -> int:
        if a == b:
            return self.true_lit
        if a == -b:
            return -self.true_lit
        if a == self.true_lit:
            return b
        if b == self.true_lit:
            return a
        if a == -self.true_lit:
            return -b
        if b == -self.true_lit:
            return -a
        state = self._gate_state(("iff", tuple(sorted((a, b)))))
        g = state[0]
        if not state[1]:
            self.add_clause([-g, -a, b])
            self.add_clause([-g, a, -b])
            self.add_clause([g, a, b])
            self.add_clause([g, -a, -b])
            state[1] = state[2] = True
        return g

    def sort_of(self, expr) -> str:
        if isinstance(expr, str):
            if expr in ("true", "false"):
                return BOOL
            if _NUMERAL.match(expr):
                return INT
            sort = self.decls.get(expr)
            if sort is None:
                raise SmtInputError(f"undeclared symbol {expr}")
            return sort
        op = expr[0]
        if op in ("and", "or", "not", "=>", "xor", "=", "distinct",
                  "<", "<=", ">", ">="):
            return BOOL
        if op in ("+", "-", "*"):
            return INT
        if op == "ite":
            return self.sort_of(expr[2])
        raise SmtInputError(f"cannot infer sort of {serialize(expr)}")

    def literal(self, expr, pol: int = 0) -> int:
        if isinstance(expr, str):
            if expr == "true":
                return self.true_lit
            if expr == "false":
                return -self.true_lit
            if self.decls.get(expr) == BOOL:
                return self.column_for(expr) + 1
            raise SmtInputError(f"not a boolean term: {expr}")
        op = expr[0]
        args = expr[1:]
        if op == "not":
            return -self.literal(args[0], -pol)
        if op == "and":
            return self._make_and([self.literal(a, pol) for a in args], pol)
        if op == "or":
            return self._make_or([self.literal(a, pol) for a in args], pol)
        if op == "=>":
            lit = self.literal(args[-1], pol)
            for a in reversed(args[:-1]):
                lit = self._make_or([-self.literal(a, -pol), lit], pol)
            return lit
        if op == "xor":
            lit = self.literal(args[0], 0)
            for a in args[1:]:
                lit = -self._make_iff(lit, self.literal(a, 0))
            return lit
        if op == "ite":
            c = self.literal(args[0], 0)
            t = self.literal(args[1], pol)
            e = self.literal(args[2], pol)
            return self._make_and([self._make_or([-c, t], pol),
                                   self._make_or([c, e], pol)], pol)
        if op == "=":
            if self.sort_of(args[0]) == BOOL:
                lits = [self.literal(a, 0) for a in args]
                return self._make_and([self._make_iff(x, y)
                                       for x, y in zip(lits, lits[1:])], pol)
            return self._make_and([self.int_equal(x, y, pol)
                                   for x, y in zip(args, args[1:])], pol)
        if op == "distinct":
            if self.sort_of(args[0]) == BOOL:
                pieces = [-self._make_iff(self.literal(x, 0), self.literal(y, 0))
                          for i, x in enumerate(args) for y in args[i + 1:]]
            else:
                pieces = [-self.int_equal(x, y, 0)
                          for i, x in enumerate(args) for y in args[i + 1:]]
            return self._make_and(pieces, pol)
        if op in ("<", "<=", ">", ">="):
            return self._make_and([self.compare(op, x, y, pol)
                                   for x, y in zip(args, args[1:])], pol)
        raise SmtInputError(f"unsupported boolean operator {op}")

    _COMPLEMENT = {"<=": ">", "<": ">=", ">=": "<", ">": "<="}

    def assert_expr(self, expr) -> None:
        if isinstance(expr, tuple) and expr and expr[0] == "and":
            for a in expr[1:]:
                self.assert_expr(a)
            return
        if (isinstance(expr, tuple) and len(expr) == 2 and expr[0] == "not"
                and isinstance(expr[1], tuple) and len(expr[1]) == 3
                and expr[1][0] in self._COMPLEMENT):
            op, left, right = expr[1]
            expr = (self._COMPLEMENT[op], left, right)
        if (isinstance(expr, tuple) and len(expr) == 3
                and expr[0] in ("<=", "<", ">=", ">", "=")
                and self._direct_row(expr)):
            return
        self.add_clause([self.literal(expr, 1)])

    def _direct_row(self, expr) -> bool:
        """Emit a top-level comparison as a plain row; False if it needs gates."""
        op, left, right = expr
        try:
            if op == "=" and self.sort_of(left) != INT:
                return False
            lc, lk = self.linearize(left)
            rc, rk = self.linearize(right)
        except SmtInputError:
            return False
        diff = dict(lc)
        for idx, v in rc.items():
            diff[idx] = diff.get(idx, 0) - v
        diff = {i: v for i, v in diff.items() if v != 0}
        const = rk - lk  # row: diff OP const
        if not diff:
            satisfied = {"<=": 0 <= const, "<": 0 < const, ">=": 0 >= const,
                         ">": 0 > const, "=": 0 == const}[op]
            if not satisfied:
                self.add_clause([])  # empty clause: unsat
            return True
        if op == "=":
            self.rows.append((diff, const, const))
        elif op in ("<=", "<"):
            self.rows.append((diff, None, const - (1 if op == "<" else 0)))
        else:
            self.rows.append((diff, const + (1 if op == ">" else 0), None))
        return True

    # ---- bound preprocessing --------------------------------------------

    def tighten_bounds(self, assertions) -> bool:
        """Fold top-level single-variable comparisons into column bounds.

        Big-M coefficients for conditional atoms derive from column bounds,
        so asserted ranges make the whole relaxation tight. Returns False
        when a variable's bounds become empty (the script is unsat).
        """
        for assertion in assertions:
            for expr in self._conjuncts(assertion):
                self._tighten_one(expr)
        return all(lo <= hi for lo, hi in zip(self.lb, self.ub))

    def _conjuncts(self, expr):
        if isinstance(expr, tuple) and expr and expr[0] == "and":
            for part in expr[1:]:
                yield from self._conjuncts(part)
        else:
            yield expr

    @staticmethod
    def _plain_term(expr) -> bool:
        if isinstance(expr, str):
            return True
        if not isinstance(expr, tuple) or not expr:
            return False
        if expr[0] not in ("+", "-", "*"):
            return False
        return all(_Builder._plain_term(a) for a in expr[1:])

    def _tighten_one(self, expr) -> None:
        if not (isinstance(expr, tuple) and len(expr) == 3
                and expr[0] in ("<=", "<", ">=", ">", "=")):
            return
        op, left, right = expr
        if not (self._plain_term(left) and self._plain_term(right)):
            return
        try:
            if op == "=" and self.sort_of(left) != INT:
                return
            lc, lk = self.linearize(left)
            rc, rk = self.linearize(right)
        except SmtInputError:
            return
        diff = dict(lc)
        for idx, v in rc.items():
            diff[idx] = diff.get(idx, 0) - v
        diff = {i: v for i, v in diff.items() if v != 0}
        if len(diff) != 1:
            return
        ((idx, coef),) = diff.items()
        const = rk - lk  # atom: coef * x  OP  const
        bounds = []
        if op in ("<=", "<", "="):
            limit = const - (1 if op == "<" else 0)
            bounds.append(("<=", limit))
        if op in (">=", ">", "="):
            limit = const + (1 if op == ">" else 0)
            bounds.append((">=", limit))
        for direction, limit in bounds:
            if (coef > 0) == (direction == "<="):
                self.ub[idx] = min(self.ub[idx], limit // coef)
            else:
                self.lb[idx] = max(self.lb[idx], -((-limit) // coef))


def _evaluate(expr, model: dict[str, int | bool]):
    """Exact evaluation of an expanded term under a model."""
    if isinstance(expr, str):
        if expr == "true":
            return True
        if expr == "false":
            return False
        if _NUMERAL.match(expr):
            return int(expr)
        if expr in model:
            return model[expr]
        raise SmtInputError(f"no value for {expr}")
    op = expr[0]
    args = expr[1:]
    if op == "not":
        return not _evaluate(args[0], model)
    if op == "and":
        return all(_evaluate(a, model) for a in args)
    if op == "or":
        return any(_evaluate(a, model) for a in args)
    if op == "=>":
        values = [_evaluate(a, model) for a in args]
        result = values[-1]
        for v in reversed(values[:-1]):
            result = (not v) or result
        return result
    if op == "xor":
        values = [bool(_evaluate(a, model)) for a in args]
        result = values[0]
        for v in values[1:]:
            result = result != v
        return result
    if op == "ite":
        return (_evaluate(args[1], model) if _evaluate(args[0], model)
                else _evaluate(args[2], model))
    if op == "=":
        values = [_evaluate(a, model) for a in args]
        return all(x == y for x, y in zip(values, values[1:]))
    if op == "distinct":
        values = [_evaluate(a, model) for a in args]
        return len(set(values)) == len(values)
    if op in ("<", "<=", ">", ">="):
        values = [_evaluate(a, model) for a in args]
        pairs = zip(values, values[1:])
        if op == "<":
            return all(x < y for x, y in pairs)
        if op == "<=":
            return all(x <= y for x, y in pairs)
        if op == ">":
            return all(x > y for x, y in pairs)
        return all(x >= y for x, y in pairs)
    if op == "+":
        return sum(_evaluate(a, model) for a in args)
    if op == "-":
        values = [_evaluate(a, model) for a in args]
        if len(values) == 1:
            return -values[0]
        result = values[0]
        for v in values[1:]:
            result -= v
        return result
    if op == "*":
        result = 1
        for a in args:
            result *= _evaluate(a, model)
        return result
    raise SmtInputError(f"cannot evaluate {serialize(expr)}")


class RefSolver:
    def __init__(self, bound: int = 1 << 20, verify: bool = True,
                 time_limit: float | None = None, out=None):
        self.bound = bound
        self.verify = verify
        self.time_limit = time_limit
        self.out = out if out is not None else sys.stdout
        self.decls: dict[str, str] = {}
        self.defs: dict[str, tuple] = {}
        self.assertions: list = []
        self.objective: tuple[str, tuple] | None = None
        self.model: dict[str, int | bool] | None = None

    # ---- command plumbing ----------------------------------------------

    def _emit(self, line: str) -> None:
        self.out.write(line + "\n")
        self.out.flush()

    def run_text(self, text: str) -> None:
        try:
            commands = parse_all(text)
        except SmtInputError as err:
            self._emit(f'(error "{err}")')
            return
        for command in commands:
            if not self.execute(command):
                break

    def execute(self, command) -> bool:
        if not isinstance(command, tuple) or not command:
            self._emit('(error "expected a command")')
            return True
        op = command[0]
        try:
            if op in ("set-logic", "set-info", "set-option"):
                pass
            elif op == "echo":
                self._emit(command[1].strip('"') if len(command) > 1 else "")
            elif op == "exit":
                return False
            elif op == "reset":
                self.__init__(self.bound, self.verify, self.time_limit, self.out)
            elif op in ("declare-fun", "declare-const"):
                self._declare(command)
            elif op == "define-fun":
                self._define(command)
            elif op == "assert":
                self.assertions.append(self._expand(command[1], {}))
                self.model = None
            elif op in ("maximize", "minimize"):
                self.objective = (op, self._expand(command[1], {}))
            elif op == "check-sat":
                self._emit(self._solve())
            elif op == "get-value":
                self._get_value(command[1])
            elif op == "get-model":
                self._get_model()
            else:
                self._emit(f'(error "unsupported command: {op}")')
        except SmtInputError as err:
            self._emit(f'(error "{err}")')
        return True

    def _declare(self, command) -> None:
        if command[0] == "declare-fun":
            if len(command) != 4 or command[2] != ():
                raise SmtInputError("only 0-ary declare-fun is supported")
            name, sort = command[1], command[3]
        else:
            name, sort = command[1], command[2]
        if sort not in (BOOL, INT):
            raise SmtInputError(f"unsupported sort {serialize(sort)}")
        if name in self.decls or name in self.defs:
            raise SmtInputError(f"symbol {name} already declared")
        self.decls[name] = sort

    def _define(self, command) -> None:
        if len(command) != 5 or command[2] != ():
            raise SmtInputError("only 0-ary define-fun is supported")
        name, sort, body = command[1], command[3], command[4]
        if name in self.decls or name in self.defs:
            raise SmtInputError(f"symbol {name} already defined")
        if sort not in (BOOL, INT):
            raise SmtInputError(f"unsupported sort {serialize(sort)}")
        # defined symbols are macros; they expand away and never become columns
        self.defs[name] = self._expand(body, {})

    def _expand(self, expr, env: dict):
        if isinstance(expr, str):
            if expr in env:
                return env[expr]
            if expr in self.defs:
                return self.defs[expr]
            return expr
        if not expr:
            return expr
        op = expr[0]
        if op == "let":
            bindings = expr[1]
            new_env = dict(env)
            for name, value in bindings:
                new_env[name] = self._expand(value, env)
            return self._expand(expr[2], new_env)
        return tuple([op] + [self._expand(a, env) for a in expr[1:]])

    # ---- solving ---------------------------------------------------------

    def _solve(self) -> str:
        import numpy as np
        from scipy import sparse
        from scipy.optimize import Bounds, LinearConstraint, milp

        builder = _Builder(self.decls, self.bound)
        for name in self.decls:
            builder.column_for(name)
        if not builder.tighten_bounds(self.assertions):
            self.model = None
            return "unsat"
        builder.install_domains()
        for assertion in self.assertions:
            builder.assert_expr(assertion)
        objective_coeffs: dict[int, int] = {}
        sense = 1
        if self.objective is not None:
            kind, expr = self.objective
            objective_coeffs, _ = builder.linearize(expr)
            sense = -1 if kind == "maximize" else 1

        n = len(builder.lb)
        c = np.zeros(n)
        for idx, v in objective_coeffs.items():
            c[idx] = sense * v
        data, row_idx, col_idx, lo, hi = [], [], [], [], []
        for r, (coeffs, row_lo, row_hi) in enumerate(builder.rows):
            for idx, v in coeffs.items():
                data.append(float(v))
                row_idx.append(r)
                col_idx.append(idx)
            lo.append(-np.inf if row_lo is None else float(row_lo))
            hi.append(np.inf if row_hi is None else float(row_hi))
        matrix = sparse.csr_matrix(
            (data, (row_idx, col_idx)), shape=(len(builder.rows), n))
        import os
        import warnings

        options = {"mip_rel_gap": 0.0, "presolve": True}
        threads = min(4, os.cpu_count() or 1)
        if threads > 1:
            options["threads"] = threads  # passed through to HiGHS
        if self.time_limit:
            options["time_limit"] = self.time_limit
        with warnings.catch_warnings():
            # scipy warns when forwarding solver-specific options to HiGHS
            warnings.simplefilter("ignore")
            result = milp(
                c,
                constraints=LinearConstraint(matrix, np.array(lo), np.array(hi)),
                integrality=np.ones(n),
                bounds=Bounds(np.array(builder.lb, dtype=float),
                              np.array(builder.ub, dtype=float)),
                options=options,
            )
        if result.status == 2:
            self.model = None
            return "unsat"
        if result.status != 0 or result.x is None:
            self.model = None
            return "unknown"
        values = [int(round(v)) for v in result.x]
        model: dict[str, int | bool] = {}
        for name, sort in self.decls.items():
            idx = builder.columns[name]
            model[name] = bool(values[idx]) if sort == BOOL else values[idx]
        if self.verify:
            try:
                if not all(_evaluate(a, model) for a in self.assertions):
                    self.model = None
                    return "unknown"
            except SmtInputError:
                self.model = None
                return "unknown"
        self.model = model
        return "sat"

    # ---- model queries ----------------------------------------------------

    def _get_value(self, terms) -> None:
        if self.model is None:
            raise SmtInputError("model is not available")
        if isinstance(terms, str):
            terms = (terms,)
        parts = []
        for term in terms:
            value = _evaluate(self._expand(term, {}), self.model)
            parts.append(f"({serialize(term)} {format_value(value)})")
        self._emit("(" + " ".join(parts) + ")")

    def _get_model(self) -> None:
        if self.model is None:
            raise SmtInputError("model is not available")
        lines = ["("]
        for name in sorted(self.model):
            sort = self.decls[name]
            lines.append(
                f"  (define-fun {name} () {sort} {format_value(self.model[name])})")
        lines.append(")")
        self._emit("\n".join(lines))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="copath-refsolver",
        description="bounded QF_LIA SMT-LIB 2 solver over HiGHS")
    parser.add_argument("script", nargs="?", default="-",
                        help="SMT-LIB 2 file, or - for stdin")
    parser.add_argument("--int-bound", type=int, default=1 << 20,
                        help="search window for integer variables")
    parser.add_argument("--no-verify", action="store_true",
                        help="skip the exact re-check of sat models")
    parser.add_argument("--time-limit", type=float, default=None,
                        help="HiGHS time limit per check-sat, seconds")
    args = parser.parse_args(argv)

    if args.script == "-":
        text = sys.stdin.read()
    else:
        with open(args.script, "r", encoding="utf-8") as handle:
            text = handle.read()
    solver = RefSolver(bound=args.int_bound, verify=not args.no_verify,
                       time_limit=args.time_limit)
    try:
        solver.run_text(text)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); swallow the noise
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
