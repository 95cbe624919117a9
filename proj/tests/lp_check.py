#!/usr/bin/env python3
"""Standalone LP-format checker.

Reads a CPLEX-style LP file with its own tokenizer, re-solves it with
scipy.optimize.milp, and compares the optimum against a reference objective
(a literal or the "objective" field of a solution JSON). Shares no code with
the exporter, so it exercises the file as an interchange format.
"""

import argparse
import json
import math
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

SECTION_ALIASES = {
    "minimize": "objective-min",
    "minimum": "objective-min",
    "min": "objective-min",
    "maximize": "objective-max",
    "maximum": "objective-max",
    "max": "objective-max",
    "subject to": "constraints",
    "such that": "constraints",
    "st": "constraints",
    "s.t.": "constraints",
    "bounds": "bounds",
    "bound": "bounds",
    "general": "generals",
    "generals": "generals",
    "gen": "generals",
    "integer": "generals",
    "integers": "generals",
    "binary": "binaries",
    "binaries": "binaries",
    "bin": "binaries",
    "end": "end",
}

TOKEN = re.compile(
    r"""(?P<num>[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?)
      | (?P<cmp><=|=<|>=|=>|=)
      | (?P<sign>[+-])
      | (?P<colon>:)
      | (?P<name>[A-Za-z_!"#$%&()/,;?@`'{}|~.][A-Za-z0-9_!"#$%&()/,;?@`'{}|~.]*)
    """,
    re.X,
)

INF_NAMES = {"inf", "infinity"}


def split_sections(text):
    """Returns a list of (section, body_text) preserving order."""
    sections = []
    current = None
    body = []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in SECTION_ALIASES:
            if current is not None:
                sections.append((current, "\n".join(body)))
            current = SECTION_ALIASES[key]
            body = []
        else:
            if current is None:
                raise ValueError(f"content before the first section header: {line!r}")
            body.append(line)
    if current is not None:
        sections.append((current, "\n".join(body)))
    return sections


def tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize near {text[pos:pos + 20]!r}")
        kind = m.lastgroup
        out.append((kind, m.group()))
        pos = m.end()
    return out


class Expr:
    def __init__(self):
        self.coeffs = {}  # name -> coefficient
        self.constant = 0.0

    def add(self, name, coeff):
        self.coeffs[name] = self.coeffs.get(name, 0.0) + coeff


def parse_expression(tokens, i):
    """Parses [sign] [number] [name] groups until a comparison or end."""
    expr = Expr()
    sign = 1.0
    pending = None  # explicit coefficient waiting for a name
    while i < len(tokens):
        kind, value = tokens[i]
        if kind == "cmp":
            break
        if kind == "sign":
            if pending is not None:
                expr.constant += sign * pending
                pending = None
            sign = -1.0 if value == "-" else 1.0
            i += 1
        elif kind == "num":
            if pending is not None:
                expr.constant += sign * pending
            pending = float(value)
            i += 1
        elif kind == "name":
            if value.lower() in INF_NAMES:
                coeff = math.inf if pending is None else pending * math.inf
                expr.constant += sign * coeff
                pending = None
            else:
                expr.add(value, sign * (1.0 if pending is None else pending))
                pending = None
            sign = 1.0
            i += 1
        else:
            raise ValueError(f"unexpected token {value!r} in expression")
    if pending is not None:
        expr.constant += sign * pending
    return expr, i


def parse_constraint_line(line):
    tokens = tokenize(line)
    name = None
    i = 0
    if len(tokens) >= 2 and tokens[0][0] == "name" and tokens[1][0] == "colon":
        name = tokens[0][1]
        i = 2
    lhs, i = parse_expression(tokens, i)
    if i >= len(tokens):
        raise ValueError(f"constraint without comparison: {line!r}")
    op = tokens[i][1]
    rhs, i = parse_expression(tokens, i + 1)
    if i != len(tokens):
        raise ValueError(f"trailing tokens in constraint: {line!r}")
    # move variables to the left, constants to the right
    for var, coeff in rhs.coeffs.items():
        lhs.add(var, -coeff)
    bound = rhs.constant - lhs.constant
    if op in ("<=", "=<"):
        lo, hi = -math.inf, bound
    elif op in (">=", "=>"):
        lo, hi = bound, math.inf
    else:
        lo = hi = bound
    return name, lhs.coeffs, lo, hi


def parse_bounds_line(line, bounds):
    tokens = tokenize(line)
    # patterns: NAME free | expr cmp expr [cmp expr]
    if len(tokens) == 2 and tokens[0][0] == "name" and tokens[1][1].lower() == "free":
        bounds[tokens[0][1]] = (-math.inf, math.inf)
        return
    parts = []  # alternating expressions and comparison ops
    i = 0
    while i < len(tokens):
        expr, i = parse_expression(tokens, i)
        parts.append(expr)
        if i < len(tokens):
            parts.append(tokens[i][1])
            i += 1
    if len(parts) == 3:
        a, op, b = parts
        if a.coeffs and not b.coeffs:
            name = only_name(a)
            value = b.constant
            side = op
        elif b.coeffs and not a.coeffs:
            name = only_name(b)
            value = a.constant
            side = flip(op)
        else:
            raise ValueError(f"cannot read bound: {line!r}")
        lo, hi = bounds.get(name, (0.0, math.inf))
        if side in ("<=", "=<"):
            bounds[name] = (lo, value)
        elif side in (">=", "=>"):
            bounds[name] = (value, hi)
        else:
            bounds[name] = (value, value)
    elif len(parts) == 5:
        a, op1, b, op2, c = parts
        if not (op1 in ("<=", "=<") and op2 in ("<=", "=<")):
            raise ValueError(f"range bound must use <=: {line!r}")
        name = only_name(b)
        bounds[name] = (a.constant, c.constant)
    else:
        raise ValueError(f"cannot read bound: {line!r}")


def only_name(expr):
    if len(expr.coeffs) != 1:
        raise ValueError("bound side must be a single variable")
    (name, coeff), = expr.coeffs.items()
    if coeff != 1.0:
        raise ValueError("bound variable cannot carry a coefficient")
    return name


def flip(op):
    return {"<=": ">=", "=<": ">=", ">=": "<=", "=>": "<=", "=": "="}[op]


def parse_lp(text):
    sections = split_sections(text)
    if not sections or not sections[0][0].startswith("objective"):
        raise ValueError("LP file must start with an objective section")

    maximize = sections[0][0] == "objective-max"
    tokens = tokenize(sections[0][1])
    i = 0
    if len(tokens) >= 2 and tokens[0][0] == "name" and tokens[1][0] == "colon":
        i = 2
    objective, i = parse_expression(tokens, i)
    if i != len(tokens):
        raise ValueError("trailing tokens in objective")

    constraints = []
    bounds = {}
    integers = set()
    binaries = set()
    for section, body in sections[1:]:
        if section == "constraints":
            # named rows may wrap; a continuation line carries no colon
            merged = []
            for line in body.splitlines():
                if ":" in line or not merged:
                    merged.append(line)
                else:
                    merged[-1] += " " + line
            for line in merged:
                constraints.append(parse_constraint_line(line))
        elif section == "bounds":
            for line in body.splitlines():
                parse_bounds_line(line, bounds)
        elif section == "generals":
            integers.update(v for _, v in tokenize(body) if v.lower() not in INF_NAMES)
        elif section == "binaries":
            binaries.update(v for _, v in tokenize(body))
        elif section == "end":
            pass

    order = {}
    for name in objective.coeffs:
        order.setdefault(name, len(order))
    for _, coeffs, _, _ in constraints:
        for name in coeffs:
            order.setdefault(name, len(order))
    for name in bounds:
        order.setdefault(name, len(order))
    for name in integers | binaries:
        order.setdefault(name, len(order))

    n = len(order)
    c = np.zeros(n)
    for name, coeff in objective.coeffs.items():
        c[order[name]] = -coeff if maximize else coeff

    lo = np.zeros(n)
    hi = np.full(n, math.inf)
    for name, (a, b) in bounds.items():
        lo[order[name]], hi[order[name]] = a, b
    for name in binaries:
        if name not in bounds:
            lo[order[name]], hi[order[name]] = 0.0, 1.0

    integrality = np.zeros(n)
    for name in integers | binaries:
        integrality[order[name]] = 1

    rows = []
    row_lo = []
    row_hi = []
    for _, coeffs, a, b in constraints:
        row = np.zeros(n)
        for name, coeff in coeffs.items():
            row[order[name]] = coeff
        rows.append(row)
        row_lo.append(a)
        row_hi.append(b)

    return {
        "c": c,
        "constant": objective.constant * (-1.0 if maximize else 1.0),
        "maximize": maximize,
        "A": np.array(rows) if rows else np.zeros((0, n)),
        "row_lo": np.array(row_lo),
        "row_hi": np.array(row_hi),
        "lo": lo,
        "hi": hi,
        "integrality": integrality,
        "names": sorted(order, key=order.get),
    }


def solve(problem, gap):
    cons = LinearConstraint(problem["A"], problem["row_lo"], problem["row_hi"])
    res = milp(
        c=problem["c"],
        constraints=cons,
        bounds=Bounds(problem["lo"], problem["hi"]),
        integrality=problem["integrality"],
        options={"mip_rel_gap": gap},
    )
    if not res.success:
        raise RuntimeError(f"re-solve failed: {res.message}")
    value = res.fun + problem["constant"]
    return -value if problem["maximize"] else value


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("lp_file")
    ap.add_argument("--solution", help="solution JSON with an 'objective' field")
    ap.add_argument("--expect", type=float, help="literal reference objective")
    ap.add_argument("--tol", type=float, default=1e-6, help="relative tolerance")
    ap.add_argument("--gap", type=float, default=1e-9, help="MIP gap for the re-solve")
    args = ap.parse_args()

    if (args.solution is None) == (args.expect is None):
        ap.error("give exactly one of --solution or --expect")
    if args.solution:
        with open(args.solution) as f:
            expected = float(json.load(f)["objective"])
    else:
        expected = args.expect

    with open(args.lp_file) as f:
        problem = parse_lp(f.read())

    got = solve(problem, args.gap)
    scale = max(1.0, abs(expected), abs(got))
    ok = abs(got - expected) <= args.tol * scale
    print(
        f"lp_check: {len(problem['names'])} columns, re-solved objective {got!r}, "
        f"reference {expected!r}, relative delta {abs(got - expected) / scale:.3e} "
        f"-> {'OK' if ok else 'MISMATCH'}"
    )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
