"""Mixed-integer program export in the textual LP format, plus a lint pass.

The export is one-way: it writes the minimum-energy dissemination program for
an external solver but never reads solutions back. Variables follow a fixed
naming scheme over info ids, edge indices and vertex ids:

    a_{i}_{e}  edge e carries information i            (binary)
    h_{i}_{v}  vertex v forwards information i         (binary)
    b_{i}_{v}  vertex v transmits information i        (binary)
    d_{i}_{v}  vertex v is i's delivery copy           (binary)
    P_{v}      transmission cost of vertex v           (continuous, >= 0)

Sections are emitted in the order Minimize / Subject To / Binaries / Bounds /
End, one constraint per line. The delivery disjunction (a destination copy
receives iff it forwards or delivers) is linearized as the four rows
sum >= h, sum >= d, sum <= h + d, sum <= 1 over its incoming activations.
Note one corner: a destination copy that could gather the information itself
still needs an incoming activation here, exactly as in the base formulation,
whereas the in-repo checker serves it for free.
"""

from __future__ import annotations

import re

from .errors import LpSizeError
from .graph import CACHING, CONNECTIVITY, VIRTUAL, AugmentedGraph
from .scenario import CACHE_SINGLE

LP_HEADER = "\\ fleetcast-lp/1"

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_TOKEN_RE = re.compile(
    r"[A-Za-z_][A-Za-z0-9_]*"                     # variable name
    r"|(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"      # number, exponents intact
    r"|[-+]"                                      # sign
    r"|\S")                                       # anything else: flagged
_SENSES = ("<=", ">=", "=")


def export_lp(graph: AugmentedGraph, infos=None, max_variables: int = 500_000) -> str:
    """Serialize the instance as a minimize LP document."""
    infos = sorted(graph.infos if infos is None else infos, key=lambda i: i.id)
    n_vertices = graph.real_vertex_count
    real_edges = [e for e in graph.edges if e.kind != VIRTUAL]

    n_vars = (len(infos) * len(real_edges) + 2 * len(infos) * n_vertices
              + sum(len(i.destinations) for i in infos) * graph.horizon
              + n_vertices)
    if n_vars > max_variables:
        raise LpSizeError(
            f"instance needs {n_vars} variables, cap is {max_variables}")

    out_real = [[] for _ in range(n_vertices)]
    in_real = [[] for _ in range(n_vertices)]
    for edge in real_edges:
        out_real[edge.tail].append(edge)
        in_real[edge.head].append(edge)

    rows = []

    def row(name, terms, sense, rhs):
        # terms: list of (coefficient, variable)
        if not terms:
            raise AssertionError(f"constraint {name} has no terms")
        parts = []
        for k, (coef, var) in enumerate(terms):
            if coef >= 0:
                sign = "+ " if k else ""
            else:
                sign = "- "
            mag = abs(coef)
            if mag == 1:
                parts.append(f"{sign}{var}")
            else:
                parts.append(f"{sign}{mag!r} {var}")
        rows.append(f" {name}: {' '.join(parts)} {sense} {rhs!r}")

    for info in infos:
        i = info.id
        source_vertices = {graph.vertex_id(u, t) for u, t in info.sources}
        dest_uavs = info.destinations
        for v in range(n_vertices):
            uav = v // graph.horizon
            outs = out_real[v]
            ins = in_real[v]
            if v not in source_vertices:
                if outs:
                    row(f"c1_{i}_{v}",
                        [(1, f"a_{i}_{e.index}") for e in outs]
                        + [(-len(outs), f"h_{i}_{v}")], "<=", 0)
                row(f"c2_{i}_{v}",
                    [(1, f"a_{i}_{e.index}") for e in outs]
                    + [(-1, f"h_{i}_{v}")], ">=", 0)
            if uav not in dest_uavs:
                row(f"c3_{i}_{v}",
                    [(1, f"a_{i}_{e.index}") for e in ins]
                    + [(-1, f"h_{i}_{v}")], "=", 0)
            else:
                in_terms = [(1, f"a_{i}_{e.index}") for e in ins]
                row(f"c4a_{i}_{v}", in_terms + [(-1, f"h_{i}_{v}")], ">=", 0)
                row(f"c4b_{i}_{v}", in_terms + [(-1, f"d_{i}_{v}")], ">=", 0)
                row(f"c4c_{i}_{v}",
                    in_terms + [(-1, f"h_{i}_{v}"), (-1, f"d_{i}_{v}")], "<=", 0)
                if in_terms:
                    row(f"c4d_{i}_{v}", in_terms, "<=", 1)
        for u in sorted(dest_uavs):
            row(f"c5_{i}_{u}",
                [(1, f"d_{i}_{graph.vertex_id(u, t)}")
                 for t in range(graph.horizon)], "=", 1)
        send_terms = [(1, f"a_{i}_{e.index}")
                      for v in sorted(source_vertices) for e in out_real[v]]
        if not send_terms:
            send_terms = [(0, "P_0")]  # no source can send: unsatisfiable row
        row(f"c6_{i}", send_terms, ">=", 1)

    if infos:
        for v in range(n_vertices):
            row(f"c7_{v}", [(1, f"b_{info.id}_{v}") for info in infos], "<=", 1)
        for info in infos:
            i = info.id
            for v in range(n_vertices):
                conn_out = [e for e in out_real[v] if e.kind == CONNECTIVITY]
                if conn_out:
                    row(f"c8_{i}_{v}",
                        [(1, f"a_{i}_{e.index}") for e in conn_out]
                        + [(-len(conn_out), f"b_{i}_{v}")], "<=", 0)
        for t in range(graph.horizon):
            layer = graph.conn_by_time[t]
            if layer:
                row(f"c9_{t}",
                    [(1, f"a_{info.id}_{e}")
                     for info in infos for e in layer], "<=", graph.channels)
        for v in range(n_vertices):
            for e in out_real[v]:
                if e.kind != CONNECTIVITY:
                    continue
                row(f"c10_{v}_{e.index}",
                    [(1, f"P_{v}")]
                    + [(-e.weight, f"a_{info.id}_{e.index}") for info in infos],
                    ">=", 0)
        if graph.cache_capacity == CACHE_SINGLE:
            for edge in real_edges:
                if edge.kind == CACHING:
                    row(f"ce_{edge.index}",
                        [(1, f"a_{info.id}_{edge.index}") for info in infos],
                        "<=", 1)

    binaries = []
    for info in infos:
        i = info.id
        binaries.extend(f"a_{i}_{e.index}" for e in real_edges)
        binaries.extend(f"h_{i}_{v}" for v in range(n_vertices))
        binaries.extend(f"b_{i}_{v}" for v in range(n_vertices))
        for u in sorted(info.destinations):
            binaries.extend(f"d_{i}_{graph.vertex_id(u, t)}"
                            for t in range(graph.horizon))

    lines = [LP_HEADER, "Minimize"]
    objective = " + ".join(f"P_{v}" for v in range(n_vertices))
    lines.append(f" obj: {objective}")
    lines.append("Subject To")
    lines.extend(rows)
    lines.append("Binaries")
    for k in range(0, len(binaries), 8):
        lines.append(" " + " ".join(binaries[k:k + 8]))
    lines.append("Bounds")
    lines.extend(f" 0 <= P_{v}" for v in range(n_vertices))
    lines.append("End")
    return "\n".join(lines) + "\n"


def lint_lp(text: str) -> list[str]:
    """Validate an LP document; returns a list of problems, empty when clean.

    Checks the section layout, that every row parses as terms/sense/rhs, that
    names are well-formed and unique, and that every referenced variable is
    declared binary or carries an explicit bound.
    """
    errors: list[str] = []
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("\\")]

    section_order = ["minimize", "subject to", "binaries", "bounds", "end"]
    indices = {}
    for k, ln in enumerate(lines):
        key = ln.lower()
        if key in section_order:
            if key in indices:
                errors.append(f"duplicate section {ln!r}")
            indices[key] = k
    for name in section_order:
        if name not in indices:
            errors.append(f"missing section {name!r}")
    if errors:
        return errors
    if [indices[name] for name in section_order] != sorted(indices.values()):
        errors.append("sections out of order")
        return errors

    referenced: set[str] = set()
    declared: set[str] = set()

    def parse_expr(expr, where):
        coef = None
        seen_terms = 0
        for tok in _TOKEN_RE.findall(expr):
            if tok in ("+", "-"):
                if coef is not None:
                    errors.append(f"{where}: dangling coefficient")
                    return 0
                continue
            if _NAME_RE.match(tok):
                referenced.add(tok)
                seen_terms += 1
                coef = None
                continue
            try:
                float(tok)
            except ValueError:
                errors.append(f"{where}: unparseable token {tok!r}")
                return 0
            if coef is not None:
                errors.append(f"{where}: two coefficients in a row")
                return 0
            coef = tok
        if coef is not None:
            errors.append(f"{where}: dangling coefficient")
        return seen_terms

    # objective
    obj_lines = lines[indices["minimize"] + 1:indices["subject to"]]
    if not obj_lines:
        errors.append("empty objective")
    else:
        expr = " ".join(obj_lines)
        if ":" in expr:
            expr = expr.split(":", 1)[1]
        parse_expr(expr, "objective")

    row_names = set()
    for ln in lines[indices["subject to"] + 1:indices["binaries"]]:
        if ":" not in ln:
            errors.append(f"constraint without a name: {ln!r}")
            continue
        name, rest = ln.split(":", 1)
        name = name.strip()
        if not _NAME_RE.match(name):
            errors.append(f"bad constraint name {name!r}")
        if name in row_names:
            errors.append(f"duplicate constraint name {name!r}")
        row_names.add(name)
        sense = None
        for candidate in _SENSES:
            if candidate in rest:
                sense = candidate
                break
        if sense is None:
            errors.append(f"{name}: no relational operator")
            continue
        lhs, rhs = rest.rsplit(sense, 1)
        try:
            float(rhs)
        except ValueError:
            errors.append(f"{name}: right-hand side {rhs.strip()!r} not numeric")
        if parse_expr(lhs, name) == 0:
            errors.append(f"{name}: no variables on the left-hand side")

    for ln in lines[indices["binaries"] + 1:indices["bounds"]]:
        for tok in ln.split():
            if not _NAME_RE.match(tok):
                errors.append(f"bad binary name {tok!r}")
            declared.add(tok)

    for ln in lines[indices["bounds"] + 1:indices["end"]]:
        tokens = ln.split()
        names = [tok for tok in tokens if _NAME_RE.match(tok) and tok != "free"]
        if not names:
            errors.append(f"bound line without a variable: {ln!r}")
        for tok in names:
            declared.add(tok)

    for var in sorted(referenced - declared):
        errors.append(f"variable {var} is never declared binary or bounded")
    return errors
