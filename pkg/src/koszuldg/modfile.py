"""Text format for DG modules: hand-auditable, line-based, round-tripping.

A module file names its algebra (codegree list or catalog group, polynomial
or exterior), a window, completeness flags, labeled components per degree,
and the differential and action values on basis labels as rational linear
combinations.  Parsing validates every construction-time invariant; the
canonical printer sorts everything so parse . print is the identity on
canonical files.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .grlin import zeros
from .algebra import (
    DGModule,
    ExtAlgebra,
    GroupData,
    InvariantViolation,
    PolyAlgebra,
    dg_module,
    named_group,
)


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


_TERM = re.compile(r"""^\s*(?P<sign>[+-])?\s*
                        (?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?
                        (?P<label>[A-Za-z_][A-Za-z_0-9.^]*)?\s*$""", re.X)


def parse_combination(text: str, line_no: int) -> dict:
    """Parse 'a - 2*b + 1/2*c' into {label: Fraction}; '0' is empty."""
    text = text.strip()
    if text in ("0", ""):
        return {}
    out = {}
    chunks = re.split(r"(?=[+-])", text.replace(" ", ""))
    for chunk in chunks:
        if not chunk:
            continue
        m = _TERM.match(chunk)
        if not m or (m.group("coef") is None and m.group("label") is None):
            raise ParseError(line_no, f"cannot parse term {chunk!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        label = m.group("label")
        if label is None:
            raise ParseError(line_no, f"term {chunk!r} has no basis label")
        out[label] = out.get(label, Fraction(0)) + coef
    return {l: c for l, c in out.items() if c}


def _parse_algebra(tokens, line_no):
    if not tokens:
        raise ParseError(line_no, "algebra line needs a kind")
    kind = tokens[0]
    if kind not in ("poly", "ext"):
        raise ParseError(line_no, f"unknown algebra kind {kind!r}")
    if len(tokens) == 1:
        group = GroupData(())
    else:
        spec = tokens[1]
        if re.fullmatch(r"[0-9][0-9,]*", spec):
            group = GroupData(tuple(int(x) for x in spec.split(",") if x))
        else:
            group = named_group(spec)
    return PolyAlgebra(group) if kind == "poly" else ExtAlgebra(group)


def parse_module(text: str, name: str = "") -> DGModule:
    """Parse the text format into a validated DG module."""
    algebra = None
    window = None
    complete_below = False
    complete_above = False
    components = {}      # degree -> list of labels
    label_degree = {}
    label_index = {}
    d_lines = []         # (line_no, label, combination-text)
    act_lines = []       # (line_no, genname, label, combination-text)
    mod_name = name
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "module":
            mod_name = tokens[1] if len(tokens) > 1 else mod_name
        elif head == "algebra":
            algebra = _parse_algebra(tokens[1:], line_no)
        elif head == "window":
            if len(tokens) != 3:
                raise ParseError(line_no, "window needs two integers")
            try:
                window = (int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise ParseError(line_no, "window bounds must be integers")
        elif head == "complete":
            for t in tokens[1:]:
                if t == "below":
                    complete_below = True
                elif t == "above":
                    complete_above = True
                elif t == "both":
                    complete_below = complete_above = True
                else:
                    raise ParseError(line_no, f"unknown completeness flag {t!r}")
        elif head == "component":
            if len(tokens) < 2:
                raise ParseError(line_no, "component needs a degree")
            try:
                deg = int(tokens[1])
            except ValueError:
                raise ParseError(line_no, f"bad degree {tokens[1]!r}")
            labels = tokens[2:]
            if not labels:
                raise ParseError(line_no, "component needs at least one label")
            for lab in labels:
                if lab in label_degree:
                    raise ParseError(line_no, f"duplicate label {lab!r}")
                label_degree[lab] = deg
            components.setdefault(deg, []).extend(labels)
        elif head == "d":
            if len(tokens) < 3 or tokens[2] != "=":
                raise ParseError(line_no, "differential line is 'd LABEL = expr'")
            d_lines.append((line_no, tokens[1], line.split("=", 1)[1]))
        else:
            if len(tokens) < 3 or tokens[2] != "=":
                raise ParseError(line_no, f"unknown directive {head!r}")
            act_lines.append((line_no, head, tokens[1], line.split("=", 1)[1]))
    if algebra is None:
        raise ParseError(0, "missing algebra line")
    if window is None:
        degs = sorted(components) or [0]
        window = (degs[0], degs[-1])
    for deg, labs in components.items():
        for i, lab in enumerate(labs):
            label_index[lab] = i
    dims = {deg: len(labs) for deg, labs in components.items()}
    labels = {deg: list(labs) for deg, labs in components.items()}

    def resolve(line_no, lab):
        if lab not in label_degree:
            raise ParseError(line_no, f"unknown label {lab!r}")
        return label_degree[lab], label_index[lab]

    diff_blocks = {}
    for line_no, src, expr in d_lines:
        sdeg, sidx = resolve(line_no, src)
        combo = parse_combination(expr, line_no)
        for tgt, coef in combo.items():
            tdeg, tidx = resolve(line_no, tgt)
            if tdeg != sdeg - 1:
                raise ParseError(
                    line_no, f"d({src}) hits {tgt} of degree {tdeg}, want {sdeg - 1}")
            blk = diff_blocks.setdefault(
                sdeg, zeros(dims.get(sdeg - 1, 0), dims[sdeg]))
            blk[tidx][sidx] += coef
    gen_names = (list(algebra.varnames) if isinstance(algebra, (PolyAlgebra, ExtAlgebra))
                 else [])
    gen_degrees = algebra.generator_degrees()
    act_blocks = [dict() for _ in gen_names]
    for line_no, gen, src, expr in act_lines:
        if gen not in gen_names:
            raise ParseError(line_no, f"unknown generator {gen!r}")
        gi = gen_names.index(gen)
        sdeg, sidx = resolve(line_no, src)
        combo = parse_combination(expr, line_no)
        for tgt, coef in combo.items():
            tdeg, tidx = resolve(line_no, tgt)
            if tdeg != sdeg + gen_degrees[gi]:
                raise ParseError(
                    line_no,
                    f"{gen}({src}) hits {tgt} of degree {tdeg}, "
                    f"want {sdeg + gen_degrees[gi]}")
            blk = act_blocks[gi].setdefault(
                sdeg, zeros(dims.get(tdeg, 0), dims[sdeg]))
            blk[tidx][sidx] += coef
    lo, hi = window
    try:
        return dg_module(algebra, dims, diff_blocks, act_blocks, lo, hi,
                         complete_below, complete_above,
                         labels=labels, name=mod_name or "module")
    except InvariantViolation:
        raise


def parse_module_file(path, name: str = "") -> DGModule:
    with open(path, encoding="utf-8") as fh:
        return parse_module(fh.read(), name=name or str(path))


_SAFE_LABEL = re.compile(r"[A-Za-z_][A-Za-z_0-9.^]*$")


def _safe_labels(M: DGModule) -> dict:
    """Grammar-safe unique labels per degree, renaming only when needed."""
    out = {}
    seen = set()
    for deg in sorted(M.space.dims):
        labs = []
        for i in range(M.dim(deg)):
            lab = M.space.label(deg, i)
            cand = lab if _SAFE_LABEL.match(lab) else re.sub(
                r"[^A-Za-z_0-9.^]", ".", lab).strip(".") or "e"
            if not _SAFE_LABEL.match(cand):
                cand = "e" + cand
            base = cand
            k = 2
            while cand in seen:
                cand = f"{base}.{k}"
                k += 1
            seen.add(cand)
            labs.append(cand)
        out[deg] = labs
    return out


def print_module(M: DGModule) -> str:
    """Canonical serialization: sorted degrees, grammar-safe labels."""
    safe = _safe_labels(M)
    lines = []
    if M.name and re.match(r"\S+$", M.name):
        lines.append(f"module {M.name}")
    if isinstance(M.algebra, PolyAlgebra):
        kind = "poly"
    else:
        kind = "ext"
    co = ",".join(str(d) for d in M.algebra.group.codegrees)
    lines.append(f"algebra {kind} {co}".rstrip())
    lines.append(f"window {M.lo} {M.hi}")
    if M.complete_below and M.complete_above:
        lines.append("complete both")
    elif M.complete_below:
        lines.append("complete below")
    elif M.complete_above:
        lines.append("complete above")
    for deg in sorted(M.space.dims):
        lines.append("component " + str(deg) + " " + " ".join(safe[deg]))

    def combo(vec, deg):
        terms = []
        for i, c in enumerate(vec):
            if not c:
                continue
            lab = safe[deg][i]
            if c == 1:
                terms.append(f"+ {lab}")
            elif c == -1:
                terms.append(f"- {lab}")
            elif c > 0:
                terms.append(f"+ {c}*{lab}")
            else:
                terms.append(f"- {-c}*{lab}")
        if not terms:
            return "0"
        first = terms[0]
        out = first[2:] if first.startswith("+ ") else "-" + first[2:]
        return out + (" " + " ".join(terms[1:]) if len(terms) > 1 else "")

    for deg in sorted(M.space.dims):
        blk = M.diff.block(deg)
        for col in range(M.dim(deg)):
            vec = [blk[row][col] for row in range(M.dim(deg - 1))]
            if any(vec):
                lines.append(f"d {safe[deg][col]} = {combo(vec, deg - 1)}")
    gen_names = M.algebra.varnames
    gen_degrees = M.generator_degrees()
    for gi, gen in enumerate(gen_names):
        for deg in sorted(M.space.dims):
            blk = M.actions[gi].block(deg)
            tdeg = deg + gen_degrees[gi]
            for col in range(M.dim(deg)):
                vec = [blk[row][col] for row in range(M.dim(tdeg))]
                if any(vec):
                    lines.append(f"{gen} {safe[deg][col]} = {combo(vec, tdeg)}")
    return "\n".join(lines) + "\n"
