"""Line-oriented model files.

A model file declares one patch, then named objects in any order::

    patch x1 x2 x3

    algebroid TM tangent
    algebroid E
      frame e1 e2 e3
      anchor e1 = [0, x3, -x2]
      bracket e1 e2 = [0, 0, 1]
    end

    morphism K : E -> TM anchor          # or: zero, or a block of `map` lines
    connection nabla : TM on E flat      # or a block of `gamma X e = [...]` lines
    form2 zeta : TM -> E zero            # or a block of `value X Y = [...]` lines

    pullback P
      adjustment K nabla zeta
      fibre x4
      action e1 = [0, x3, -x2, 0]        # optional; default is the horizontal lift
    end

    task check_E : verify_algebroid E
    task adj : classify K nabla zeta

Omitted entries are zero. ``#`` starts a comment. Errors carry the line and
column where they were detected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .algebroid import LieAlgebroid, tangent_algebroid
from .connection import ETwoFormOnF, FConnection
from .geometry import BundleMorphism, ShapeError, VectorBundle
from .symexpr import CoordinatePatch, ExprError, ParseError

__all__ = [
    "DSLError",
    "Task",
    "PullbackSpec",
    "Model",
    "TASK_KINDS",
    "load_model",
    "loads_model",
    "dump_algebroid",
]

# kind -> names of the arguments it takes
TASK_KINDS = {
    "verify_algebroid": ("algebroid",),
    "verify_morphism": ("morphism",),
    "classify": ("morphism", "connection", "form2"),
    "extension": ("morphism", "connection", "form2"),
    "mackenzie": ("connection", "form2"),
    "pullback": ("pullback",),
}


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<string>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:{line}:{column}: " if line else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class Task:
    name: str
    kind: str
    args: tuple[str, ...]
    line: int = 0


@dataclass
class PullbackSpec:
    name: str
    morphism: str
    connection: str
    form2: str
    fibre: tuple[str, ...]
    actions: dict[str, tuple] | None
    line: int = 0


@dataclass
class Model:
    patch: CoordinatePatch | None = None
    algebroids: dict[str, LieAlgebroid] = field(default_factory=dict)
    morphisms: dict[str, BundleMorphism] = field(default_factory=dict)
    connections: dict[str, FConnection] = field(default_factory=dict)
    forms: dict[str, ETwoFormOnF] = field(default_factory=dict)
    pullbacks: dict[str, PullbackSpec] = field(default_factory=dict)
    tasks: list[Task] = field(default_factory=list)
    source: str = "<string>"

    def algebroid_of(self, bundle: VectorBundle) -> LieAlgebroid:
        for a in self.algebroids.values():
            if a.bundle == bundle:
                return a
        raise KeyError(bundle.name)

    def lookup(self, kind: str, name: str):
        table = {"algebroid": self.algebroids, "morphism": self.morphisms,
                 "connection": self.connections, "form2": self.forms,
                 "pullback": self.pullbacks}[kind]
        return table[name]


# -- lexical helpers ---------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_IDENT = re.compile(_NAME + r"\Z")


@dataclass
class _Line:
    no: int
    text: str      # comment stripped, right-stripped
    indent: int    # column of first non-blank character (1-based)

    @property
    def words(self) -> list[str]:
        return self.text.split()

    def col(self, token: str, start: int = 0) -> int:
        i = self.text.find(token, start)
        return (i if i >= 0 else 0) + 1


@dataclass
class _Decl:
    kind: str
    header: _Line
    body: list[_Line]


class _Loader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = []
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].rstrip()
            if body.strip():
                self.lines.append(_Line(no, body, len(body) - len(body.lstrip()) + 1))

    def err(self, msg: str, line: _Line | None = None, col: int = 0) -> DSLError:
        if line is None:
            return DSLError(msg, 0, 0, self.source)
        return DSLError(msg, line.no, col or line.indent, self.source)

    # -- block structure ----------------------------------------------------
    def blocks(self) -> list[_Decl]:
        out = []
        i = 0
        n = len(self.lines)
        while i < n:
            ln = self.lines[i]
            w = ln.words
            kind = w[0]
            if kind == "end":
                raise self.err("'end' without an open block", ln)
            if kind not in ("patch", "algebroid", "morphism", "connection", "form2", "pullback", "task"):
                raise self.err(f"unknown declaration {kind!r}", ln)
            if self._is_block(kind, w):
                body = []
                i += 1
                while i < n and self.lines[i].words[0] != "end":
                    nxt = self.lines[i]
                    if nxt.words[0] in ("patch", "algebroid", "morphism", "connection", "form2",
                                        "pullback", "task"):
                        raise self.err(f"block '{' '.join(w[:2])}' opened on line {ln.no} is missing 'end'", nxt)
                    body.append(nxt)
                    i += 1
                if i == n:
                    raise self.err(f"block '{' '.join(w[:2])}' is missing 'end'", ln)
                out.append(_Decl(kind, ln, body))
            else:
                out.append(_Decl(kind, ln, []))
            i += 1
        return out

    @staticmethod
    def _is_block(kind: str, w: list[str]) -> bool:
        if kind == "algebroid":
            return len(w) == 2
        if kind == "pullback":
            return True
        if kind in ("morphism", "connection", "form2"):
            return len(w) == 6
        return False

    # -- values ----------------------------------------------------------------
    def name(self, word: str, ln: _Line) -> str:
        if not _IDENT.match(word):
            raise self.err(f"invalid name {word!r}", ln, ln.col(word))
        return word

    def vector(self, ln: _Line, patch: CoordinatePatch, size: int, what: str) -> list:
        """Parse the ``[e1, e2, ...]`` on the right of ``=`` in ``ln``."""
        eq = ln.text.find("=")
        if eq < 0:
            raise self.err(f"expected '= [...]' in {what}", ln)
        rest = ln.text[eq + 1:]
        lb = rest.find("[")
        rb = rest.rfind("]")
        if lb < 0 or rb < lb or rest[rb + 1:].strip() or rest[:lb].strip():
            raise self.err(f"{what}: value must be a bracketed list", ln, eq + 2)
        start = eq + 1 + lb + 1
        inner = rest[lb + 1:rb]
        if not inner.strip():
            parts = []
        else:
            parts = inner.split(",")
        if len(parts) != size:
            raise self.err(f"{what} needs {size} entries, got {len(parts)}", ln, start + 1)
        out = []
        offset = start
        for p in parts:
            try:
                out.append(patch.parse(p))
            except ParseError as e:
                raise self.err(f"{what}: {e.message}", ln, offset + e.position + 1) from None
            offset += len(p) + 1
        return out

    def lhs(self, ln: _Line, keyword: str, count: int) -> list[str]:
        head = ln.text.split("=", 1)[0].split()
        if not head or head[0] != keyword or len(head) != count + 1:
            raise self.err(f"expected '{keyword} ' followed by {count} name(s) and '= [...]'", ln)
        return head[1:]


def loads_model(text: str, source: str = "<string>") -> Model:
    """Load a model from a string (see the module docstring for the format)."""
    L = _Loader(text, source)
    decls = L.blocks()
    model = Model(source=source)
    declared: dict[str, tuple[str, _Line]] = {}

    def declare(kind: str, name: str, ln: _Line):
        L.name(name, ln)
        if name in declared:
            prev = declared[name][1]
            raise L.err(f"{name!r} already declared on line {prev.no}", ln, ln.col(name))
        declared[name] = (kind, ln)

    patches = [d for d in decls if d.kind == "patch"]
    if len(patches) > 1:
        raise L.err("only one patch may be declared", patches[1].header)
    if patches:
        ln = patches[0].header
        names = ln.words[1:]
        if not names:
            raise L.err("patch needs at least one coordinate", ln)
        try:
            model.patch = CoordinatePatch(names)
        except ExprError as e:
            raise L.err(str(e), ln) from None
    elif decls:
        raise L.err("missing 'patch' declaration", decls[0].header)
    P = model.patch

    # algebroids first: everything else refers to them
    for d in decls:
        if d.kind == "algebroid":
            w = d.header.words
            declare("algebroid", w[1], d.header)
            if len(w) == 3:
                if w[2] != "tangent":
                    raise L.err(f"unknown algebroid shorthand {w[2]!r}; use 'tangent' or a block",
                                d.header, d.header.col(w[2]))
                A = tangent_algebroid(P)
                model.algebroids[w[1]] = LieAlgebroid(A.bundle, A.anchor, A.table, w[1])
            elif len(w) == 2:
                model.algebroids[w[1]] = _algebroid_block(L, P, w[1], d)
            else:
                raise L.err("expected 'algebroid NAME' or 'algebroid NAME tangent'", d.header)

    def algebroid(name: str, ln: _Line) -> LieAlgebroid:
        if name not in model.algebroids:
            raise L.err(f"unresolved algebroid {name!r}", ln, ln.col(name))
        return model.algebroids[name]

    arrows = {"morphism": "->", "connection": "on", "form2": "->"}
    usage = {"morphism": "morphism NAME : SOURCE -> TARGET [anchor|zero]",
             "connection": "connection NAME : F on E [flat]",
             "form2": "form2 NAME : F -> E [zero]"}
    builders = {"morphism": (_morphism, model.morphisms),
                "connection": (_connection, model.connections),
                "form2": (_form, model.forms)}
    for d in decls:
        if d.kind not in arrows:
            continue
        w, ln = d.header.words, d.header
        if len(w) not in (6, 7) or w[2] != ":" or w[4] != arrows[d.kind]:
            raise L.err(f"expected '{usage[d.kind]}'", ln)
        first, second = algebroid(w[3], ln), algebroid(w[5], ln)
        declare(d.kind, w[1], ln)
        build, store = builders[d.kind]
        try:
            store[w[1]] = build(L, P, d, first, second)
        except ShapeError as e:
            raise L.err(f"{d.kind} {w[1]}: {e}", ln) from None
    for d in decls:
        if d.kind == "pullback":
            w = d.header.words
            if len(w) != 2:
                raise L.err("expected 'pullback NAME' followed by a block", d.header)
            declare("pullback", w[1], d.header)
            model.pullbacks[w[1]] = _pullback(L, model, w[1], d)
    task_names = set()
    for d in decls:
        if d.kind == "task":
            model.tasks.append(_task(L, model, d.header, task_names))
    return model


def load_model(path: Union[str, Path]) -> Model:
    """Load a model file; raises :class:`DSLError` with file, line and column."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise DSLError(f"cannot read model: {e.strerror}", source=str(p)) from None
    return loads_model(text, str(p))


# -- declarations ------------------------------------------------------------

def _algebroid_block(L: _Loader, P: CoordinatePatch, name: str, d: _Decl) -> LieAlgebroid:
    frame = None
    anchor: dict[str, list] = {}
    brackets: dict[tuple[str, str], list] = {}
    pending = []
    for ln in d.body:
        w = ln.words
        if w[0] == "frame":
            if frame is not None:
                raise L.err("frame declared twice", ln)
            frame = tuple(L.name(x, ln) for x in w[1:])
            if len(set(frame)) != len(frame):
                raise L.err(f"frame names of {name} must be distinct", ln)
        elif w[0] in ("anchor", "bracket"):
            pending.append(ln)
        else:
            raise L.err(f"unexpected {w[0]!r} in algebroid block (use frame, anchor, bracket)", ln)
    if frame is None:
        raise L.err(f"algebroid {name} needs a 'frame' line", d.header)
    bundle = VectorBundle(P, frame, name)

    def frame_index(x: str, ln: _Line) -> str:
        if x not in frame:
            raise L.err(f"{x!r} is not in the frame of {name}", ln, ln.col(x))
        return x

    for ln in pending:
        if ln.words[0] == "anchor":
            (a,) = L.lhs(ln, "anchor", 1)
            anchor[frame_index(a, ln)] = L.vector(ln, P, P.dimension, f"anchor of {a}")
        else:
            a, b = L.lhs(ln, "bracket", 2)
            frame_index(a, ln)
            frame_index(b, ln)
            if a == b:
                raise L.err(f"bracket {a} {a} is zero by antisymmetry", ln, ln.col(b, ln.col(a)))
            if (b, a) in brackets:
                raise L.err(f"bracket {a} {b} already given as {b} {a}", ln)
            brackets[(a, b)] = L.vector(ln, P, len(frame), f"bracket {a} {b}")
    rows = [anchor.get(f, [0] * P.dimension) for f in frame]
    return LieAlgebroid(bundle, rows, brackets, name)


def _morphism(L, P, d, src: LieAlgebroid, tgt: LieAlgebroid) -> BundleMorphism:
    ln = d.header
    name = ln.words[1]
    if len(ln.words) == 7:
        mode = ln.words[6]
        if mode == "zero":
            if d.body:
                raise L.err("'zero' morphism takes no block", ln)
            return BundleMorphism.zero(src.bundle, tgt.bundle, name)
        if mode == "anchor":
            if not tgt.bundle.is_tangent:
                raise L.err(f"'anchor' needs a tangent target, {tgt.name} is not", ln, ln.col("anchor"))
            return BundleMorphism.from_images(src.bundle, tgt.bundle, [r.components for r in src.anchor], name)
        raise L.err(f"unknown morphism shorthand {mode!r}; use anchor, zero or a block", ln, ln.col(mode))
    images = {}
    for b in d.body:
        (a,) = L.lhs(b, "map", 1)
        if a not in src.bundle.frame:
            raise L.err(f"{a!r} is not in the frame of {src.name}", b, b.col(a))
        images[a] = L.vector(b, P, tgt.rank, f"map {a}")
    return BundleMorphism.from_images(src.bundle, tgt.bundle,
                                      [images.get(a, [0] * tgt.rank) for a in src.bundle.frame], name)


def _connection(L, P, d, F: LieAlgebroid, E: LieAlgebroid) -> FConnection:
    ln = d.header
    name = ln.words[1]
    if len(ln.words) == 7:
        if ln.words[6] != "flat":
            raise L.err(f"unknown connection shorthand {ln.words[6]!r}; use flat or a block", ln)
        return FConnection.flat(F, E.bundle, name)
    table = {}
    for b in d.body:
        x, a = L.lhs(b, "gamma", 2)
        if x not in F.bundle.frame:
            raise L.err(f"{x!r} is not in the frame of {F.name}", b, b.col(x))
        if a not in E.bundle.frame:
            raise L.err(f"{a!r} is not in the frame of {E.name}", b, b.col(a, b.col(x)))
        table[(x, a)] = L.vector(b, P, E.rank, f"gamma {x} {a}")
    return FConnection(F, E.bundle, table, name)


def _form(L, P, d, F: LieAlgebroid, E: LieAlgebroid) -> ETwoFormOnF:
    ln = d.header
    name = ln.words[1]
    if len(ln.words) == 7:
        if ln.words[6] != "zero":
            raise L.err(f"unknown form2 shorthand {ln.words[6]!r}; use zero or a block", ln)
        return ETwoFormOnF.zero(F.bundle, E.bundle, name)
    comps = {}
    for b in d.body:
        x, y = L.lhs(b, "value", 2)
        for v in (x, y):
            if v not in F.bundle.frame:
                raise L.err(f"{v!r} is not in the frame of {F.name}", b, b.col(v))
        if x == y:
            raise L.err("diagonal entries of a 2-form vanish", b, b.col(y, b.col(x)))
        if (y, x) in comps:
            raise L.err(f"value {x} {y} already given as {y} {x}", b)
        comps[(x, y)] = L.vector(b, P, E.rank, f"value {x} {y}")
    return ETwoFormOnF(F.bundle, E.bundle, comps, name)


def _pullback(L, model: Model, name: str, d: _Decl) -> PullbackSpec:
    adj = fibre = None
    action_lines = []
    for ln in d.body:
        w = ln.words
        if w[0] == "adjustment":
            if len(w) != 4:
                raise L.err("expected 'adjustment MORPHISM CONNECTION FORM2'", ln)
            adj = w[1:]
            for kind, x in zip(("morphism", "connection", "form2"), adj):
                try:
                    model.lookup(kind, x)
                except KeyError:
                    raise L.err(f"unresolved {kind} {x!r} in pullback {name}", ln, ln.col(x)) from None
        elif w[0] == "fibre":
            if len(w) < 2:
                raise L.err("fibre needs at least one coordinate name", ln)
            fibre = tuple(w[1:])
        elif w[0] == "action":
            action_lines.append(ln)
        else:
            raise L.err(f"unexpected {w[0]!r} in pullback block (use adjustment, fibre, action)", ln)
    if adj is None or fibre is None:
        raise L.err(f"pullback {name} needs 'adjustment' and 'fibre' lines", d.header)
    try:
        N = CoordinatePatch(model.patch.names + fibre)
    except ExprError as e:
        raise L.err(f"pullback {name}: {e}", d.header) from None
    K = model.morphisms[adj[0]]
    actions = None
    if action_lines:
        actions = {}
        for ln in action_lines:
            (a,) = L.lhs(ln, "action", 1)
            if a not in K.source.frame:
                raise L.err(f"{a!r} is not in the frame of {K.source.name}", ln, ln.col(a))
            actions[a] = tuple(L.vector(ln, N, N.dimension, f"action {a}"))
    return PullbackSpec(name, adj[0], adj[1], adj[2], fibre, actions, d.header.no)


def _task(L, model: Model, ln: _Line, seen: set) -> Task:
    w = ln.words
    if len(w) < 4 or w[2] != ":":
        raise L.err("expected 'task NAME : KIND ARGS...'", ln)
    name, kind, args = w[1], w[3], tuple(w[4:])
    L.name(name, ln)
    if name in seen:
        raise L.err(f"task {name!r} declared twice", ln, ln.col(name))
    seen.add(name)
    if kind not in TASK_KINDS:
        raise L.err(f"task {name}: unknown kind {kind!r} (expected one of {', '.join(TASK_KINDS)})",
                    ln, ln.col(kind))
    want = TASK_KINDS[kind]
    if len(args) != len(want):
        raise L.err(f"task {name}: {kind} takes {len(want)} argument(s): {' '.join(want)}", ln)
    for k, a in zip(want, args):
        try:
            model.lookup(k, a)
        except KeyError:
            raise L.err(f"task {name} references undeclared {k} {a!r}", ln, ln.col(a, ln.col(kind))) from None
    return Task(name, kind, args, ln.no)


# -- export ------------------------------------------------------------------

def dump_algebroid(A: LieAlgebroid, name: str | None = None, with_patch: bool = True,
                   header: str = "") -> str:
    """Serialise an algebroid as a model file that loads back to the same structure."""
    name = name or A.name
    fr = A.bundle.frame
    out = []
    if header:
        out += [f"# {line}" for line in header.splitlines()]
    if with_patch:
        out.append("patch " + " ".join(A.patch.names))
        out.append("")
    out.append(f"algebroid {name}")
    out.append("  frame " + " ".join(fr))
    for f, row in zip(fr, A.anchor):
        if not row.is_zero:
            out.append(f"  anchor {f} = [{', '.join(str(c) for c in row.components)}]")
    for i in range(len(fr)):
        for j in range(i + 1, len(fr)):
            s = A.table[i][j]
            if not s.is_zero:
                out.append(f"  bracket {fr[i]} {fr[j]} = [{', '.join(str(c) for c in s.components)}]")
    out.append("end")
    out.append("")
    out.append(f"task verify_{name} : verify_algebroid {name}")
    return "\n".join(out) + "\n"
