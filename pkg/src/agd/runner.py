"""Execute the tasks of a model and collect their reports."""

from __future__ import annotations

import fnmatch
import time
from dataclasses import dataclass, field
from pathlib import Path

from .adjustment import (
    AdjustmentData,
    check_basic_flatness_of_H,
    check_mym,
    classify,
    nabla_zeta,
    reconstruct_adjustment,
    strict_bla_bracket,
    verify_decomposition,
)
from .algebroid import verify_algebroid, verify_morphism
from .dsl import Model, Task, dump_algebroid
from .extension import ExtensionResult, build_extension, mackenzie_extension
from .geometry import VectorField
from .pullback import Submersion, pullback_adjustment, verify_projection
from .report import Check, Report, Status, VerificationError

__all__ = ["TaskResult", "RunReport", "run", "adjustment_of", "export_extension", "REPORT_SCHEMA"]


@dataclass
class TaskResult:
    task: Task
    report: Report
    wall_time: float
    artifact: object = None

    @property
    def status(self) -> Status:
        return self.report.status

    def to_dict(self) -> dict:
        return {
            "task": self.task.name,
            "kind": self.task.kind,
            "args": list(self.task.args),
            "status": self.status.value,
            "wall_time": round(self.wall_time, 6),
            "checks": [c.to_dict() for c in self.report.checks],
        }


@dataclass
class RunReport:
    source: str
    pattern: str
    results: list[TaskResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.report.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def __getitem__(self, name: str) -> TaskResult:
        for r in self.results:
            if r.task.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "filter": self.pattern,
            "status": "pass" if self.passed else "fail",
            "warnings": list(self.warnings),
            "tasks": [r.to_dict() for r in self.results],
        }

    def format(self) -> str:
        lines = [f"== {self.source}"]
        for w in self.warnings:
            lines.append(f"warning: {w}")
        for r in self.results:
            body = r.report.format().splitlines()
            lines.append(f"[{r.status.value.upper()}] task {r.task.name} ({r.task.kind}, {r.wall_time:.2f}s)")
            lines.extend(body[1:])
        lines.append(f"== {sum(r.report.passed for r in self.results)}/{len(self.results)} tasks passed")
        return "\n".join(lines)


_CHECK = {
    "type": "object",
    "required": ["check", "status", "evaluated", "residuals", "note"],
    "properties": {
        "check": {"type": "string"},
        "status": {"enum": ["pass", "fail", "skipped"]},
        "evaluated": {"type": "integer", "minimum": 0},
        "residuals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["at", "value"],
                "properties": {"at": {"type": "string"}, "value": {"type": "string"}},
                "additionalProperties": False,
            },
        },
        "note": {"type": "string"},
    },
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "agd check report",
    "type": "object",
    "required": ["source", "filter", "status", "warnings", "tasks"],
    "properties": {
        "source": {"type": "string"},
        "filter": {"type": "string"},
        "status": {"enum": ["pass", "fail"]},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "tasks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["task", "kind", "args", "status", "wall_time", "checks"],
                "properties": {
                    "task": {"type": "string"},
                    "kind": {"type": "string"},
                    "args": {"type": "array", "items": {"type": "string"}},
                    "status": {"enum": ["pass", "fail"]},
                    "wall_time": {"type": "number", "minimum": 0},
                    "checks": {"type": "array", "items": _CHECK},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def adjustment_of(model: Model, morphism: str, connection: str, form2: str) -> AdjustmentData:
    """Assemble unclassified adjustment data from declared names."""
    K = model.morphisms[morphism]
    nabla = model.connections[connection]
    zeta = model.forms[form2]
    return AdjustmentData(model.algebroid_of(K.source), model.algebroid_of(K.target), K, nabla, zeta)


def _refused(name: str, err: VerificationError) -> Report:
    rep = Report(name)
    if err.report is not None:
        rep.extend(err.report)
    if rep.passed:
        rep.add(Check("error", Status.FAIL, note=str(err).splitlines()[0]))
    return rep


def _classify_task(model: Model, task: Task):
    d, rep = classify(adjustment_of(model, *task.args))
    rep.subject = task.name
    if not d.is_strict:
        return rep, d
    try:
        H = strict_bla_bracket(d)
    except VerificationError as e:
        rep.extend(_refused("H", e), "H.")
        return rep, d
    rep.add(Check("H.extracted", Status.PASS,
                  note="; ".join(f"[{a}, {b}] = {H.structure(a, b)}"
                                 for i, a in enumerate(H.bundle.frame) for b in H.bundle.frame[i + 1:])))
    rep.extend(verify_decomposition(d, H))
    nz = nabla_zeta(d)
    rep.extend(check_mym(nz, H, d.zeta, d.F_alg, d.K), "mym.")
    rep.extend(check_basic_flatness_of_H(d, H))
    try:
        back = reconstruct_adjustment(nz, H, d.zeta, d.K, d.E_alg, d.F_alg)
        same = back.nabla.same_table(d.nabla)
        rep.add(Check("round_trip", Status.PASS if same else Status.FAIL,
                      note="" if same else "reconstructed connection differs"))
    except VerificationError as e:
        rep.extend(_refused("round_trip", e), "round_trip.")
    return rep, d


def _extension_report(name: str, res: ExtensionResult, prefix: str = "") -> Report:
    rep = Report(name)
    rep.extend(res.construction, prefix)
    rep.extend(res.report, prefix + "sandglass.")
    return rep


def _run_task(model: Model, task: Task):
    k, a = task.kind, task.args
    if k == "verify_algebroid":
        rep = verify_algebroid(model.algebroids[a[0]])
        rep.subject = task.name
        return rep, None
    if k == "verify_morphism":
        K = model.morphisms[a[0]]
        rep = verify_morphism(K, model.algebroid_of(K.source), model.algebroid_of(K.target))
        rep.subject = task.name
        return rep, None
    if k == "classify":
        return _classify_task(model, task)
    if k == "extension":
        try:
            res = build_extension(adjustment_of(model, *a), task.name)
        except VerificationError as e:
            return _refused(task.name, e), None
        return _extension_report(task.name, res), res
    if k == "mackenzie":
        nabla, zeta = model.connections[a[0]], model.forms[a[1]]
        try:
            res = mackenzie_extension(nabla.F, model.algebroid_of(nabla.E), nabla, zeta, task.name)
        except VerificationError as e:
            return _refused(task.name, e), None
        return _extension_report(task.name, res), res
    if k == "pullback":
        spec = model.pullbacks[a[0]]
        d = adjustment_of(model, spec.morphism, spec.connection, spec.form2)
        phi = Submersion.extend(model.patch, spec.fibre)
        fields = None
        if spec.actions is not None:
            fields = [VectorField(phi.total, spec.actions.get(e, [0] * phi.total.dimension))
                      for e in d.E_alg.bundle.frame]
        try:
            d1, pb = pullback_adjustment(d, phi, fields)
            res = build_extension(d1, task.name)
        except VerificationError as e:
            return _refused(task.name, e), None
        rep = Report(task.name)
        rep.extend(verify_projection(pb), "projection.")
        _, cls = classify(AdjustmentData(d1.E_alg, d1.F_alg, d1.K, d1.nabla, d1.zeta))
        rep.extend(cls)
        rep.extend(_extension_report(task.name, res), "extension.")
        return rep, res
    raise ValueError(f"unknown task kind {k!r}")


def run(model: Model, pattern: str = "*") -> RunReport:
    """Run the tasks whose names match the glob ``pattern``, in declaration order."""
    out = RunReport(model.source, pattern)
    chosen = [t for t in model.tasks if fnmatch.fnmatchcase(t.name, pattern)]
    if not chosen:
        out.warnings.append(f"no task matches {pattern!r}")
    for t in chosen:
        start = time.perf_counter()
        rep, artifact = _run_task(model, t)
        out.results.append(TaskResult(t, rep, time.perf_counter() - start, artifact))
    return out


def export_extension(model: Model, name: str, out=None) -> str:
    """Build the extension of task ``name`` and serialise it as a model file.

    ``name`` must be an ``extension``, ``mackenzie`` or ``pullback`` task.
    Returns the text; when ``out`` is given it is also written there.
    Raises ``KeyError`` for an unknown task and :class:`VerificationError`
    if the task does not produce a verified extension.
    """
    try:
        task = next(t for t in model.tasks if t.name == name)
    except StopIteration:
        raise KeyError(f"no task named {name!r}") from None
    if task.kind not in ("extension", "mackenzie", "pullback"):
        raise KeyError(f"task {name!r} is a {task.kind} task, not an extension")
    rep, res = _run_task(model, task)
    if res is None or not rep.passed:
        raise VerificationError(f"extension {name!r} was not built and verified", rep)
    text = dump_algebroid(res.A, name, header=f"extension {name} exported from {model.source}")
    if out is not None:
        Path(out).write_text(text)
    return text
