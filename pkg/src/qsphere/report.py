"""Verification reports and canonical JSON serialization.

Reports are deterministic: details are sorted by item label, checks by check
name, keys alphabetically, and floats printed with 17 significant digits, so
identical inputs produce byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Detail:
    item: str
    residual: float
    threshold: float

    def to_obj(self):
        return {"item": self.item, "residual": float(self.residual),
                "threshold": float(self.threshold)}


@dataclass
class VerificationReport:
    check: str
    params: dict
    details: list = field(default_factory=list)

    def add(self, item: str, residual: float, threshold: float):
        self.details.append(Detail(item, float(residual), float(threshold)))

    @property
    def status(self) -> str:
        ok = all(d.residual <= d.threshold for d in self.details)
        return "pass" if ok else "fail"

    @property
    def max_residual(self) -> float:
        return max((d.residual for d in self.details), default=0.0)

    def to_obj(self):
        return {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "max_residual": self.max_residual,
            "details": [d.to_obj()
                        for d in sorted(self.details, key=lambda d: d.item)],
        }

    def summary_lines(self):
        yield f"[{self.status.upper():4s}] {self.check}  " \
              f"(max residual {_fmt_float(self.max_residual)})"
        for d in sorted(self.details, key=lambda d: d.item):
            mark = "ok " if d.residual <= d.threshold else "BAD"
            yield (f"    {mark} {d.item}: {_fmt_float(d.residual)}"
                   f" <= {_fmt_float(d.threshold)}")


def _fmt_float(x: float) -> str:
    if x != x:
        raise ValueError("reports must not contain NaN")
    return f"{float(x):.17g}"


def _canon(obj) -> str:
    if isinstance(obj, dict):
        inner = ",".join(f"{_canon(str(k))}:{_canon(v)}"
                         for k, v in sorted(obj.items()))
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_canon(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def canonical_json(reports, version: str) -> str:
    checks = [r.to_obj() for r in sorted(reports, key=lambda r: r.check)]
    return _canon({"version": version, "checks": checks})
