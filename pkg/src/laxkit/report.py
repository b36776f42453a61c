"""Law reports: per-law pass/fail records with reproducible witnesses."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable


class StructureError(ValueError):
    """Malformed input (non-total table, boundary mismatch, ...)."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what: str, required: int, cap: int):
        super().__init__(f"{what}: {required} candidates exceeds cap {cap}")
        self.what = what
        self.required = required
        self.cap = cap


DEFAULT_CAP = 2 ** 20


@dataclass
class LawResult:
    law: str
    passed: bool
    cases: int = 0
    witness: str = ""
    note: str = ""
    duration: float = 0.0


@dataclass
class LawReport:
    suite: str
    results: list[LawResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[LawResult]:
        return [r for r in self.results if not r.passed]

    def failed_laws(self) -> set[str]:
        return {r.law for r in self.results if not r.passed}

    def __getitem__(self, law: str) -> LawResult:
        for r in self.results:
            if r.law == law:
                return r
        raise KeyError(law)

    def __contains__(self, law: str) -> bool:
        return any(r.law == law for r in self.results)

    def check(
        self,
        law: str,
        instances: Iterable,
        predicate: Callable[..., bool],
        describe: Callable[..., str] = repr,
        note: str = "",
    ) -> LawResult:
        """Evaluate ``predicate`` on every instance, stopping at the first failure.

        Instances that are tuples are splatted into ``predicate`` and ``describe``.
        """
        start = time.perf_counter()
        cases = 0
        witness = ""
        ok = True
        for inst in instances:
            cases += 1
            args = inst if isinstance(inst, tuple) else (inst,)
            if not predicate(*args):
                ok = False
                witness = describe(*args)
                break
        res = LawResult(law, ok, cases, witness, note, time.perf_counter() - start)
        self.results.append(res)
        return res

    def record(self, law: str, passed: bool, witness: str = "", cases: int = 1, note: str = "") -> LawResult:
        res = LawResult(law, passed, cases, "" if passed else witness, note)
        self.results.append(res)
        return res

    def extend(self, other: "LawReport", prefix: str = "") -> "LawReport":
        for r in other.results:
            self.results.append(LawResult(prefix + r.law, r.passed, r.cases, r.witness, r.note, r.duration))
        return self

    def lines(self, timings: bool = False) -> list[str]:
        """Machine-readable records: suite, law, status, witness, cases, duration.

        Duration is ``-`` unless ``timings`` is set, so reports stay byte-stable.
        """
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            dur = f"{r.duration:.4f}" if timings else "-"
            witness = r.witness.replace("\t", " ").replace("\n", " | ")
            note = r.note.replace("\t", " ")
            out.append("\t".join([self.suite, r.law, status, witness, str(r.cases), dur, note]).rstrip("\t"))
        return out

    def text(self) -> str:
        out = [f"== {self.suite} =="]
        for r in self.results:
            status = "ok  " if r.passed else "FAIL"
            line = f"  [{status}] {r.law} ({r.cases} cases)"
            if r.note:
                line += f"  -- {r.note}"
            out.append(line)
            if r.witness:
                out.append("         witness: " + r.witness)
        return "\n".join(out)

    def __str__(self) -> str:
        return self.text()
