"""Structured results for the verification suites."""

import json
from dataclasses import asdict, dataclass, field

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass
class CaseResult:
    case_id: str
    tag: str                  # relation / pattern / check-mode annotation
    status: str               # pass | fail | unknown
    witness: str = None       # residual normal form on failure, or the
                              # accepted homotopy witness on a pass
    steps: int = 0            # rewrite-rule applications consumed
    millis: int = 0


@dataclass
class Report:
    suite: str
    config_name: str
    seed: int = 0
    results: list = field(default_factory=list)

    def add(self, result):
        self.results.append(result)

    def counts(self):
        out = {PASS: 0, FAIL: 0, UNKNOWN: 0}
        for r in self.results:
            out[r.status] += 1
        return out

    @property
    def ok(self):
        return self.counts()[FAIL] == 0 and self.counts()[UNKNOWN] == 0

    def exit_code(self):
        c = self.counts()
        if c[FAIL]:
            return 1
        if c[UNKNOWN]:
            return 2
        return 0

    def sorted_results(self):
        return sorted(self.results, key=lambda r: r.case_id)

    def to_dict(self, with_timings=True):
        cases = []
        for r in self.sorted_results():
            d = asdict(r)
            if not with_timings:
                d.pop("millis")
            if d.get("witness") is None:
                d.pop("witness", None)
            cases.append(d)
        return {
            "suite": self.suite,
            "config": self.config_name,
            "seed": self.seed,
            "counts": self.counts(),
            "cases": cases,
        }

    def to_json(self, with_timings=True):
        return json.dumps(self.to_dict(with_timings=with_timings),
                          indent=2, sort_keys=True)

    def canonical(self):
        """Byte-stable serialization: identical for identical runs."""
        return self.to_json(with_timings=False)

    def summary(self):
        c = self.counts()
        return (f"{self.suite}: {c[PASS]} passed, {c[FAIL]} failed, "
                f"{c[UNKNOWN]} unknown ({len(self.results)} cases)")
