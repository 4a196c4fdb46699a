"""Counters collected during evaluation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class EvalStats:
    iterations: dict[int, int] = field(default_factory=dict)
    subplan_output: dict[int, int] = field(default_factory=dict)
    arrangement_builds: dict[int, int] = field(default_factory=dict)
    peak_arrangement: dict[int, int] = field(default_factory=dict)
    rule_derived: dict[int, int] = field(default_factory=dict)
    join_output: int = 0

    def add_output(self, sid: int, n: int) -> None:
        self.subplan_output[sid] = self.subplan_output.get(sid, 0) + n

    def note_build(self, sid: int, size: int) -> None:
        self.arrangement_builds[sid] = self.arrangement_builds.get(sid, 0) + 1
        self.note_size(sid, size)

    def note_size(self, sid: int, size: int) -> None:
        self.peak_arrangement[sid] = max(self.peak_arrangement.get(sid, 0), size)

    @property
    def total_iterations(self) -> int:
        return sum(self.iterations.values())

    @property
    def total_builds(self) -> int:
        return sum(self.arrangement_builds.values())

    def records(self) -> list[dict]:
        out: list[dict] = []
        for idx in sorted(self.iterations):
            out.append({"kind": "stratum", "id": idx, "iterations": self.iterations[idx]})
        for sid in sorted(self.subplan_output.keys() | self.arrangement_builds.keys()):
            out.append(
                {
                    "kind": "subplan",
                    "id": sid,
                    "output_tuples": self.subplan_output.get(sid, 0),
                    "arrangement_builds": self.arrangement_builds.get(sid, 0),
                    "peak_arrangement": self.peak_arrangement.get(sid, 0),
                }
            )
        for rid in sorted(self.rule_derived):
            out.append({"kind": "rule", "id": rid, "derived": self.rule_derived[rid]})
        out.append({"kind": "total", "join_output": self.join_output, "iterations": self.total_iterations})
        return out

    def to_text(self) -> str:
        """One ``key=value`` record per line."""
        lines = []
        for rec in self.records():
            lines.append(" ".join(f"{k}={v}" for k, v in rec.items()))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.records(), indent=1)
