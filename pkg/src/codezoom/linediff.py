"""Minimal line-based diffing.

`line_diff` produces the smallest edit script (fewest inserted plus deleted
lines) between two line lists, computed from a longest-common-subsequence
table. Ties between equally cheap alignments are broken by matching the
earliest lines first, which keeps the output stable. Consecutive changes
are grouped into runs; a run that both removes and inserts is what the edit
classifier upstream treats as a replacement.

Callers that need byte-exact reconstruction should split text with
``text.split("\\n")`` (not splitlines) so the presence of a final newline
survives the trip through a diff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class DiffRun:
    """One maximal group of changed lines.

    `old_start` is 1-based. For pure insertions (`old_lines` empty) it names
    the old line *before which* the new lines go; otherwise it is the first
    removed line. `new_start` is the position of the run in the new list.
    """

    old_start: int
    old_lines: tuple[str, ...]
    new_start: int
    new_lines: tuple[str, ...]

    @property
    def old_end(self) -> int:
        return self.old_start + len(self.old_lines) - 1

    @property
    def cost(self) -> int:
        return len(self.old_lines) + len(self.new_lines)


def line_diff(old: Sequence[str], new: Sequence[str]) -> list[DiffRun]:
    """Minimal edit script between two line lists, as grouped runs."""
    n, m = len(old), len(new)
    # lcs[i][j] = LCS length of old[i:], new[j:]
    lcs = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = lcs[i]
        below = lcs[i + 1]
        for j in range(m - 1, -1, -1):
            if old[i] == new[j]:
                row[j] = below[j + 1] + 1
            else:
                row[j] = below[j] if below[j] >= row[j + 1] else row[j + 1]

    runs: list[DiffRun] = []
    pending_old: list[str] = []
    pending_new: list[str] = []
    run_old_start = run_new_start = 0
    i = j = 0

    def flush():
        if pending_old or pending_new:
            runs.append(DiffRun(run_old_start, tuple(pending_old),
                                run_new_start, tuple(pending_new)))
            pending_old.clear()
            pending_new.clear()

    while i < n or j < m:
        if i < n and j < m and old[i] == new[j]:
            flush()
            i += 1
            j += 1
            continue
        if not pending_old and not pending_new:
            run_old_start = i + 1
            run_new_start = j + 1
        # prefer deleting first so a replacement lists old lines, then new
        if j >= m or (i < n and lcs[i + 1][j] >= lcs[i][j + 1]):
            pending_old.append(old[i])
            i += 1
        else:
            pending_new.append(new[j])
            j += 1
    flush()
    return runs


def apply_runs(old: Sequence[str], runs: Sequence[DiffRun]) -> list[str]:
    """Apply an edit script (sorted, non-overlapping) to the old lines."""
    out: list[str] = []
    cursor = 0  # 0-based index into old
    for run in sorted(runs, key=lambda r: r.old_start):
        keep_until = run.old_start - 1
        out.extend(old[cursor:keep_until])
        out.extend(run.new_lines)
        cursor = keep_until + len(run.old_lines)
    out.extend(old[cursor:])
    return out


def edit_cost(runs: Sequence[DiffRun]) -> int:
    return sum(run.cost for run in runs)


def unified(old: Sequence[str], runs: Sequence[DiffRun], *, context: int = 3,
            fromfile: str = "a", tofile: str = "b") -> str:
    """Render runs as a unified diff over the old lines."""
    if not runs:
        return ""
    ordered = sorted(runs, key=lambda r: r.old_start)
    groups: list[list[DiffRun]] = [[ordered[0]]]
    for run in ordered[1:]:
        prev = groups[-1][-1]
        if run.old_start - (prev.old_end + 1) <= 2 * context:
            groups[-1].append(run)
        else:
            groups.append([run])

    lines = [f"--- {fromfile}", f"+++ {tofile}"]
    offset = 0  # cumulative new-minus-old line delta before the group
    for group in groups:
        first, last = group[0], group[-1]
        ctx_start = max(1, first.old_start - context)
        ctx_end = min(len(old), last.old_end + context)
        old_len = ctx_end - ctx_start + 1
        new_len = old_len + sum(len(r.new_lines) - len(r.old_lines) for r in group)
        new_start = ctx_start + offset
        lines.append(f"@@ -{ctx_start},{old_len} +{new_start},{new_len} @@")
        cursor = ctx_start - 1
        for run in group:
            keep_until = run.old_start - 1
            lines.extend(" " + l for l in old[cursor:keep_until])
            lines.extend("-" + l for l in run.old_lines)
            lines.extend("+" + l for l in run.new_lines)
            cursor = keep_until + len(run.old_lines)
        lines.extend(" " + l for l in old[cursor:ctx_end])
        offset += sum(len(r.new_lines) - len(r.old_lines) for r in group)
    return "\n".join(lines) + "\n"
