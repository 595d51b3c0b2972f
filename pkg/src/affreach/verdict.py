"""Reachability verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    """Answer of a decision procedure.

    ``witness`` is an RLE word over the indices of the system that was
    decided; ``trace`` lists ``(case label, sub-instance summary)`` pairs in
    the order the cases fired.
    """

    reachable: bool
    witness: tuple | None = None
    trace: tuple = field(default_factory=tuple)

    def __bool__(self):
        return self.reachable
