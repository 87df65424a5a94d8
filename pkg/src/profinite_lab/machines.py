"""Deterministic one-tape Turing machines over {0, 1, _} with exact step counts.

Machine text format (one or more machines per file)::

    # comment
    machine <name>
    status halts <K> | status loops | status unknown
    start <state>
    halt <state>
    trans <state> <symbol> -> <state> <symbol> <L|R>
    end
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Union

SYMBOLS = ("0", "1", "_")
BLANK = "_"


class MachineFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Halted:
    steps: int

    def __str__(self) -> str:
        return f"halted after {self.steps} steps"


@dataclass(frozen=True)
class RunningAfter:
    budget: int

    def __str__(self) -> str:
        return f"running after {self.budget} steps"


RunStatus = Union[Halted, RunningAfter]


@dataclass(frozen=True)
class DeclaredStatus:
    """Annotation carried by a machine file: ``halts`` (with ``steps``), ``loops`` or ``unknown``."""

    kind: str = "unknown"
    steps: int | None = None

    def __str__(self) -> str:
        return f"halts {self.steps}" if self.kind == "halts" else self.kind


@dataclass(frozen=True)
class MachineSpec:
    name: str
    start: str
    halt: str
    transitions: dict = field(hash=False, compare=True)
    declared: DeclaredStatus = DeclaredStatus()

    @property
    def states(self) -> frozenset[str]:
        found = {self.start, self.halt}
        for (state, _), (target, _, _) in self.transitions.items():
            found.update((state, target))
        return frozenset(found)

    def validate(self) -> None:
        """Check determinism-derived totality and dangling references."""
        by_state = defaultdict(set)
        for state, symbol in self.transitions:
            by_state[state].add(symbol)
        if self.halt in by_state:
            raise MachineFormatError(f"{self.name}: halt state {self.halt!r} has transitions")
        for state in sorted(self.states - {self.halt}):
            seen = by_state.get(state)
            if not seen:
                raise MachineFormatError(f"{self.name}: dangling state reference {state!r}")
            missing = [s for s in SYMBOLS if s not in seen]
            if missing:
                raise MachineFormatError(
                    f"{self.name}: state {state!r} has no transition for {', '.join(missing)}"
                )


def _parse_lines(lines: Iterable[tuple[int, str]]) -> Iterator[MachineSpec]:
    current = None
    for lineno, raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words = line.split()
        head = words[0]
        if head == "machine":
            if current is not None:
                raise MachineFormatError("missing 'end' before new machine", lineno)
            if len(words) != 2:
                raise MachineFormatError("expected 'machine <name>'", lineno)
            current = {"name": words[1], "trans": {}, "status": DeclaredStatus(), "line": lineno}
            continue
        if current is None:
            raise MachineFormatError(f"{head!r} outside a machine block", lineno)
        if head == "end":
            if len(words) != 1:
                raise MachineFormatError("unexpected text after 'end'", lineno)
            for key in ("start", "halt"):
                if key not in current:
                    raise MachineFormatError(f"machine {current['name']} has no {key} state", lineno)
            spec = MachineSpec(
                name=current["name"],
                start=current["start"],
                halt=current["halt"],
                transitions=current["trans"],
                declared=current["status"],
            )
            try:
                spec.validate()
            except MachineFormatError as exc:
                raise MachineFormatError(str(exc), lineno) from None
            yield spec
            current = None
        elif head in ("start", "halt"):
            if len(words) != 2:
                raise MachineFormatError(f"expected '{head} <state>'", lineno)
            current[head] = words[1]
        elif head == "status":
            if words[1:] == ["loops"]:
                current["status"] = DeclaredStatus("loops")
            elif words[1:] == ["unknown"]:
                current["status"] = DeclaredStatus("unknown")
            elif len(words) == 3 and words[1] == "halts" and words[2].isdigit():
                current["status"] = DeclaredStatus("halts", int(words[2]))
            else:
                raise MachineFormatError("expected 'status halts <K>|loops|unknown'", lineno)
        elif head == "trans":
            if len(words) != 7 or words[3] != "->":
                raise MachineFormatError(
                    "expected 'trans <state> <symbol> -> <state> <symbol> <L|R>'", lineno
                )
            _, state, read, _, target, write, move = words
            for sym in (read, write):
                if sym not in SYMBOLS:
                    raise MachineFormatError(f"unknown symbol {sym!r}", lineno)
            if move not in ("L", "R"):
                raise MachineFormatError(f"direction must be L or R, got {move!r}", lineno)
            if (state, read) in current["trans"]:
                raise MachineFormatError(
                    f"determinism violation: second transition for ({state}, {read})", lineno
                )
            current["trans"][(state, read)] = (target, write, move)
        else:
            raise MachineFormatError(f"unknown directive {head!r}", lineno)
    if current is not None:
        raise MachineFormatError(f"machine {current['name']} is missing 'end'", current["line"])


def parse_machines(text: str) -> list[MachineSpec]:
    return list(_parse_lines(enumerate(text.splitlines(), start=1)))


def parse_machine(text: str) -> MachineSpec:
    """Parse text holding exactly one machine."""
    machines = parse_machines(text)
    if len(machines) != 1:
        raise MachineFormatError(f"expected exactly one machine, found {len(machines)}")
    return machines[0]


class Simulation:
    """Resumable run of a machine on the all-blank tape, head at cell 0.

    Entering the halt state ends the run and counts as a step; a machine
    whose start state is its halt state is halted after 0 steps.
    """

    def __init__(self, machine: MachineSpec):
        self.machine = machine
        self.state = machine.start
        self.head = 0
        self.steps = 0
        self.tape: dict[int, str] = {}

    @property
    def halted(self) -> bool:
        return self.state == self.machine.halt

    def advance_to(self, budget: int) -> RunStatus:
        """Run until halted or ``budget`` total steps have been taken."""
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        table = self.machine.transitions
        halt = self.machine.halt
        state, head, steps, tape = self.state, self.head, self.steps, self.tape
        while state != halt and steps < budget:
            state, write, move = table[(state, tape.get(head, BLANK))]
            if write == BLANK:
                tape.pop(head, None)
            else:
                tape[head] = write
            head += 1 if move == "R" else -1
            steps += 1
        self.state, self.head, self.steps = state, head, steps
        return self.status(budget)

    def status(self, budget: int) -> RunStatus:
        if self.halted and self.steps <= budget:
            return Halted(self.steps)
        return RunningAfter(budget)

    def snapshot(self) -> tuple:
        return (self.state, self.head, self.steps, tuple(sorted(self.tape.items())))


def run_bounded(machine: MachineSpec, budget: int) -> RunStatus:
    return Simulation(machine).advance_to(budget)


def halts_within(machine: MachineSpec, k: int) -> bool:
    return isinstance(run_bounded(machine, k), Halted)


def audit_declared_status(machine: MachineSpec, audit_budget: int = 10**5) -> bool:
    """Check a machine's declared status by simulation.

    ``loops`` can only be refuted, so it passes when no halt occurs within
    ``audit_budget``; ``unknown`` always passes.
    """
    declared = machine.declared
    if declared.kind == "halts":
        return run_bounded(machine, declared.steps) == Halted(declared.steps)
    if declared.kind == "loops":
        return isinstance(run_bounded(machine, audit_budget), RunningAfter)
    return True


class Registry:
    """Ordered, immutable list of machines; position n (1-based) is M_n."""

    def __init__(self, machines: Iterable[MachineSpec]):
        self._machines = tuple(machines)
        names = [m.name for m in self._machines]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate machine names in registry: {', '.join(dupes)}")

    @classmethod
    def from_files(cls, paths: Iterable[str | Path]) -> Registry:
        machines = []
        for path in paths:
            machines.extend(parse_machines(Path(path).read_text(encoding="utf-8")))
        return cls(machines)

    def __len__(self) -> int:
        return len(self._machines)

    def __iter__(self) -> Iterator[MachineSpec]:
        return iter(self._machines)

    def __getitem__(self, n: int) -> MachineSpec:
        """1-based lookup."""
        if not 1 <= n <= len(self._machines):
            raise IndexError(f"machine index {n} outside registry of size {len(self)}")
        return self._machines[n - 1]

    def index_of(self, name: str) -> int:
        for i, m in enumerate(self._machines, start=1):
            if m.name == name:
                return i
        raise KeyError(name)
