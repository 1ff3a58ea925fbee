"""Judgment collection: task assignment, storage, and quality control.

Workers receive one rating task at a time (a question plus an audio
asset), never see the same item twice, and occasionally get a trap
task instead: either a gold-key check (their typed answer must be
phonetically close to the truth) or an off-topic audio that warrants
the lowest informativeness rating.  Judgments land in an append-only
JSON Lines log whose in-memory index is rebuilt at startup.
"""

from __future__ import annotations

import json
import logging
import random
import threading
import uuid
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .scoring import correctness

log = logging.getLogger(__name__)

RATING_RANGES = {
    "informativeness": (0, 4),
    "elocution": (0, 2),
    "interruption": (0, 1),
    "length_rating": (-1, 1),
}

JUDGMENT_FIELDS = (
    "worker_id",
    "item_id",
    "kind",
    "informativeness",
    "elocution",
    "interruption",
    "length_rating",
    "typed_key",
    "is_trap",
    "timestamp",
)


class ValidationError(ValueError):
    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class UnknownTaskError(KeyError):
    """No open assignment matches the submitted judgment."""


class DuplicateSubmissionError(ValueError):
    """The task was already answered."""


@dataclass(frozen=True)
class Judgment:
    worker_id: str
    item_id: str
    kind: str
    informativeness: int
    elocution: int
    interruption: int
    length_rating: int
    typed_key: str
    is_trap: bool
    timestamp: str

    def __post_init__(self):
        problems = []
        for name, (lo, hi) in RATING_RANGES.items():
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or not lo <= value <= hi:
                problems.append(f"{name}={value!r} outside {lo}..{hi}")
        if not self.typed_key.strip():
            problems.append("typed_key is empty")
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class RatingUnit:
    """One ratable question/audio pair."""

    item_id: str
    kind: str
    question: str
    audio_asset_id: str


@dataclass(frozen=True)
class TrapItem:
    trap_id: str
    question: str
    audio_asset_id: str
    trap_type: str  # "gold_key" | "off_topic"
    gold_key: str | None = None

    def __post_init__(self):
        if self.trap_type not in ("gold_key", "off_topic"):
            raise ValueError(f"unknown trap_type {self.trap_type!r}")
        if self.trap_type == "off_topic" and self.gold_key is not None:
            raise ValueError("off_topic traps carry no gold key")
        if self.trap_type == "gold_key" and not (self.gold_key or "").strip():
            raise ValueError("gold_key traps need a gold key")


@dataclass(frozen=True)
class Task:
    task_id: str
    item_id: str
    kind: str
    question: str
    audio_asset_id: str
    is_trap: bool

    def public_payload(self) -> dict:
        """Wire form of the task; the trap flag stays server-side."""
        return {
            "task_id": self.task_id,
            "item_id": self.item_id,
            "kind": self.kind,
            "question": self.question,
            "audio_asset_id": self.audio_asset_id,
        }


@dataclass
class _Assignment:
    task_id: str
    worker_id: str
    item_id: str
    kind: str
    is_trap: bool
    answered: bool = False


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


class JudgmentStore:
    """Append-only JSON Lines store with a rebuilt in-memory index.

    Judgment lines mirror the Judgment type exactly; task assignments
    live in a sibling log so the no-repeat bookkeeping survives
    restarts.  All writes pass through one lock.
    """

    def __init__(self, judgments_path: str | Path, assignments_path: str | Path | None = None):
        self.judgments_path = Path(judgments_path)
        if assignments_path is None:
            assignments_path = self.judgments_path.with_name(
                "assignments_" + self.judgments_path.name
            )
        self.assignments_path = Path(assignments_path)
        self.judgments_path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._judgments: list[Judgment] = []
        self._assignments: dict[str, _Assignment] = {}
        self._open_by_worker_item: dict[tuple[str, str], str] = {}
        self._seen_items: dict[str, set[str]] = {}
        self._accepted: dict[tuple[str, str], int] = {}
        self._outstanding: dict[tuple[str, str], int] = {}
        self._replay()

    def _replay(self) -> None:
        if self.assignments_path.exists():
            with open(self.assignments_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        record = json.loads(line)
                        self._index_assignment(_Assignment(**record))
        if self.judgments_path.exists():
            with open(self.judgments_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        record = json.loads(line)
                        self._index_judgment(Judgment(**record))

    def _index_assignment(self, assignment: _Assignment) -> None:
        self._assignments[assignment.task_id] = assignment
        self._seen_items.setdefault(assignment.worker_id, set()).add(assignment.item_id)
        key = (assignment.item_id, assignment.kind)
        if not assignment.answered and not assignment.is_trap:
            self._outstanding[key] = self._outstanding.get(key, 0) + 1
        if not assignment.answered:
            self._open_by_worker_item[(assignment.worker_id, assignment.item_id)] = (
                assignment.task_id
            )

    def _index_judgment(self, judgment: Judgment) -> None:
        self._judgments.append(judgment)
        key = (judgment.worker_id, judgment.item_id)
        task_id = self._open_by_worker_item.pop(key, None)
        if task_id is not None:
            assignment = self._assignments[task_id]
            assignment.answered = True
            unit = (assignment.item_id, assignment.kind)
            if not assignment.is_trap:
                self._outstanding[unit] = self._outstanding.get(unit, 1) - 1
        if not judgment.is_trap:
            unit = (judgment.item_id, judgment.kind)
            self._accepted[unit] = self._accepted.get(unit, 0) + 1

    def _append(self, path: Path, record: dict) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    # -- assignment side -------------------------------------------------

    def record_assignment(self, task: Task, worker_id: str) -> None:
        with self._lock:
            assignment = _Assignment(
                task_id=task.task_id,
                worker_id=worker_id,
                item_id=task.item_id,
                kind=task.kind,
                is_trap=task.is_trap,
            )
            self._append(self.assignments_path, asdict(assignment))
            self._index_assignment(assignment)

    def seen_items(self, worker_id: str) -> set[str]:
        with self._lock:
            return set(self._seen_items.get(worker_id, set()))

    def load_for_unit(self, item_id: str, kind: str) -> int:
        """Accepted plus outstanding judgments for one unit."""
        with self._lock:
            key = (item_id, kind)
            return self._accepted.get(key, 0) + self._outstanding.get(key, 0)

    def accepted_count(self, item_id: str, kind: str) -> int:
        with self._lock:
            return self._accepted.get((item_id, kind), 0)

    # -- judgment side ---------------------------------------------------

    def submit_judgment(self, payload: Mapping) -> dict:
        """Validate and append one judgment; returns a receipt with a
        monotonically increasing sequence number.

        The payload must match an open assignment of this worker; the
        trap flag and timestamp are server-authoritative.
        """
        with self._lock:
            worker_id = str(payload.get("worker_id", "")).strip()
            item_id = str(payload.get("item_id", "")).strip()
            if not worker_id or not item_id:
                raise ValidationError(["worker_id and item_id are required"])
            task_id = self._open_by_worker_item.get((worker_id, item_id))
            if task_id is None:
                if any(
                    a.worker_id == worker_id and a.item_id == item_id and a.answered
                    for a in self._assignments.values()
                ):
                    raise DuplicateSubmissionError(
                        f"worker {worker_id} already answered item {item_id}"
                    )
                raise UnknownTaskError(
                    f"no open task for worker {worker_id} on item {item_id}"
                )
            assignment = self._assignments[task_id]
            if payload.get("kind") not in (None, assignment.kind):
                raise ValidationError(
                    [f"kind {payload.get('kind')!r} does not match the assigned task"]
                )
            judgment = Judgment(
                worker_id=worker_id,
                item_id=item_id,
                kind=assignment.kind,
                informativeness=payload.get("informativeness"),
                elocution=payload.get("elocution"),
                interruption=payload.get("interruption"),
                length_rating=payload.get("length_rating"),
                typed_key=str(payload.get("typed_key", "")),
                is_trap=assignment.is_trap,
                timestamp=str(payload.get("timestamp") or utc_now_iso()),
            )
            self._append(self.judgments_path, asdict(judgment))
            self._index_judgment(judgment)
            return {"sequence": len(self._judgments), "task_id": task_id}

    def append_raw(self, judgment: Judgment) -> int:
        """Append a judgment without assignment bookkeeping (used by
        offline simulation and imports).  Returns the sequence number."""
        with self._lock:
            self._append(self.judgments_path, asdict(judgment))
            self._index_judgment(judgment)
            return len(self._judgments)

    def judgments(self) -> list[Judgment]:
        with self._lock:
            return list(self._judgments)


class NoWork(Exception):
    """No eligible task remains for this worker."""


class TaskAssigner:
    """Serves each worker a uniformly random unseen item, occasionally
    swapping in a trap task, and never over-assigns a unit past the
    target judgment count (outstanding assignments hold a slot)."""

    def __init__(
        self,
        store: JudgmentStore,
        units: Sequence[RatingUnit],
        traps: Sequence[TrapItem] = (),
        target_judgments: int = 3,
        trap_ratio: float = 0.1,
        seed: int = 0,
    ):
        if not 0 <= trap_ratio < 1:
            raise ValueError("trap_ratio must be in [0, 1)")
        self.store = store
        self.units = list(units)
        self.traps = list(traps)
        self.target_judgments = target_judgments
        self.trap_ratio = trap_ratio
        self._rng = random.Random(seed)
        self._lock = threading.Lock()

    def next_task(self, worker_id: str) -> Task:
        """Pick the next task for this worker; raises NoWork when no
        eligible item remains."""
        with self._lock:
            seen = self.store.seen_items(worker_id)
            if self.traps and self._rng.random() < self.trap_ratio:
                trap_pool = [t for t in self.traps if t.trap_id not in seen]
                if trap_pool:
                    trap = trap_pool[self._rng.randrange(len(trap_pool))]
                    task = Task(
                        task_id=uuid.uuid4().hex,
                        item_id=trap.trap_id,
                        kind="baseline",
                        question=trap.question,
                        audio_asset_id=trap.audio_asset_id,
                        is_trap=True,
                    )
                    self.store.record_assignment(task, worker_id)
                    return task
            eligible = [
                u
                for u in self.units
                if u.item_id not in seen
                and self.store.load_for_unit(u.item_id, u.kind) < self.target_judgments
            ]
            if not eligible:
                raise NoWork(f"no eligible tasks for worker {worker_id}")
            unit = eligible[self._rng.randrange(len(eligible))]
            task = Task(
                task_id=uuid.uuid4().hex,
                item_id=unit.item_id,
                kind=unit.kind,
                question=unit.question,
                audio_asset_id=unit.audio_asset_id,
                is_trap=False,
            )
            self.store.record_assignment(task, worker_id)
            return task


def reliable_workers(
    judgments: Iterable[Judgment], traps: Sequence[TrapItem]
) -> set[str]:
    """Workers passing both quality filters.

    A worker fails when their mean typed-answer correctness over
    gold-key traps is below 0.5, or when any off-topic trap got an
    informativeness above the lowest rating.  Workers who never met a
    trap pass by default.
    """
    trap_by_id = {t.trap_id: t for t in traps}
    gold_scores: dict[str, list[float]] = {}
    off_topic_ok: dict[str, bool] = {}
    workers: set[str] = set()
    for j in judgments:
        workers.add(j.worker_id)
        if not j.is_trap:
            continue
        trap = trap_by_id.get(j.item_id)
        if trap is None:
            log.warning("trap judgment for unknown trap %s", j.item_id)
            continue
        if trap.trap_type == "gold_key":
            score = correctness(j.typed_key, trap.gold_key).value
            gold_scores.setdefault(j.worker_id, []).append(score)
        else:
            ok = off_topic_ok.get(j.worker_id, True) and j.informativeness == 0
            off_topic_ok[j.worker_id] = ok
    reliable = set()
    for worker in workers:
        scores = gold_scores.get(worker)
        if scores and sum(scores) / len(scores) < 0.5:
            continue
        if not off_topic_ok.get(worker, True):
            continue
        reliable.add(worker)
    return reliable


def analysis_rows(
    judgments: Iterable[Judgment], reliable: set[str]
) -> list[dict]:
    """Judgment dicts for analysis: trap rows and rows from workers
    that failed quality control are dropped (they stay in the log)."""
    return [
        asdict(j) for j in judgments if not j.is_trap and j.worker_id in reliable
    ]


def load_traps(path: str | Path) -> list[TrapItem]:
    """Read trap definitions from a JSON file (a list of objects)."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return [TrapItem(**entry) for entry in payload]
