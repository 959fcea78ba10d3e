"""CHSH experiments over local hidden variable models.

Each trial draws a hidden value, picks one of two settings per side with
independent fair coins, and records both outcomes.  Correlations are the
ordinary averages of outcome products, either over coincidences only
(post-selected) or over every trial with a missing detection counted as
``+1`` (all events).

Trials are generated in fixed-size chunks.  Chunk ``c`` draws from a Philox
counter-based generator keyed by ``(seed, c)``, so the result does not depend
on how many worker threads process the chunks.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Protocol

import numpy as np

from .algebra import DomainError, UnitVector3, Vector3, dot

CHUNK = 1 << 14
THREADS_ENV = "BIVECTOR_BELL_THREADS"

PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))
# S = E11 - E12 + E21 + E22
CHSH_SIGNS = {(0, 0): 1, (0, 1): -1, (1, 0): 1, (1, 1): 1}


class Outcome(enum.IntEnum):
    PLUS = 1
    MINUS = -1
    NO_DETECT = 0


class Estimator(enum.Enum):
    POST_SELECTED = "postselected"
    ALL_EVENTS = "allevents"


class LHVModel(Protocol):
    """A local hidden variable model.

    ``sample_hidden`` returns a batch of ``size`` hidden values (leading axis
    indexes trials).  The outcome functions map one local setting and a batch
    of hidden values to an ``int8`` array of :class:`Outcome` codes.  Neither
    outcome function ever sees the other side's setting.
    """

    name: str

    def sample_hidden(self, rng: np.random.Generator, size: int) -> np.ndarray: ...

    def outcome_A(self, setting: UnitVector3, hidden: np.ndarray) -> np.ndarray: ...

    def outcome_B(self, setting: UnitVector3, hidden: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class ChristianLHV:
    """Outcomes ``A = lam`` and ``B = -lam`` for a fair sign ``lam``."""

    name: str = "christian"

    def sample_hidden(self, rng, size):
        return rng.integers(0, 2, size=size, dtype=np.int8) * 2 - 1

    def outcome_A(self, setting, hidden):
        return np.asarray(hidden, dtype=np.int8)

    def outcome_B(self, setting, hidden):
        return -np.asarray(hidden, dtype=np.int8)


@dataclass(frozen=True)
class ThresholdDetectionLHV:
    """Sign model on a uniform hidden direction, with a detection threshold.

    A side fires ``sign(setting . h)`` (``-sign`` for B) only when
    ``|setting . h| >= tau``; otherwise it reports NO_DETECT.  A zero
    projection counts as ``+1`` before B's sign flip.
    """

    tau: float = 0.0
    name: str = "threshold"

    def __post_init__(self):
        if not (0.0 <= self.tau < 1.0):
            raise DomainError(f"threshold tau must lie in [0, 1), got {self.tau!r}")

    def sample_hidden(self, rng, size):
        h = rng.standard_normal((size, 3))
        return h / np.linalg.norm(h, axis=1, keepdims=True)

    def _fire(self, setting, hidden, flip):
        proj = np.asarray(hidden, dtype=float) @ np.array([float(c) for c in setting])
        out = np.where(proj >= 0, 1, -1).astype(np.int8)
        if flip:
            out = -out
        out[np.abs(proj) < self.tau] = Outcome.NO_DETECT
        return out

    def outcome_A(self, setting, hidden):
        return self._fire(setting, hidden, flip=False)

    def outcome_B(self, setting, hidden):
        return self._fire(setting, hidden, flip=True)


def christian_lhv() -> ChristianLHV:
    return ChristianLHV()


def threshold_detection_lhv(tau: float) -> ThresholdDetectionLHV:
    return ThresholdDetectionLHV(float(tau))


@dataclass(frozen=True)
class ExperimentConfig:
    settings_A: tuple[UnitVector3, UnitVector3]
    settings_B: tuple[UnitVector3, UnitVector3]
    trials: int
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        for name in ("settings_A", "settings_B"):
            pair = getattr(self, name)
            if len(pair) != 2:
                raise DomainError(f"{name} needs exactly two settings")
            object.__setattr__(self, name, tuple(UnitVector3.of(v).to_float() for v in pair))

    @classmethod
    def from_angles(cls, a1, a2, b1, b2, trials, seed=0) -> ExperimentConfig:
        """Coplanar settings given in degrees."""
        u = UnitVector3.from_angle
        return cls((u(a1), u(a2)), (u(b1), u(b2)), trials, seed)


DEFAULT_ANGLES = (0.0, 90.0, 45.0, 135.0)


@dataclass(frozen=True)
class Cell:
    """Tallies for one setting pair ``(i, j)``."""

    n_all: int
    n_coincident: int
    sum_postselected: int
    sum_allevents: int

    @property
    def E_postselected(self) -> float | None:
        if self.n_coincident == 0:
            return None
        return self.sum_postselected / self.n_coincident

    @property
    def E_allevents(self) -> float | None:
        if self.n_all == 0:
            return None
        return self.sum_allevents / self.n_all

    def correlation(self, estimator: Estimator) -> float | None:
        if estimator is Estimator.POST_SELECTED:
            return self.E_postselected
        return self.E_allevents

    def count(self, estimator: Estimator) -> int:
        return self.n_coincident if estimator is Estimator.POST_SELECTED else self.n_all


@dataclass(frozen=True)
class CorrelationTable:
    model: str
    config: ExperimentConfig
    cells: dict[tuple[int, int], Cell] = field(repr=False)

    @property
    def trials(self) -> int:
        return self.config.trials

    @property
    def efficiency(self) -> float:
        """Fraction of trials in which both sides detected."""
        return sum(c.n_coincident for c in self.cells.values()) / self.trials

    def undefined_cells(self, estimator: Estimator) -> list[tuple[int, int]]:
        return [p for p in PAIRS if self.cells[p].correlation(estimator) is None]

    def stderr_S(self, estimator: Estimator) -> float | None:
        """Error bar on S from a ``1/sqrt(count)`` bound per cell."""
        counts = [self.cells[p].count(estimator) for p in PAIRS]
        if 0 in counts:
            return None
        return math.sqrt(sum(1.0 / n for n in counts))

    def cell_stderr(self, pair, estimator: Estimator) -> float | None:
        n = self.cells[pair].count(estimator)
        return None if n == 0 else 1.0 / math.sqrt(n)


class UndefinedCellError(ValueError):
    pass


def pair_label(pair: tuple[int, int]) -> str:
    return f"a{pair[0] + 1}b{pair[1] + 1}"


def _thread_cap(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None:
            return min(8, os.cpu_count() or 1)
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise DomainError("thread cap must be a positive integer")
    return threads


def _run_chunk(model: LHVModel, cfg: ExperimentConfig, index: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=(cfg.seed << 64) | index))
    side_a = rng.integers(0, 2, size=size, dtype=np.int8)
    side_b = rng.integers(0, 2, size=size, dtype=np.int8)
    hidden = model.sample_hidden(rng, size)

    out_a = np.empty(size, dtype=np.int8)
    out_b = np.empty(size, dtype=np.int8)
    for i in (0, 1):
        m = side_a == i
        out_a[m] = model.outcome_A(cfg.settings_A[i], hidden[m])
        m = side_b == i
        out_b[m] = model.outcome_B(cfg.settings_B[i], hidden[m])

    detected = (out_a != 0) & (out_b != 0)
    prod = out_a.astype(np.int64) * out_b
    prod_all = np.where(out_a == 0, 1, out_a).astype(np.int64) * np.where(out_b == 0, 1, out_b)

    tallies = np.zeros((4, 4), dtype=np.int64)
    for row, (i, j) in enumerate(PAIRS):
        m = (side_a == i) & (side_b == j)
        md = m & detected
        tallies[row] = (
            np.count_nonzero(m),
            np.count_nonzero(md),
            prod[md].sum(),
            prod_all[m].sum(),
        )
    return tallies


def run_experiment(model: LHVModel, cfg: ExperimentConfig, threads: int | None = None) -> CorrelationTable:
    """Simulate ``cfg.trials`` trials; identical output for a fixed seed."""
    cap = _thread_cap(threads)
    chunks = [(c, min(CHUNK, cfg.trials - c * CHUNK)) for c in range(-(-cfg.trials // CHUNK))]

    def work(chunk):
        return _run_chunk(model, cfg, *chunk)

    if cap == 1 or len(chunks) == 1:
        results = map(work, chunks)
    else:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(work, chunks))

    total = np.zeros((4, 4), dtype=np.int64)
    for r in results:
        total += r
    cells = {pair: Cell(*(int(v) for v in total[row])) for row, pair in enumerate(PAIRS)}
    return CorrelationTable(model.name, cfg, cells)


def chsh_S(table: CorrelationTable, estimator: Estimator) -> float:
    """``S = E11 - E12 + E21 + E22``; local models obey ``|S| <= 2``."""
    missing = table.undefined_cells(estimator)
    if missing:
        names = ", ".join(pair_label(p) for p in missing)
        raise UndefinedCellError(f"correlation undefined for cell(s) {names}: no {estimator.value} events")
    return float(sum(CHSH_SIGNS[p] * table.cells[p].correlation(estimator) for p in PAIRS))


def singlet_reference(a: Vector3, b: Vector3) -> float:
    return -float(dot(UnitVector3.of(a).to_float(), UnitVector3.of(b).to_float()))


def singlet_S(cfg: ExperimentConfig) -> float:
    return sum(
        CHSH_SIGNS[(i, j)] * singlet_reference(cfg.settings_A[i], cfg.settings_B[j]) for i, j in PAIRS
    )


def _maybe_S(table, estimator):
    try:
        return chsh_S(table, estimator)
    except UndefinedCellError:
        return None


def bound_holds(S: float | None, stderr: float | None, sigmas: float = 3.0) -> bool:
    return S is not None and stderr is not None and abs(S) <= 2.0 + sigmas * stderr


def summary(table: CorrelationTable) -> dict[str, Any]:
    return {
        "model": table.model,
        "seed": table.config.seed,
        "trials": table.trials,
        "S_postselected": _maybe_S(table, Estimator.POST_SELECTED),
        "S_allevents": _maybe_S(table, Estimator.ALL_EVENTS),
        "stderr_S": table.stderr_S(Estimator.POST_SELECTED),
        "efficiency": table.efficiency,
    }


CSV_HEADER = ("pair", "a_setting", "b_setting", "n_all", "n_coincident", "E_postselected", "E_allevents")


def _fmt_setting(v: Vector3) -> str:
    return " ".join(repr(float(c) + 0.0) for c in v)


def csv_rows(table: CorrelationTable) -> list[tuple]:
    rows = []
    for i, j in PAIRS:
        c = table.cells[(i, j)]
        rows.append(
            (
                pair_label((i, j)),
                _fmt_setting(table.config.settings_A[i]),
                _fmt_setting(table.config.settings_B[j]),
                c.n_all,
                c.n_coincident,
                "" if c.E_postselected is None else repr(c.E_postselected),
                "" if c.E_allevents is None else repr(c.E_allevents),
            )
        )
    return rows


def scan_detection_loophole(
    taus, trials: int, seed: int = 0, angles=DEFAULT_ANGLES, threads: int | None = None
) -> dict[str, Any]:
    """Run the threshold model for each ``tau`` and tabulate both estimators.

    A row is flagged when the post-selected ``|S|`` exceeds ``2 + 3 stderr``
    while the all-events ``|S|`` stays within it.
    """
    taus = [float(t) for t in taus]
    if not taus:
        raise DomainError("tau grid must be nonempty")
    cfg = ExperimentConfig.from_angles(*angles, trials=trials, seed=seed)
    rows = []
    for tau in taus:
        table = run_experiment(threshold_detection_lhv(tau), cfg, threads)
        s_post = _maybe_S(table, Estimator.POST_SELECTED)
        s_all = _maybe_S(table, Estimator.ALL_EVENTS)
        err_post = table.stderr_S(Estimator.POST_SELECTED)
        err_all = table.stderr_S(Estimator.ALL_EVENTS)
        cells = []
        for p in PAIRS:
            c = table.cells[p]
            cells.append(
                {
                    "pair": pair_label(p),
                    "n_all": c.n_all,
                    "n_coincident": c.n_coincident,
                    "E_postselected": c.E_postselected,
                    "err_postselected": table.cell_stderr(p, Estimator.POST_SELECTED),
                    "E_allevents": c.E_allevents,
                    "err_allevents": table.cell_stderr(p, Estimator.ALL_EVENTS),
                }
            )
        rows.append(
            {
                "tau": tau,
                "S_postselected": s_post,
                "stderr_postselected": err_post,
                "S_allevents": s_all,
                "stderr_allevents": err_all,
                "efficiency": table.efficiency,
                "postselected_within_bound": bound_holds(s_post, err_post),
                "allevents_within_bound": bound_holds(s_all, err_all),
                "flagged": (not bound_holds(s_post, err_post)) and s_post is not None
                and bound_holds(s_all, err_all),
                "cells": cells,
            }
        )
    return {
        "model": "threshold",
        "seed": seed,
        "trials": trials,
        "settings_deg": list(angles),
        "rows": rows,
        "flagged_taus": [r["tau"] for r in rows if r["flagged"]],
    }
