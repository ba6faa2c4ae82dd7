from __future__ import annotations

import logging
from typing import Any, Callable, Dict, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict

from pzf_lab import __version__
from pzf_lab.config import AppConfig
from pzf_lab.core.errors import PzfLabError, StallError
from pzf_lab.core.types import ColorState
from pzf_lab.core.utils import derive_seed, dumps_json
from pzf_lab.modules.bounds.formulas import STAR_TAIL_FLOOR, star_tail_grid
from pzf_lab.modules.bounds.verification import verify_bounds
from pzf_lab.modules.exact_solver.service import ExactSolverService
from pzf_lab.modules.graph_core.graph import Graph
from pzf_lab.modules.graph_core.io import serialize_graph
from pzf_lab.modules.graph_core.service import GraphService
from pzf_lab.modules.graph_core.topology import center_vertices
from pzf_lab.modules.mc_estimator.service import MonteCarloService
from pzf_lab.modules.modified_process.process import (
    records_frame,
    run_corpus,
    run_modified,
    summarize_corpus,
)
from pzf_lab.modules.pzf_engine.engine import coupled_run
from pzf_lab.modules.structure_analysis.cornerstones import best_cornerstone
from pzf_lab.modules.sweep.runner import run_sweep
from pzf_lab.schemas import Command, CommandResult

logger = logging.getLogger(__name__)

# Subcommands whose natural output is a table.
TABULAR = {"sweep", "star-tails"}


class Report(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    payload: Dict[str, Any] = {}
    rows: Optional[pd.DataFrame] = None
    text: Optional[str] = None


class CommandRunner:
    def __init__(self, config: AppConfig, workers: Optional[int] = None) -> None:
        self.config = config
        self.workers = workers or config.estimator.workers
        self.graphs = GraphService(config)
        self._handlers: Dict[str, Callable[[Command], Report]] = {
            "generate": self._generate,
            "exact": self._exact,
            "estimate": self._estimate,
            "tail": self._tail,
            "throttle": self._throttle,
            "cornerstones": self._cornerstones,
            "modified": self._modified,
            "bounds": self._bounds,
            "couple-check": self._couple_check,
            "sweep": self._sweep,
            "star-tails": self._star_tails,
        }

    def run(self, cmd: Command) -> CommandResult:
        try:
            report = self._handlers[cmd.subcommand](cmd)
        except PzfLabError as exc:
            logger.error("%s failed: %s", cmd.subcommand, exc)
            return CommandResult(exit_code=1, text=f"error: {exc}")
        envelope = self._envelope(cmd, report)
        text = self._render(cmd, report, envelope)
        if cmd.out is not None:
            path = self.config.resolve_out(cmd.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
            logger.info("wrote %s", path)
        return CommandResult(exit_code=0, text=text, payload=envelope)

    def _envelope(self, cmd: Command, report: Report) -> Dict[str, Any]:
        envelope: Dict[str, Any] = {
            "version": __version__,
            "command": cmd.subcommand,
            "seed": cmd.seed,
            "params": cmd.params(),
        }
        envelope.update(report.payload)
        if report.rows is not None:
            envelope["rows"] = report.rows.to_dict(orient="records")
        return envelope

    def _render(self, cmd: Command, report: Report, envelope: Dict[str, Any]) -> str:
        if report.text is not None:
            return report.text
        fmt = cmd.format or ("csv" if cmd.subcommand in TABULAR else self.config.cli.default_format)
        if fmt == "json":
            return dumps_json(envelope)
        rows = report.rows
        if rows is None:
            rows = pd.json_normalize({k: v for k, v in envelope.items() if k != "params"})
        return rows.to_csv(index=False)

    def _graph(self, cmd: Command) -> Graph:
        return self.graphs.load(graph=cmd.graph, file=cmd.file)

    @staticmethod
    def _state(graph: Graph, vertices: Optional[list]) -> Optional[ColorState]:
        return None if vertices is None else ColorState.of(graph.n, vertices)

    def _start_or_center(self, graph: Graph, cmd: Command) -> ColorState:
        state = self._state(graph, cmd.start)
        return state or ColorState.of(graph.n, [center_vertices(graph)[0]])

    def _generate(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        return Report(payload={"n": graph.n, "m": graph.m}, text=serialize_graph(graph))

    def _exact(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        solver = ExactSolverService(self.config, cap_override=cmd.cap_override)
        state = self._state(graph, cmd.start)
        table = solver.table(graph, start=state)
        if state is None:
            value, vertex = solver.ept_graph(graph, table=table)
            state = ColorState.of(graph.n, [vertex])
        else:
            value = table.ept(state)
        return Report(
            payload={
                "ept": value,
                "start": state.label(),
                "start_chosen": cmd.start is None,
                "n": graph.n,
                "cap": solver.cap,
                "table": table.to_payload(sets=[state]),
            }
        )

    def _estimate(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        mc = MonteCarloService(self.config, workers=self.workers)
        state = self._state(graph, cmd.start)
        extra: Dict[str, Any] = {}
        if state is None:
            chosen = mc.estimate_graph(graph, cmd.seed, trials=cmd.trials, max_steps=cmd.steps)
            result = chosen.result
            state = ColorState.of(graph.n, [chosen.vertex])
            extra = {"candidates": chosen.candidates, "restricted": chosen.restricted}
        else:
            result = mc.estimate(graph, state, cmd.seed, trials=cmd.trials, max_steps=cmd.steps)
        return Report(
            payload={
                "start": state.label(),
                "start_chosen": cmd.start is None,
                **result.model_dump(),
                "standard_error": result.standard_error,
                **extra,
            }
        )

    def _tail(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        state = self._start_or_center(graph, cmd)
        mc = MonteCarloService(self.config, workers=self.workers)
        tail = mc.tail(graph, state, cmd.steps or 0, cmd.seed, trials=cmd.trials)
        return Report(payload={"start": state.label(), **tail.model_dump()})

    def _throttle(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        result = ExactSolverService(self.config, cap_override=cmd.cap_override).throttling(graph)
        return Report(
            payload={
                "thpzf": result.value,
                "argmin": result.argmin.label(),
                "argmin_bits": result.argmin.to_hex(),
            }
        )

    def _cornerstones(self, cmd: Command) -> Report:
        return Report(payload=best_cornerstone(self._graph(cmd)).model_dump())

    def _modified(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        if cmd.trials is None:
            record = run_modified(graph, cmd.seed, strict=cmd.strict, max_steps=cmd.steps)
            return Report(payload=record.model_dump())
        records = run_corpus(graph, cmd.trials, cmd.seed, self.workers, max_steps=cmd.steps)
        summary = summarize_corpus(records, cmd.seed)
        if cmd.strict and summary.stalled_runs:
            raise StallError(f"{summary.stalled_runs} of {summary.runs} modified runs stalled")
        return Report(payload=summary.model_dump(), rows=records_frame(records))

    def _bounds(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        state = self._start_or_center(graph, cmd)
        solver = ExactSolverService(self.config, cap_override=cmd.cap_override)
        estimator = self.config.estimator
        report = verify_bounds(
            graph,
            state,
            mode=cmd.mode,
            cap=solver.cap,
            trials=cmd.trials or estimator.default_trials,
            seed=cmd.seed,
            workers=self.workers,
            max_steps=cmd.steps or self.config.max_steps_for(graph.n),
            confidence=estimator.confidence,
            se_multiplier=estimator.se_multiplier,
            tolerance=self.config.solver.tolerance,
            graph_id=cmd.graph or str(cmd.file),
        )
        rows = pd.DataFrame([entry.model_dump() for entry in report.entries])
        return Report(
            payload={**report.model_dump(), "all_satisfied": report.all_satisfied},
            rows=rows,
        )

    def _couple_check(self, cmd: Command) -> Report:
        graph = self._graph(cmd)
        lower = ColorState.of(graph.n, cmd.start or [])
        upper = ColorState.of(graph.n, cmd.superset or [])
        steps = cmd.steps if cmd.steps is not None else self.config.max_steps_for(graph.n)
        trials = cmd.trials or self.config.estimator.default_trials
        violations = 0
        first_seed: Optional[int] = None
        for index in range(trials):
            trial_seed = derive_seed(cmd.seed, index)
            result = coupled_run(graph, lower, upper, trial_seed, steps)
            if not result.subset_ok:
                violations += 1
                first_seed = trial_seed if first_seed is None else first_seed
        if violations:
            logger.warning("coupling violated in %d of %d trials", violations, trials)
        return Report(
            payload={
                "subset_ok": violations == 0,
                "violations": violations,
                "trials": trials,
                "steps": steps,
                "first_violation_seed": first_seed,
            }
        )

    def _sweep(self, cmd: Command) -> Report:
        rows = run_sweep(
            cmd.grid or "",
            trials=cmd.trials or self.config.estimator.default_trials,
            seed=cmd.seed,
            workers=self.workers,
            max_steps_factor=self.config.engine.max_steps_factor,
            gnp_retries=self.config.generators.gnp_retries,
        )
        return Report(payload={"cells": len(rows)}, rows=rows)

    def _star_tails(self, cmd: Command) -> Report:
        rows = star_tail_grid(cmd.n_max)
        return Report(
            payload={
                "n_max": cmd.n_max,
                "min_tail": float(rows["tail"].min()),
                "floor": STAR_TAIL_FLOOR,
                "all_meet_floor": bool(rows["meets_floor"].all()),
            },
            rows=rows,
        )


def run_command(cmd: Command, config: Optional[AppConfig] = None) -> CommandResult:
    return CommandRunner(config or AppConfig()).run(cmd)
