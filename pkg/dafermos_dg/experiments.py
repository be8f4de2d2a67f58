"""
Experiment pipelines.

Every experiment is a Chain

    prepare -> <study> -> <tabulate> -> write_csv

with the study connected to `record_blowup`, so a blow-up still yields a
CSV (partial data plus the achieved time in the status line). `execute`
runs the chain for a RunConfig and maps the outcome to an exit code.
"""

from __future__ import annotations

import asyncio
import csv
import sys
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from .chain import Chain
from .config import Experiment, RunConfig
from .context import Context
from .diagnostics import (
    EntropyTrace,
    blowup_scan,
    burgers_smooth_exact,
    dafermos_comparison,
    eoc,
    error_norms,
    total_entropy_dg,
)
from .discrete import DescentParams
from .errors import BlowUpError, DafermosError, UsageError
from .fv import fv_solve
from .initial_conditions import by_name, on_domain
from .laws import LOCAL_LAX_FRIEDRICHS, burgers
from .logging import get_logger
from .middleware import Logging, Timing
from .quadrature import build_basis
from .solver import Scheme, dg_time_step, integrate, prepare_state

logger = get_logger("experiments")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BLOWUP = 2
EXIT_IO = 3

# cfl of the Godunov reference in the entropy comparison
REFERENCE_CFL = 0.5


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


# {{{ shared links


async def prepare(ctx: Context) -> Context:
    """Build the law, flux, initial data and basis from the RunConfig."""
    config: RunConfig = ctx["config"]
    ic = by_name(config.ic.value)
    ctx["ic"] = on_domain(ic, config.x_min, config.x_max)
    ctx["law"] = burgers()
    ctx["flux"] = LOCAL_LAX_FRIEDRICHS
    ctx["basis"] = build_basis(config.p)
    ctx["params"] = DescentParams(r=config.gradient_steps)
    ctx["status"] = "completed"
    return ctx


async def record_blowup(ctx: Context) -> Context:
    """Turn a BlowUpError into a blow-up status and keep the partial result."""
    exc = ctx.pop("exception")
    ctx["status"] = f"blow-up t={exc.time:.17g}"
    ctx["blowup_time"] = exc.time
    ctx["partial"] = exc.partial
    return ctx


def is_blowup(ctx: Context) -> bool:
    return isinstance(ctx.get("exception"), BlowUpError)


async def write_csv(ctx: Context) -> Context:
    """Write header comments and rows to config.out_path (stdout when unset)."""
    config: RunConfig = ctx["config"]
    lines = [f"# config: {config.to_json()}\n", f"# status: {ctx['status']}\n"]
    if config.out_path is None:
        _write(sys.stdout, lines, ctx["header"], ctx["rows"])
    else:
        with open(config.out_path, "w", newline="") as stream:
            _write(stream, lines, ctx["header"], ctx["rows"])
        logger.info("wrote %d rows to %s", len(ctx["rows"]), config.out_path)
    return ctx


def _write(stream: Any, comments: List[str], header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    stream.writelines(comments)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[_fmt(v) for v in row] for row in rows])


# }}}


# {{{ run


async def run_study(ctx: Context) -> Context:
    """Solve to t_end with the configured scheme, recording the output schedule."""
    config: RunConfig = ctx["config"]
    if config.scheme is Scheme.GODUNOV:
        ctx["result"] = fv_solve(ctx["law"], ctx["ic"], config.n_cells, config.cfl, config.t_end, config.schedule())
        return ctx
    state = prepare_state(ctx["ic"], config.n_cells, config.p)
    ctx["result"] = integrate(
        state,
        ctx["law"],
        ctx["flux"],
        config.scheme,
        config.t_end,
        cfl=config.cfl,
        output_times=config.schedule(),
        params=ctx["params"],
    )
    return ctx


async def run_tabulate(ctx: Context) -> Context:
    """Long format time,x,u: nodal values for DG, cell means at centers for godunov."""
    solution = ctx.get("result") or ctx.get("partial")
    rows: List[List[Any]] = []
    if solution is not None:
        if ctx["config"].scheme is Scheme.GODUNOV:
            x = solution.mesh.centers
            snapshots = zip(solution.times, solution.means)
        else:
            x = solution.mesh.nodes(ctx["basis"]).ravel()
            snapshots = zip(solution.times, solution.states)
        for t, values in snapshots:
            rows.extend([t, xi, ui] for xi, ui in zip(x, np.ravel(values)))
    ctx["header"] = ["time", "x", "u"]
    ctx["rows"] = rows
    return ctx


# }}}


# {{{ converge


async def converge_study(ctx: Context) -> Context:
    """Errors against the characteristic solution on every grid level, dt = lambda dx^2."""
    config: RunConfig = ctx["config"]
    law, ic = ctx["law"], ctx["ic"]
    done: List[Dict[str, float]] = []
    ctx["levels_done"] = done
    lam = None
    for n in config.levels:
        state = prepare_state(ic, n, config.p)
        dx = state.mesh.cell_length
        if lam is None:
            lam = dg_time_step(state.coeffs, state.mesh, config.p, law, config.cfl) / dx**2
        solution = integrate(
            state,
            law,
            ctx["flux"],
            config.scheme,
            config.t_end,
            step_rule=lambda _u, dt=lam * dx * dx: dt,
            params=ctx["params"],
        )
        final = solution.state_at(-1, state.basis)
        e1, e2 = error_norms(final, lambda x: burgers_smooth_exact(ic, x, config.t_end))
        logger.info("converge n_cells=%d e1=%.3e e2=%.3e", n, e1, e2)
        done.append({"n_cells": n, "e1": e1, "e2": e2})
    return ctx


async def converge_tabulate(ctx: Context) -> Context:
    """n_cells,e1,e2,eoc1,eoc2; the first level has no order."""
    done = ctx.get("levels_done", [])
    rows = [[d["n_cells"], d["e1"], d["e2"], None, None] for d in done]
    if len(done) >= 2:
        table = eoc([d["n_cells"] for d in done], [d["e1"] for d in done], [d["e2"] for d in done])
        ctx["table"] = table
        for row, o1, o2 in zip(rows[1:], table.eoc_1, table.eoc_2):
            row[3], row[4] = o1, o2
    ctx["header"] = ["n_cells", "e1", "e2", "eoc1", "eoc2"]
    ctx["rows"] = rows
    return ctx


# }}}


# {{{ entropy


async def entropy_study(ctx: Context) -> Context:
    """DDG run recording, per accepted step, the worst per-cell entropy-inequality violation over its three stages."""
    config: RunConfig = ctx["config"]
    law = ctx["law"]
    trace = EntropyTrace()
    ctx["trace"] = trace
    state = prepare_state(ctx["ic"], config.n_cells, config.p)

    def observe(t: float, coeffs: np.ndarray, report: Any) -> None:
        trace.append(t, total_entropy_dg(state.with_coeffs(coeffs), law), report.violation)

    ctx["result"] = integrate(
        state,
        law,
        ctx["flux"],
        Scheme.DDG,
        config.t_end,
        cfl=config.cfl,
        output_times=config.schedule(),
        observer=observe,
    )
    return ctx


async def entropy_tabulate(ctx: Context) -> Context:
    """time,cell,violation_pos_log10,violation_neg_log10."""
    trace: EntropyTrace = ctx.get("trace") or EntropyTrace()
    rows = []
    for t, pos, neg in zip(trace.times, trace.violation_pos, trace.violation_neg):
        rows.extend([t, cell, p, n] for cell, (p, n) in enumerate(zip(pos, neg)))
    ctx["header"] = ["time", "cell", "violation_pos_log10", "violation_neg_log10"]
    ctx["rows"] = rows
    return ctx


# }}}


# {{{ dafermos


async def dafermos_study(ctx: Context) -> Context:
    """Total entropy of DDG and DRKDG runs next to a fine Godunov reference."""
    config: RunConfig = ctx["config"]
    law, ic = ctx["law"], ctx["ic"]
    schedule = config.schedule()
    entropies: Dict[str, List[float]] = {}
    times: List[float] = []
    for scheme in (Scheme.DDG, Scheme.DRKDG):
        state = prepare_state(ic, config.n_cells, config.p)
        solution = integrate(
            state,
            law,
            ctx["flux"],
            scheme,
            config.t_end,
            cfl=config.cfl,
            output_times=schedule,
            params=ctx["params"],
        )
        times = solution.times
        entropies[scheme.value] = [total_entropy_dg(solution.state_at(k, state.basis), law) for k in range(len(times))]
    reference = fv_solve(law, ic, config.reference_cells, REFERENCE_CFL, config.t_end, schedule)
    ctx["comparison"] = {
        "time": times,
        "ddg": entropies[Scheme.DDG.value],
        "drkdg": entropies[Scheme.DRKDG.value],
        "godunov": list(dafermos_comparison(times, reference.times, reference.entropy)),
    }
    return ctx


async def dafermos_tabulate(ctx: Context) -> Context:
    """time,entropy_ddg,entropy_drkdg,entropy_godunov."""
    comparison = ctx.get("comparison")
    rows = []
    if comparison is not None:
        rows = [list(r) for r in zip(comparison["time"], comparison["ddg"], comparison["drkdg"], comparison["godunov"])]
    ctx["header"] = ["time", "entropy_ddg", "entropy_drkdg", "entropy_godunov"]
    ctx["rows"] = rows
    return ctx


# }}}


# {{{ blowup


async def blowup_study(ctx: Context) -> Context:
    """Achieved simulation time over the (p, n_cells, cfl) grid."""
    config: RunConfig = ctx["config"]
    ctx["scan"] = blowup_scan(
        config.p_list,
        config.cfl_list,
        config.n_list,
        config.t_end,
        config.scheme.value,
        ic=ctx["ic"],
        law=ctx["law"],
    )
    return ctx


async def blowup_tabulate(ctx: Context) -> Context:
    """scheme,p,n_cells,cfl,achieved_time."""
    ctx["header"] = ["scheme", "p", "n_cells", "cfl", "achieved_time"]
    ctx["rows"] = [[r.scheme, r.p, r.n_cells, r.cfl, r.achieved_time] for r in ctx.get("scan", [])]
    return ctx


# }}}


_PIPELINES: Dict[Experiment, Sequence[Callable[..., Any]]] = {
    Experiment.RUN: (run_study, run_tabulate),
    Experiment.CONVERGE: (converge_study, converge_tabulate),
    Experiment.ENTROPY: (entropy_study, entropy_tabulate),
    Experiment.DAFERMOS: (dafermos_study, dafermos_tabulate),
    Experiment.BLOWUP: (blowup_study, blowup_tabulate),
}


def build_chain(experiment: Experiment) -> Chain:
    """prepare -> study -> tabulate -> write_csv, with blow-ups routed to record_blowup."""
    study, tabulate = _PIPELINES[Experiment(experiment)]
    chain = Chain(prepare, study, tabulate, write_csv, name=Experiment(experiment).value)
    chain.connect(study, record_blowup, is_blowup)
    chain.use(Logging())
    chain.use(Timing())
    return chain


def execute(config: RunConfig) -> int:
    """Run the experiment of `config`; 0 completed, 2 blow-up, 3 I/O failure, 1 for every other error."""
    chain = build_chain(config.experiment)
    result = asyncio.run(chain.run(Context(config=config)))
    exc = result.get("exception")
    if exc is None:
        return EXIT_OK if result.get("status") == "completed" else EXIT_BLOWUP
    if isinstance(exc, OSError):
        logger.error("cannot write output: %s", exc)
        return EXIT_IO
    if isinstance(exc, (UsageError, DafermosError, ValueError)):
        logger.error("%s", exc)
        return EXIT_USAGE
    logger.error("%s failed: %s: %s", config.experiment.value, type(exc).__name__, exc, exc_info=exc)
    return EXIT_USAGE


__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_BLOWUP",
    "EXIT_IO",
    "prepare",
    "record_blowup",
    "is_blowup",
    "write_csv",
    "build_chain",
    "execute",
]
