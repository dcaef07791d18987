from collections.abc import Mapping, Sequence

import numpy as np

from satkf.emitters.templates import (
    AMSEE_TABLE_TEMPLATE,
    ARE_REPORT_TEMPLATE,
    MSEE_TABLE_TEMPLATE,
)
from satkf.estimation.filters import SteadyState
from satkf.estimation.metrics import AmseeRecord, MseeRecord, amsee
from satkf.estimation.orbit import MeasurementType
from satkf.utils import fmt4

STATES = ["x1", "x2", "x3", "x4"]


def markdown_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """GitHub-flavored pipe table"""
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(["---"] * len(header)) + "|",
    ]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines)


def render_msee_table(records: Sequence[MseeRecord], mtype: MeasurementType) -> str:
    """per-run Γ for every state plus the averaged column"""
    averaged = amsee(records)
    header = ["State"] + [str(r.run_index + 1) for r in records] + ["Averaged"]
    rows = [
        [state] + [fmt4(r.Gamma[i]) for r in records] + [fmt4(averaged.Xi_Gamma[i])]
        for i, state in enumerate(STATES)
    ]
    return MSEE_TABLE_TEMPLATE.format(mtype=mtype.value, table=markdown_table(header, rows))


def render_amsee_table(results: Mapping[MeasurementType, AmseeRecord]) -> str:
    header = ["State"]
    for mtype in results:
        header += [f"{mtype.value} Ξ_κ", f"{mtype.value} Ξ_Γ"]

    rows = []
    for i, state in enumerate(STATES):
        row = [state]
        for record in results.values():
            row += [fmt4(record.Xi_kappa[i]), fmt4(record.Xi_Gamma[i])]
        rows.append(row)

    return AMSEE_TABLE_TEMPLATE.format(table=markdown_table(header, rows))


def render_are_report(steady: SteadyState, mtype: MeasurementType, tol: float) -> str:
    hint = ""
    if steady.marginal:
        hint = (
            "\n\nThe closed loop is marginal, so the steady gain is effectively zero. "
            "Add process noise (--delta) to get a usable constant gain."
        )
    p_rows = [[state] + [f"{v:.8g}" for v in steady.P_inf[i]] for i, state in enumerate(STATES)]
    return ARE_REPORT_TEMPLATE.format(
        mtype=mtype.value,
        tol=tol,
        iterations=steady.iterations,
        residual=steady.residual,
        p_table=markdown_table([""] + STATES, p_rows),
        gain=np.array2string(steady.K_inf, precision=8, separator=", "),
        rho=steady.rho,
        status="converged" if steady.converged else "iteration cap reached",
        verdict="stabilizing" if steady.stabilizing else "not stabilizing",
        hint=hint,
        unobservable=", ".join(STATES[j] for j in steady.unobservable) or "none",
    )
