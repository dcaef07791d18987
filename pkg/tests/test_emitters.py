import numpy as np
import pytest
import tomlkit

from satkf.core.config import ExperimentConfig
from satkf.core.errors import OutputError
from satkf.emitters import (
    AmseeTableEmitter,
    AreReportEmitter,
    ErrorEmitter,
    ManifestEmitter,
    MseeTableEmitter,
    TrajectoryEmitter,
)
from satkf.emitters.markdown import render_amsee_table, render_are_report, render_msee_table
from satkf.estimation.filters import SteadyState
from satkf.estimation.harness import run_once
from satkf.estimation.metrics import MseeRecord, amsee
from satkf.estimation.orbit import MeasurementType
from satkf.utils import emit

TRAJECTORY_HEADER = "k,t,x1,x2,x3,x4,ckf_x1,ckf_x2,ckf_x3,ckf_x4,mukf_x1,mukf_x2,mukf_x3,mukf_x4,y,innov"


@pytest.fixture
def short_run(type1_cfg):
    return run_once(type1_cfg.model_copy(update={"n": 5}))


@pytest.fixture
def ten_records():
    return [MseeRecord(kappa=np.full(4, 0.001 * j), Gamma=np.full(4, 0.001 * j), run_index=j) for j in range(10)]


def test_trajectory_csv(tmp_path, short_run):
    path = emit(tmp_path, TrajectoryEmitter, result=short_run, h=0.01)
    lines = path.read_text().splitlines()
    assert lines[0] == TRAJECTORY_HEADER
    assert len(lines) == 6
    first = lines[1].split(",")
    assert first[0] == "0" and float(first[1]) == 0.0
    assert float(lines[2].split(",")[1]) == pytest.approx(0.01)
    assert len(first) == 16


def test_trajectory_follows_scored_reference(tmp_path, type1_cfg):
    result = run_once(type1_cfg.model_copy(update={"n": 5, "gamma_reference": "prior"}))
    path = emit(tmp_path, TrajectoryEmitter, result=result, h=0.01)
    rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
    mukf = np.array([[float(v) for v in row[10:14]] for row in rows])
    assert np.array_equal(mukf[0], type1_cfg.x0_mean)
    assert np.allclose(mukf, np.vstack([m.x_bar for m in result.mukf_states]), rtol=1e-9, atol=1e-12)
    assert np.allclose(np.abs(result.truth - mukf), result.trace.gamma, atol=1e-9)


def test_error_csv(tmp_path, short_run):
    path = emit(tmp_path, ErrorEmitter, result=short_run)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,beta1,beta2,beta3,beta4,gamma1,gamma2,gamma3,gamma4"
    assert np.allclose(
        [float(v) for v in lines[1].split(",")[1:5]], short_run.trace.beta[0], rtol=1e-9
    )


def test_msee_table_layout(ten_records):
    text = render_msee_table(ten_records, MeasurementType.TYPE1)
    rows = [line for line in text.splitlines() if line.startswith("| x")]
    assert len(rows) == 4
    cells = [c.strip() for c in rows[0].strip("|").split("|")]
    assert len(cells) == 12
    assert cells[-1] == "0.0045"


def test_amsee_table_lists_both_types(ten_records):
    text = render_amsee_table(
        {MeasurementType.TYPE1: amsee(ten_records), MeasurementType.TYPE2: amsee(ten_records)}
    )
    assert "type1 Ξ_κ" in text and "type2 Ξ_Γ" in text
    assert text.count("| x") == 4


def test_table_emitters(tmp_path, ten_records):
    records = {MeasurementType.TYPE1: ten_records}
    averages = {MeasurementType.TYPE1: amsee(ten_records)}
    emit(tmp_path, MseeTableEmitter, records=records, averages=averages)
    emit(tmp_path, AmseeTableEmitter, records=records, averages=averages)
    assert "Averaged" in (tmp_path / "msee.md").read_text()
    assert "AMSEE" in (tmp_path / "amsee.md").read_text()


def test_are_report(tmp_path):
    steady = SteadyState(
        P_inf=0.01 * np.eye(4), K_inf=np.array([0.1, 0.2, 0.0, 0.0]), rho=0.97,
        iterations=42,
        residual=5e-11,
        unobservable=(2,),
    )
    emit(tmp_path, AreReportEmitter, steady=steady, mtype=MeasurementType.TYPE1, tol=1e-10)
    text = (tmp_path / "are_report.md").read_text()
    assert "42" in text
    assert "converged)" in text
    assert "0.97000000 (stabilizing)" in text
    assert "Unobservable states: x3" in text
    assert "effectively zero" not in text


def test_are_report_flags_marginal_gain():
    steady = SteadyState(
        P_inf=np.eye(4),
        K_inf=np.zeros(4),
        rho=1.0 - 1e-6,
        iterations=200_000,
        residual=3e-7,
        converged=False,
        unobservable=(2,),
    )
    text = render_are_report(steady, MeasurementType.TYPE1, 1e-10)
    assert "iteration cap reached" in text
    assert "(stabilizing)" in text
    assert "effectively zero" in text
    assert "--delta" in text


def test_manifest(tmp_path):
    cfg = ExperimentConfig(seed=17)
    emit(tmp_path, ManifestEmitter, cfg=cfg, command="tables")
    doc = tomlkit.parse((tmp_path / "run.toml").read_text())
    assert doc["experiment"]["seed"] == 17


def test_unwritable_location(tmp_path, short_run):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OutputError) as err:
        emit(blocker, ErrorEmitter, result=short_run)
    assert err.value.exit_code == 5
