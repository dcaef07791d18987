from satkf.emitters.base_emitter import BaseEmitter
from satkf.emitters.markdown import render_are_report
from satkf.estimation.filters import SteadyState
from satkf.estimation.orbit import MeasurementType
from satkf.utils import write_file


class AreReportEmitter(BaseEmitter):
    """P_inf, K_inf, closed-loop spectral radius and iteration count"""

    FILENAME = "are_report.md"

    def create(self):
        write_file(self.path, render_are_report(self.steady, self.mtype, self.tol))

    def configure(self, steady: SteadyState, mtype: MeasurementType, tol: float, **kwargs):
        self.steady = steady
        self.mtype = mtype
        self.tol = tol
