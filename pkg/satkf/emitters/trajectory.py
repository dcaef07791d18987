import numpy as np

from satkf.emitters.base_emitter import BaseEmitter
from satkf.estimation.harness import RunResult
from satkf.utils import write_csv

TRAJECTORY_HEADER = (
    ["k", "t", "x1", "x2", "x3", "x4"]
    + [f"ckf_x{i}" for i in range(1, 5)]
    + [f"mukf_x{i}" for i in range(1, 5)]
    + ["y", "innov"]
)

ERROR_HEADER = (
    ["k"] + [f"beta{i}" for i in range(1, 5)] + [f"gamma{i}" for i in range(1, 5)]
)


class TrajectoryEmitter(BaseEmitter):
    """
    Per-step truth, both filters' estimates, the measurement and the
    innovation of one run.
    """

    FILENAME = "trajectory.csv"

    def create(self):
        r = self.result
        k = np.arange(len(r.measurements))
        columns = [k, k * self.h, r.truth, r.ckf_states, r.mukf_estimates, r.measurements, r.innovations]
        write_csv(self.path, TRAJECTORY_HEADER, columns)

    def configure(self, result: RunResult, h: float, **kwargs):
        self.result = result
        self.h = h


class ErrorEmitter(BaseEmitter):
    """Per-step absolute errors of both filters"""

    FILENAME = "errors.csv"

    def create(self):
        trace = self.result.trace
        k = np.arange(len(trace))
        write_csv(self.path, ERROR_HEADER, [k, trace.beta, trace.gamma])

    def configure(self, result: RunResult, **kwargs):
        self.result = result
