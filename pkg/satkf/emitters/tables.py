from collections.abc import Mapping, Sequence

from satkf.emitters.base_emitter import BaseEmitter
from satkf.emitters.markdown import render_amsee_table, render_msee_table
from satkf.estimation.metrics import AmseeRecord, MseeRecord
from satkf.estimation.orbit import MeasurementType
from satkf.utils import write_file


class MseeTableEmitter(BaseEmitter):
    """Per-run MSEE tables, one file per measurement type"""

    FILENAME = "msee.md"

    def create(self):
        body = "\n".join(
            render_msee_table(records, mtype) for mtype, records in self.records.items()
        )
        write_file(self.path, body)

    def configure(self, records: Mapping[MeasurementType, Sequence[MseeRecord]], **kwargs):
        self.records = records


class AmseeTableEmitter(BaseEmitter):
    """Averaged MSEE of both filters side by side"""

    FILENAME = "amsee.md"

    def create(self):
        write_file(self.path, render_amsee_table(self.averages))

    def configure(self, averages: Mapping[MeasurementType, AmseeRecord], **kwargs):
        self.averages = averages
