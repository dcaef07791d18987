from .base_emitter import BaseEmitter
from .are_report import AreReportEmitter
from .manifest import ManifestEmitter
from .tables import AmseeTableEmitter, MseeTableEmitter
from .trajectory import ErrorEmitter, TrajectoryEmitter

__all__ = [
    "BaseEmitter",
    "AreReportEmitter",
    "ManifestEmitter",
    "AmseeTableEmitter",
    "MseeTableEmitter",
    "ErrorEmitter",
    "TrajectoryEmitter",
]
