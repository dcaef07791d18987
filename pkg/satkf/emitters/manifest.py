from satkf.core.config import ExperimentConfig, render_run_manifest
from satkf.emitters.base_emitter import BaseEmitter
from satkf.utils import write_file


class ManifestEmitter(BaseEmitter):
    """Resolved configuration of the run, as TOML"""

    FILENAME = "run.toml"

    def create(self):
        write_file(self.path, render_run_manifest(self.cfg, self.command))

    def configure(self, cfg: ExperimentConfig, command: str, **kwargs):
        self.cfg = cfg
        self.command = command
