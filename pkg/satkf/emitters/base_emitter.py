from abc import ABC, abstractmethod
from pathlib import Path


class BaseEmitter(ABC):
    FILENAME: str = ""

    def __init__(self, location):
        self.location = Path(location) if not isinstance(location, Path) else location

    @property
    def path(self) -> Path:
        return self.location / self.FILENAME

    @abstractmethod
    def create(self):
        """Write the file."""
        pass

    def configure(self, **kwargs):
        """Optional hook"""
        pass
