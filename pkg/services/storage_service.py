import hashlib
import logging
from pathlib import Path
from typing import Dict, List, Type, TypeVar

from pydantic import BaseModel

import constants
from logic.exceptions import ImproperInput
from logic.function import PolyhedralConvexFunction
from models.function_models import FunctionModel

logger = logging.getLogger(__name__)

ModelT = TypeVar('ModelT', bound=BaseModel)


class StorageService:
    """
    Reads and writes the JSON documents of one CLI run and remembers what it touched,
    so the run manifest can list input hashes and output paths.
    """

    def __init__(self):
        self.input_hashes: Dict[str, str] = {}
        self.outputs: List[str] = []

    def _read_bytes(self, path: Path) -> bytes:
        data = Path(path).read_bytes()
        self.input_hashes[str(path)] = hashlib.sha256(data).hexdigest()
        logger.info(f"Read {path} ({len(data)} bytes)")
        return data

    def read_model(self, path: Path, model: Type[ModelT]) -> ModelT:
        return model.model_validate_json(self._read_bytes(path))

    def read_function(self, path: Path) -> PolyhedralConvexFunction:
        return PolyhedralConvexFunction.from_model(self.read_model(path, FunctionModel))

    def read_sequence(self, directory: Path) -> List[PolyhedralConvexFunction]:
        """Terms fn_000.json, fn_001.json, ... of a sequence directory, in file-name order."""
        directory = Path(directory)
        if not directory.is_dir():
            raise NotADirectoryError(f"Sequence directory {directory} does not exist.")
        paths = sorted(directory.glob(constants.SEQUENCE_GLOB))
        if not paths:
            raise ImproperInput(f"No {constants.SEQUENCE_GLOB} files in {directory}.")
        return [self.read_function(p) for p in paths]

    def write_text(self, path: Path, text: str, record: bool = True):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
        if record:
            self.outputs.append(str(path))
        logger.info(f"Wrote {path}")

    def write_model(self, path: Path, document: BaseModel, record: bool = True):
        self.write_text(path, document.model_dump_json(indent=2), record=record)

    def write_function(self, path: Path, phi: PolyhedralConvexFunction):
        self.write_model(path, phi.to_model())


def sidecar_path(path: Path, suffix: str) -> Path:
    """out.json -> out.manifest.json (or out.error.json)."""
    path = Path(path)
    return path.with_name(path.stem + suffix)
