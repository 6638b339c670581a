import argparse
import logging
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

import constants
from clients.exceptions import SolverError
from logic.classify import classify
from logic.exceptions import CvxLabError
from logic.measure import product
from logic.position import normalize_centered, normalize_even, normalize_general
from logic.search import run_search
from logic.tau import diagnose_sequence
from logic.transforms import apply
from models.function_models import ClassTags
from models.run_models import ErrorReport, RunManifest
from models.search_models import FamilySpec, Objective, SearchConfig
from models.tau_models import DiagnoseConfig
from models.transform_models import TRANSFORM_NAMES
from services.plot_service import render_svg
from services.storage_service import StorageService, sidecar_path
from utils.config import settings

logger = logging.getLogger(__name__)

NORMALIZERS = {
    "even": normalize_even,
    "centered": normalize_centered,
    "general": normalize_general,
}

CLASS_QUERIES: Dict[str, Callable[[ClassTags], bool]] = {
    "cvx0": lambda t: t.is_cvx0,
    "even": lambda t: t.is_even,
    "centered": lambda t: t.centered,
    "Se": lambda t: t.in_Se,
    "S1": lambda t: t.in_S1,
    "S1c": lambda t: t.in_S1c,
    "S2": lambda t: t.in_S2,
}


def _default_output(args: argparse.Namespace) -> Path:
    """Where a command without an explicit output keeps its sidecar files: next to its input."""
    source = Path(getattr(args, 'input', None) or getattr(args, 'limit', None) or '.')
    return source.with_name(f"{source.stem}.{args.command}.json")


def _primary_output(args: argparse.Namespace) -> Path:
    for name in ('out', 'report'):
        value = getattr(args, name, None)
        if value:
            return Path(value)
    return _default_output(args)


class CommandService:
    """Runs one CLI command, maps failures to exit codes and writes the run manifest."""

    def __init__(self, argv: List[str]):
        self.argv = list(argv)
        self.storage = StorageService()

    def run(self, args: argparse.Namespace) -> int:
        handler = getattr(self, f"cmd_{args.command}")
        started_at = datetime.now(timezone.utc).isoformat()
        start = time.perf_counter()
        try:
            exit_code = handler(args)
        except (CvxLabError, SolverError) as e:
            code = getattr(e, 'code', type(e).__name__)
            logger.error(f"{args.command} failed: {code}: {e}")
            self._write_error(args, code, str(e))
            exit_code = constants.EXIT_DOMAIN_ERROR
        except (OSError, ValueError) as e:
            # ValidationError and JSONDecodeError are both ValueErrors
            code = "ValidationError" if isinstance(e, ValidationError) else type(e).__name__
            logger.error(f"{args.command} could not read or write its files: {e}")
            self._write_error(args, code, str(e))
            exit_code = constants.EXIT_IO_ERROR

        manifest = RunManifest(
            command=self.argv,
            inputs=self.storage.input_hashes,
            version=constants.VERSION,
            seed=getattr(args, 'seed', None),
            started_at=started_at,
            wall_time=time.perf_counter() - start,
            outputs=self.storage.outputs,
            exit_code=exit_code
        )
        try:
            self.storage.write_model(sidecar_path(_primary_output(args), constants.MANIFEST_SUFFIX), manifest,
                                     record=False)
        except OSError as e:
            logger.error(f"Could not write the run manifest: {e}")
            exit_code = exit_code or constants.EXIT_IO_ERROR
        return exit_code

    def _write_error(self, args: argparse.Namespace, code: str, message: str):
        report = ErrorReport(error=code, message=message, command=args.command)
        try:
            self.storage.write_model(sidecar_path(_primary_output(args), constants.ERROR_SUFFIX), report)
        except OSError as e:
            logger.error(f"Could not write the error report: {e}")

    def _emit(self, path: Optional[str], document) -> None:
        """Write a report to `path`, or to stdout when no path was given."""
        if path:
            self.storage.write_model(Path(path), document)
        else:
            sys.stdout.write(document.model_dump_json(indent=2) + "\n")

    # --- commands ---

    def cmd_transform(self, args: argparse.Namespace) -> int:
        phi = self.storage.read_function(Path(args.input))
        result = apply(phi, TRANSFORM_NAMES[args.op]).canonical()
        self.storage.write_function(Path(args.out), result)
        return constants.EXIT_OK

    def cmd_product(self, args: argparse.Namespace) -> int:
        phi = self.storage.read_function(Path(args.input))
        report = product(phi, args.functional)
        logger.info(f"P_{args.functional} = {report.product}")
        self._emit(args.report, report)
        return constants.EXIT_OK

    def cmd_normalize(self, args: argparse.Namespace) -> int:
        phi = self.storage.read_function(Path(args.input))
        certificate, normalized = NORMALIZERS[args.klass](phi)
        if certificate.near_boundary:
            logger.warning(f"Certificate margins {certificate.margins} are within tolerance of the boundary.")
        self.storage.write_function(Path(args.out), normalized)
        cert_path = Path(args.cert) if args.cert else sidecar_path(Path(args.out), ".cert.json")
        self.storage.write_model(cert_path, certificate)
        return constants.EXIT_OK

    def cmd_classify(self, args: argparse.Namespace) -> int:
        phi = self.storage.read_function(Path(args.input))
        tags = classify(phi, with_john=not args.no_john)
        if args.query:
            logger.info(f"{args.query}: {CLASS_QUERIES[args.query](tags)}")
        self._emit(args.report, tags)
        return constants.EXIT_OK

    def cmd_diag(self, args: argparse.Namespace) -> int:
        sequence = self.storage.read_sequence(Path(args.sequence))
        limit = self.storage.read_function(Path(args.limit))
        overrides = {}
        if args.threshold is not None:
            overrides['threshold'] = args.threshold
        if args.levels:
            overrides['levels'] = args.levels
        if args.radii:
            overrides['radii'] = args.radii
        report = diagnose_sequence(sequence, limit, DiagnoseConfig(**overrides))
        logger.info(f"Sequence of {len(sequence)} terms {'passed' if report.passed else 'did not pass'}: "
                    f"{report.verdicts}")
        self.storage.write_model(Path(args.report), report)
        return constants.EXIT_OK

    def cmd_search(self, args: argparse.Namespace) -> int:
        spec = FamilySpec(
            n=args.dim,
            symmetry=args.klass,
            parametrization="radial" if args.dim == 2 else "grid",
            knots=args.knots,
            domain_radius=args.radius,
            extended=args.extended,
            anchor_origin=not args.free_origin
        )
        objective = Objective(functional=args.functional, direction=args.objective)
        overrides = {}
        if args.restarts is not None:
            overrides['restarts'] = args.restarts
        if args.max_iters is not None:
            overrides['max_iters'] = args.max_iters
        if args.oracle_resolution is not None:
            overrides['oracle_resolution'] = args.oracle_resolution
        config = SearchConfig(seed=args.seed, oracle=args.oracle, oracle_refine=not args.no_oracle_refine, **overrides)
        result = run_search(spec, objective, config)
        logger.info(f"Best {args.objective} of P_{args.functional}: {result.value}")
        self.storage.write_model(Path(args.out), result)
        return constants.EXIT_OK

    def cmd_plot(self, args: argparse.Namespace) -> int:
        phi = self.storage.read_function(Path(args.input))
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        render_svg(phi, out, args.levels or settings.PLOT_LEVELS)
        self.storage.outputs.append(str(out))
        return constants.EXIT_OK
