import argparse
import logging
import sys
from typing import List, Optional

import constants
from models.transform_models import TRANSFORM_NAMES
from services.command_service import CLASS_QUERIES, CommandService
from utils.config import settings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='cvxlab', description="Polyhedral convex functions: transforms, "
                                                                "Santalo-type products, positions and searches.")
    parser.add_argument('--version', action='version', version=f"%(prog)s {constants.VERSION}")
    parser.add_argument('--log-level', default=None, help="Overrides CVXLAB_LOG_LEVEL (DEBUG, INFO, ...).")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('transform', help="Apply the Legendre, polarity or gauge transform.")
    p.add_argument('--op', required=True, choices=sorted(TRANSFORM_NAMES))
    p.add_argument('-i', '--input', required=True)
    p.add_argument('-o', '--out', required=True)

    p = sub.add_parser('product', help="Compute P_L, P_A or P_J with its bound checks.")
    p.add_argument('--functional', required=True, choices=['L', 'A', 'J'])
    p.add_argument('-i', '--input', required=True)
    p.add_argument('--report', default=None, help="Report path; stdout when omitted.")

    p = sub.add_parser('normalize', help="Bring a function into S_e, S_1c or S_2.")
    p.add_argument('--class', dest='klass', required=True, choices=['even', 'centered', 'general'])
    p.add_argument('-i', '--input', required=True)
    p.add_argument('-o', '--out', required=True)
    p.add_argument('--cert', default=None, help="Certificate path; <out>.cert.json when omitted.")

    p = sub.add_parser('classify', help="Compute the class flags of a function.")
    p.add_argument('-i', '--input', required=True)
    p.add_argument('--report', default=None, help="Tags path; stdout when omitted.")
    p.add_argument('--query', default=None, choices=sorted(CLASS_QUERIES))
    p.add_argument('--no-john', action='store_true', help="Skip the John ellipsoid witness.")

    p = sub.add_parser('diag', help="Convergence diagnostics of a sequence of functions.")
    p.add_argument('kind', choices=['tau'])
    p.add_argument('--sequence', required=True, help="Directory of fn_000.json, fn_001.json, ...")
    p.add_argument('--limit', required=True)
    p.add_argument('--report', required=True)
    p.add_argument('--threshold', type=float, default=None)
    p.add_argument('--levels', type=float, nargs='+', default=None)
    p.add_argument('--radii', type=float, nargs='+', default=None)

    p = sub.add_parser('search', help="Extremizer search over a convex-function family.")
    p.add_argument('--functional', required=True, choices=['L', 'A', 'J'])
    p.add_argument('--objective', default='max', choices=['max', 'min'])
    p.add_argument('--class', dest='klass', default='even', choices=['even', 'centered'])
    p.add_argument('--dim', type=int, default=1, choices=[1, 2])
    p.add_argument('--knots', type=int, default=8)
    p.add_argument('--radius', type=float, default=8.0)
    p.add_argument('--extended', action='store_true', help="Continue the last slope instead of truncating.")
    p.add_argument('--free-origin', action='store_true', help="Let the value at 0 vary.")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--restarts', type=int, default=None)
    p.add_argument('--max-iters', type=int, default=None)
    p.add_argument('--oracle', action='store_true', help="Also run the brute-force lattice oracle.")
    p.add_argument('--oracle-resolution', type=int, default=None)
    p.add_argument('--no-oracle-refine', action='store_true', help="Report the lattice optimum without refining it.")
    p.add_argument('--out', required=True)

    p = sub.add_parser('plot', help="Render a function on R or R^2 as SVG.")
    p.add_argument('-i', '--input', required=True)
    p.add_argument('-o', '--out', required=True)
    p.add_argument('--levels', type=float, nargs='+', default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors are input errors; --help and --version exit cleanly
        return constants.EXIT_OK if not e.code else constants.EXIT_IO_ERROR

    logging.basicConfig(level=(args.log_level or settings.LOG_LEVEL).upper(),
                        format='%(asctime)s - %(levelname)s - %(message)s')
    logging.getLogger("cvxpy").setLevel(logging.WARNING)
    logging.getLogger("matplotlib").setLevel(logging.WARNING)

    return CommandService(argv).run(args)


if __name__ == "__main__":
    sys.exit(main())
