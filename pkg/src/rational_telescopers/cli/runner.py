"""
Command-line runner: requests in, JSON documents out.

Exit codes: 0 when every request was decided, 2 when one was unsupported,
3 on input errors and 1 on anything unexpected; a batch reports the most
severe code.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.algebra import GroupSpec, Kind, format_poly, format_ratfun
from ..core.equivalence import orbit_partition
from ..core.exactness import EXACTNESS_PAIRS, is_exact
from ..core.existence import TelescoperType, decide, verify_telescoper
from ..core.reductions import abramov_reduce, hermite_reduce, q_abramov_reduce
from ..core.solvers import SolverBounds
from ..exceptions.telescoping_exceptions import TelescopingError, VerificationError
from ..utils.logging_config import get_logger, setup_logging
from .parser import parse_expression, parse_operator

logger = get_logger(__name__)

COMMANDS = ("decide", "exact", "reduce", "orbits", "verify")

EXIT_DECIDED = 0
EXIT_UNEXPECTED = 1
EXIT_UNSUPPORTED = 2
EXIT_INPUT_ERROR = 3
EXIT_INTERRUPTED = 130

# order in which exit codes dominate a batch
SEVERITY = {EXIT_DECIDED: 0, EXIT_UNSUPPORTED: 1, EXIT_INPUT_ERROR: 2, EXIT_UNEXPECTED: 3}


@dataclass(frozen=True)
class Request:
    """
    One unit of work.

    Attributes:
        command: One of COMMANDS
        target: Telescoper type, exactness pair, reduction operator or group
        expression: The rational function as text
        bounds: Solver bounds
        check_factors: Validate the written factors instead of trusting them
        telescoper: Operator text for ``verify``
    """

    command: str
    target: str
    expression: str
    bounds: SolverBounds = field(default_factory=SolverBounds)
    check_factors: bool = False
    telescoper: Optional[str] = None


@dataclass(frozen=True)
class Response:
    document: Dict[str, Any]
    exit_code: int


def _operator_token(token: str, var: str) -> Kind:
    token = token.strip()
    if token.startswith("q") and len(token) == 3 and token[1].upper() == "S":
        token = "T" + token[2:]
    if len(token) != 2 or token[1] != var or token[0].upper() not in ("D", "S", "T"):
        raise ValueError(f"expected an operator on {var}, got {token!r}")
    return Kind(token[0].upper())


def parse_pair(text: str) -> Tuple[Kind, Kind]:
    """
    Parse an exactness pair such as ``"Sy,Dz"``.

    Raises:
        ValueError: On malformed or unsupported pairs
    """
    tokens = text.split(",")
    if len(tokens) != 2:
        raise ValueError(f"an exactness pair names two operators, got {text!r}")
    pair = (_operator_token(tokens[0], "y"), _operator_token(tokens[1], "z"))
    if pair not in EXACTNESS_PAIRS:
        raise ValueError(f"no exactness test for {text!r}")
    return pair


def _decide(request: Request) -> Response:
    t = TelescoperType.parse(request.target)
    f, den = parse_expression(request.expression, request.check_factors)
    verdict = decide(f, t, den, request.bounds)
    return Response(verdict.to_dict(str(t)), EXIT_DECIDED if verdict.decided else EXIT_UNSUPPORTED)


def _exact(request: Request) -> Response:
    pair = parse_pair(request.target)
    f, den = parse_expression(request.expression, request.check_factors)
    verdict = is_exact(f, pair, den, request.bounds)
    document: Dict[str, Any] = {"type": f"{pair[0].value}y,{pair[1].value}z", "verdict": verdict.status}
    if verdict.is_exact:
        document["certificates"] = [format_ratfun(verdict.u), format_ratfun(verdict.v)]
    if verdict.reason is not None:
        document["reason"] = verdict.reason.value
    if verdict.branch is not None:
        document["branch"] = verdict.branch.value
    if verdict.detail is not None:
        document["detail"] = verdict.detail
    return Response(document, EXIT_UNSUPPORTED if verdict.status == "unsupported" else EXIT_DECIDED)


def _reduce(request: Request) -> Response:
    token = request.target.strip()
    var = token[-1:]
    if var not in ("x", "y", "z"):
        raise ValueError(f"expected a reduction operator such as Dz, got {token!r}")
    kind = _operator_token(token, var)
    f, _ = parse_expression(request.expression, request.check_factors)
    document: Dict[str, Any] = {"type": f"{kind.value}{var}"}
    if kind == Kind.D:
        red = hermite_reduce(f, var)
    elif kind == Kind.S:
        red = abramov_reduce(f, var)
    else:
        red = q_abramov_reduce(f, var)
    document["certificate"] = format_ratfun(red.certificate)
    document["remainder"] = format_ratfun(red.remainder)
    return Response(document, EXIT_DECIDED)


def _orbits(request: Request) -> Response:
    group = GroupSpec.parse(request.target)
    _, den = parse_expression(request.expression, request.check_factors)
    orbits = orbit_partition([p for p, _ in den.factors_in("z")], group)
    document = {
        "group": str(group),
        "orbits": [
            {
                "representative": format_poly(orbit.representative),
                "members": [
                    {
                        "factor": format_poly(m.factor),
                        "element": dict(m.exponents),
                        "scalar": format_ratfun(m.scalar),
                    }
                    for m in orbit.members
                ],
            }
            for orbit in orbits
        ],
    }
    return Response(document, EXIT_DECIDED)


def _verify(request: Request) -> Response:
    if not request.telescoper:
        raise ValueError("verify needs a telescoper")
    t = TelescoperType.parse(request.target)
    operator = parse_operator(request.telescoper)
    f, den = parse_expression(request.expression, request.check_factors)
    outcome = verify_telescoper(operator, f, t, den=den, bounds=request.bounds)
    status = "undecided" if outcome.undecided else "verified" if outcome.ok else "rejected"
    document: Dict[str, Any] = {"type": str(t), "verdict": status, "telescoper": str(operator)}
    if outcome.certificates is not None:
        document["certificates"] = [format_ratfun(c) for c in outcome.certificates]
    return Response(document, EXIT_UNSUPPORTED if outcome.undecided else EXIT_DECIDED)


HANDLERS = {
    "decide": _decide,
    "exact": _exact,
    "reduce": _reduce,
    "orbits": _orbits,
    "verify": _verify,
}


def run(request: Request) -> Response:
    """
    Execute one request; errors become documents with an ``error`` field.

    Returns:
        Response: The JSON-ready document and its exit code
    """
    if request.command not in HANDLERS:
        return Response({"error": f"unknown command {request.command!r}"}, EXIT_INPUT_ERROR)
    try:
        return HANDLERS[request.command](request)
    except VerificationError as e:
        logger.error(f"internal check failed for {request.expression!r}: {e}")
        return Response({"error": str(e), "kind": type(e).__name__}, EXIT_UNEXPECTED)
    except (TelescopingError, ValueError) as e:
        logger.warning(f"rejected {request.expression!r}: {e}")
        return Response({"error": str(e), "kind": type(e).__name__}, EXIT_INPUT_ERROR)


def parse_batch_line(line: str, defaults: Request) -> Request:
    """
    Read ``<command> <type-or-group> <expression>`` or a bare expression.

    A bare expression runs with the command and target of defaults.
    """
    parts = line.split(None, 2)
    if len(parts) == 3 and parts[0] in COMMANDS:
        return replace(defaults, command=parts[0], target=parts[1], expression=parts[2])
    return replace(defaults, expression=line.strip())


def run_batch(lines: Iterable[str], defaults: Request, jobs: int = 1) -> List[Response]:
    """
    Run one request per non-empty line, keeping input order.

    Lines starting with ``#`` are skipped.
    """
    requests = [
        parse_batch_line(line, defaults)
        for line in lines
        if line.strip() and not line.lstrip().startswith("#")
    ]
    logger.info(f"batch of {len(requests)} requests on {jobs} workers")
    if jobs <= 1:
        return [run(r) for r in requests]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run, requests))


def format_text(document: Dict[str, Any]) -> str:
    """One-line human summary of a document."""
    if "error" in document:
        return f"error: {document['error']}"
    if "orbits" in document:
        blocks = "; ".join(
            f"{o['representative']} ({len(o['members'])} members)" for o in document["orbits"]
        )
        return f"{document['group']}: {len(document['orbits'])} orbits: {blocks}"
    if "remainder" in document:
        return f"{document['type']}: certificate {document['certificate']}, remainder {document['remainder']}"
    line = f"{document['type']}: {document['verdict']}"
    if "telescoper" in document:
        line += f", L = {document['telescoper']}"
    code = document.get("reason") or document.get("branch")
    if code:
        line += f" ({code}"
        line += f" at {document['detail']})" if "detail" in document else ")"
    return line


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rational-telescopers",
        description="Decide telescoper existence for rational functions in x, y, z.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, default="decide")
    parser.add_argument("expression", nargs="?", help="rational function, e.g. 'x/(z^2-y)'")
    parser.add_argument("--type", dest="target", help="telescoper type or pair, e.g. Sx,Dy,Dz")
    parser.add_argument("--group", help="group for the orbits command, e.g. tx,sy")
    parser.add_argument("--bounds", default="12:8:6", help="solver bounds N:M:B")
    factors = parser.add_mutually_exclusive_group()
    factors.add_argument("--trust-factors", dest="check_factors", action="store_false")
    factors.add_argument("--check-factors", dest="check_factors", action="store_true")
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", dest="text", action="store_false")
    output.add_argument("--text", dest="text", action="store_true")
    parser.add_argument("--batch", metavar="FILE", help="one request per line")
    parser.add_argument("--jobs", type=int, default=1, help="parallel batch workers")
    parser.add_argument("--telescoper", help="operator for verify, e.g. 'x*Sx - (x+1)'")
    parser.add_argument("--log-file", help="also log to this file")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    parser.set_defaults(check_factors=False, text=False)
    return parser


def _emit(responses: Sequence[Response], text: bool) -> int:
    for response in responses:
        print(format_text(response.document) if text else json.dumps(response.document))
    return max((r.exit_code for r in responses), key=SEVERITY.__getitem__, default=EXIT_DECIDED)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the command line.

    Returns:
        int: The process exit code
    """
    args = build_arg_parser().parse_args(argv)
    setup_logging(args.log_file, level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        bounds = SolverBounds.parse(args.bounds)
        target = args.group if args.command == "orbits" and args.group else args.target
        defaults = Request(
            args.command,
            target or "",
            args.expression or "",
            bounds,
            args.check_factors,
            args.telescoper,
        )
        if args.batch:
            with open(args.batch, encoding="utf-8") as handle:
                responses = run_batch(handle.readlines(), defaults, args.jobs)
        else:
            if not args.expression or not target:
                print("an expression and --type (or --group) are required", file=sys.stderr)
                return EXIT_INPUT_ERROR
            responses = [run(defaults)]
        return _emit(responses, args.text)
    except (ValueError, OSError) as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_INTERRUPTED
    except Exception as e:
        print(f"Unexpected error: {e}", file=sys.stderr)
        return EXIT_UNEXPECTED
