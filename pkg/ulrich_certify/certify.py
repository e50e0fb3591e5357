#!/usr/bin/env python3
import argparse
from collections.abc import Sequence
from datetime import UTC, datetime
import logging
import sys

from opentelemetry import trace
from opentelemetry.trace import Tracer

from notifications import send_finished_notification
from ulrich_lib.certificates import ALL, CERTIFICATE_IDS, CERTIFICATES, CertificateRunner, expand_ids
from ulrich_lib.diophantine import solve_632num, solve_conto
from ulrich_lib.models import (
    INSTRUMENTATION_NAME,
    INSTRUMENTATION_VERSION,
    Certificate,
    CertificationLimits,
    CheckLog,
    VarietyParams,
)
from ulrich_lib.output import OutputFormat, render_certificates
from ulrich_lib.picard import PicardClass, PicardParseError, decide_effective, parse_picard_class
from ulrich_lib.settings import CertifySettings
from ulrich_lib.spans import setup_tracer
from ulrich_lib.ulrich_core import necessary_conditions

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SOLVE_TARGETS = ("conto", "632num")


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    output.add_argument("--envelope", action="store_true", help="Wrap the output with a generated_at timestamp")

    parser = argparse.ArgumentParser(description="Replay the exact certificates of the T_X(k) Ulrich classification")
    commands = parser.add_subparsers(dest="command", required=True)

    certify = commands.add_parser("certify", parents=[output], help="Build and verify certificates")
    certify.add_argument("ids", nargs="+", choices=[*CERTIFICATE_IDS, ALL], metavar="ID")
    certify.add_argument("--jobs", type=int, default=None, help="Worker threads")
    certify.add_argument("--a-max", type=int, default=None, help="Bound of the four-square scan")
    certify.add_argument("--max-c", type=int, default=None, help="Largest c of the quadric construction")
    certify.add_argument("--k-max", type=int, default=None, help="Largest odd k of the elliptic construction")
    certify.add_argument("--d-max", type=int, default=None, help="Degree bound of the feasibility table")

    solve = commands.add_parser("solve", parents=[output], help="Enumerate the solutions of a Diophantine system")
    solve.add_argument("target", choices=SOLVE_TARGETS)
    solve.add_argument("--a-max", type=int, default=None)

    check = commands.add_parser("check", parents=[output], help="Run every applicable necessary condition")
    for name in ("n", "d", "g", "k"):
        check.add_argument(f"--{name}", type=int, required=True)
    for name in ("KH", "K2", "c2", "chi"):
        check.add_argument(f"--{name}", type=int, default=None)

    picard = commands.add_parser("picard", help="Divisor classes on blowups of the plane")
    picard_commands = picard.add_subparsers(dest="picard_command", required=True)
    eff = picard_commands.add_parser("eff", parents=[output], help="Decide effectivity of (a; b1,...,br)")
    eff.add_argument("picard_class")

    commands.add_parser("list", help="List certificate ids")
    return parser


def resolve_limits(args: argparse.Namespace, settings: CertifySettings) -> CertificationLimits:
    def pick(flag: str, configured: int) -> int:
        value = getattr(args, flag, None)
        return configured if value is None else int(value)

    return CertificationLimits(
        amax=pick("a_max", settings.amax),
        extended_amax=settings.extended_amax,
        max_c=pick("max_c", settings.max_c),
        max_odd_k=pick("k_max", settings.max_odd_k),
        grado_d_max=pick("d_max", settings.grado_d_max),
    )


def make_tracer(settings: CertifySettings) -> Tracer:
    if settings.collector_base_url is None or settings.endpoint_code is None:
        logging.debug("Tracing disabled: collector_base_url or endpoint_code not configured")
        return trace.get_tracer(INSTRUMENTATION_NAME, INSTRUMENTATION_VERSION)
    return setup_tracer(collector_base_url=settings.collector_base_url, endpoint_code=settings.endpoint_code)


def solve_certificate(target: str, limits: CertificationLimits) -> Certificate:
    if target == "conto":
        classes = [PicardClass(s.a, s.c) for s in solve_conto(limits.amax)]
    else:
        classes = [PicardClass(s.a, s.b) for s in solve_632num()]
    log = CheckLog()
    log.witness("solutions", tuple(x.render() for x in classes))
    log.witness("count", len(classes))
    return log.certificate(f"solve-{target}", refutation=False)


def check_certificate(params: VarietyParams) -> Certificate:
    log = CheckLog()
    for check in necessary_conditions(params):
        log.holds(check.name, check.passed)
        log.witness(check.name, check.detail)
    return log.certificate("check", refutation=False)


def effectivity_certificate(text: str) -> Certificate:
    divisor = parse_picard_class(text)
    verdict = decide_effective(divisor)
    log = CheckLog()
    log.witness("class", divisor.render())
    log.witness("effective", verdict.effective)
    log.witness("h0", verdict.h0)
    log.witness("reduction", tuple(e.render() for e in verdict.trace))
    return log.certificate("picard-eff", refutation=False)


def list_certificates() -> str:
    width = max(len(certificate_id) for certificate_id in CERTIFICATE_IDS)
    lines = [f"{spec.id.ljust(width)}  {spec.anchor}" for spec in CERTIFICATES.values()]
    lines.append(f"{ALL.ljust(width)}  every certificate above, in this order")
    return "\n".join(lines)


def run_command(args: argparse.Namespace, settings: CertifySettings) -> list[Certificate]:
    if args.command == "certify":
        limits = resolve_limits(args, settings)
        jobs = settings.jobs if args.jobs is None else args.jobs
        runner = CertificateRunner(make_tracer(settings), limits)
        certificates = runner.run_all(expand_ids(args.ids), jobs)
        if settings.notify_on_finish:
            send_finished_notification(certificates)
        return certificates
    if args.command == "solve":
        return [solve_certificate(args.target, resolve_limits(args, settings))]
    if args.command == "check":
        params = VarietyParams(
            n=args.n, d=args.d, g=args.g, k=args.k, KH=args.KH, K2=args.K2, c2=args.c2, chi=args.chi
        )
        return [check_certificate(params)]
    assert args.command == "picard" and args.picard_command == "eff"
    return [effectivity_certificate(args.picard_class)]


def main(argv: Sequence[str], settings: CertifySettings) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print(list_certificates())
        return EXIT_OK
    try:
        certificates = run_command(args, settings)
    except PicardParseError as exc:
        print(f"error: malformed class {args.picard_class!r}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    generated_at = datetime.now(UTC) if args.envelope else None
    print(render_certificates(certificates, OutputFormat(args.format), generated_at))
    return EXIT_OK if all(c.status.is_success for c in certificates) else EXIT_FAILED


if __name__ == "__main__":
    configured = CertifySettings()
    logging.basicConfig(filename=configured.log_file, level=configured.log_level)
    try:
        sys.exit(main(sys.argv[1:], configured))
    except Exception:
        logging.exception("Certification failed")
        sys.exit(EXIT_FAILED)
