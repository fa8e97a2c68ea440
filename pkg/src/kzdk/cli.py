import argparse
import logging
import sys

import numpy as np
import pandas as pd

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from .kzdk import KZDK, CommandResult, KZDKExporter
from .kzdk_utils.category_checks import AXIOM_GROUPS
from .kzdk_utils.core_exporter import build_report
from .kzdk_utils.correlators import CLOSED_FORMS
from .kzdk_utils.exceptions import (
    ExcludedParameterException,
    KZDKException,
    ModuleSpecException,
)
from .kzdk_utils.gl11_modules import ModuleSpec, as_spec
from .kzdk_utils.kz_engine import KZSystem, resonance_check
from .kzdk_utils.tensor_ring import genericity
from .kzdk_utils.utils import (
    BRANCH_CONVENTION,
    PEXP_STEPS,
    PEXP_T,
    SAMPLING_MARGIN,
    format_number,
    parse_number,
    thread_count,
)


logger = logging.getLogger(__name__)

COMMANDS = (
    "decompose",
    "associator",
    "braiding",
    "monodromy",
    "verify",
    "qring",
    "qverify",
    "dk-compare",
    "correlator",
    "sweep",
)
SWEEP_SUITES = ("verify", "decompose", "qring", "qverify", "dk-compare")
# number of modules each command takes: (minimum, maximum)
_ARITY = {
    "decompose": (2, 2),
    "associator": (3, 3),
    "braiding": (2, 2),
    "monodromy": (3, 3),
    "verify": (3, 4),
    "qring": (2, 2),
    "qverify": (1, 3),
    "dk-compare": (2, 2),
    "correlator": (2, 3),
}
EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_EXCLUDED = 0, 1, 2, 3



# region Config
@dataclass(frozen=True)
class RunConfig:
    command: str
    kappa: complex = 1.0
    modules: tuple[str, ...] = ()
    order: int | None = None
    tol: float | None = None
    seed: int = 0
    out: str = ""
    emit_matrices: bool = False
    force: bool = False
    method: str = "frames"
    t: float = PEXP_T
    steps: int = PEXP_STEPS
    scheme: str = "magnus4"
    axioms: tuple[str, ...] = ("all",)
    form: str = "auto"
    constants: tuple[tuple[str, complex], ...] = ()
    sector: complex | None = None
    samples: int | None = None
    suite: str = "verify"
    kinds: tuple[str, ...] = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ModuleSpecException(f"Unknown command {self.command!r}. Expected one of {COMMANDS!r}.")
        if complex(self.kappa) == 0:
            raise ModuleSpecException("`--kappa` must be nonzero.")

    @property
    def specs(self) -> list[ModuleSpec]:
        return [as_spec(m) for m in self.modules]

    def to_record(self) -> dict:
        record = asdict(self)
        record["kappa"] = format_number(self.kappa)
        record["constants"] = {k: format_number(v) for k, v in self.constants}
        record["sector"] = None if self.sector is None else format_number(self.sector)
        return record


def _parse_constants(text: str) -> tuple[tuple[str, complex], ...]:
    if not text:
        return ()
    pairs = []
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ModuleSpecException(
                f"Invalid constant {item!r} in --constants. Expected 'A=1,B=0.5'."
            )
        pairs.append((name.strip(), parse_number(value)))
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa", default="1", help="Level; decimal, rational or complex literal.")
    common.add_argument("--modules", nargs="+", default=[], help="Module specs, e.g. T:0.3,0 P:0 A:1 Pi*T:1/4,0.")
    common.add_argument("--tol", type=float, default=None, help="Override the command tolerance.")
    common.add_argument("--order", type=int, default=None, help="Series truncation order (default adaptive).")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="", help="Report path (.json document or .csv records).")
    common.add_argument("--emit-matrices", action="store_true")
    common.add_argument("--force", action="store_true", help="Accept near-excluded parameters with a warning.")
    common.add_argument(
        "--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
    )

    parser = argparse.ArgumentParser(
        prog="kzdk",
        description="Drinfeld category checks for gl(1|1): KZ associators, braidings and their quantum counterparts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("decompose", "braiding", "monodromy", "qring", "qverify", "dk-compare"):
        sub.add_parser(name, parents=[common])

    assoc = sub.add_parser("associator", parents=[common])
    assoc.add_argument("--method", default="frames", choices=("frames", "pexp", "both"))
    assoc.add_argument("--t", type=float, default=PEXP_T)
    assoc.add_argument("--steps", type=int, default=PEXP_STEPS)
    assoc.add_argument("--scheme", default="magnus4", choices=("magnus4", "midpoint"))

    verify = sub.add_parser("verify", parents=[common])
    verify.add_argument("--axiom", nargs="+", default=["all"], choices=(*AXIOM_GROUPS, "all"))

    corr = sub.add_parser("correlator", parents=[common])
    corr.add_argument("--form", default="auto", choices=("auto", *CLOSED_FORMS))
    corr.add_argument("--constants", default="", help="Free constants, e.g. A=1,B=0.5,C3=0,C4=2.")
    corr.add_argument("--sector", default=None)
    corr.add_argument("--samples", type=int, default=None, help="Number of evenly spaced sample points.")

    sweep = sub.add_parser("sweep", parents=[common])
    sweep.add_argument("--suite", default="verify", choices=SWEEP_SUITES)
    sweep.add_argument("--kinds", nargs="+", default=["T", "T", "T"], choices=("T", "A", "P"))
    sweep.add_argument("--samples", type=int, default=10)
    sweep.add_argument("--axiom", nargs="+", default=["all"], choices=(*AXIOM_GROUPS, "all"))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(args, name, default)
    modules = tuple(args.modules)
    for m in modules:
        as_spec(m)
    sector = get("sector")
    return RunConfig(
        command=args.command,
        kappa=parse_number(args.kappa),
        modules=modules,
        order=args.order,
        tol=args.tol,
        seed=args.seed,
        out=args.out,
        emit_matrices=args.emit_matrices,
        force=args.force,
        method=get("method", "frames"),
        t=get("t", PEXP_T),
        steps=get("steps", PEXP_STEPS),
        scheme=get("scheme", "magnus4"),
        axioms=tuple(get("axiom", ["all"])),
        form=get("form", "auto"),
        constants=_parse_constants(get("constants", "")),
        sector=None if sector is None else parse_number(sector),
        samples=get("samples"),
        suite=get("suite", "verify"),
        kinds=tuple(get("kinds", ())),
    )
# endregion



# region Sampling
def sample_generic_specs(
    kinds,
    kappa: complex,
    rng: np.random.Generator,
    margin: float = SAMPLING_MARGIN,
    *,
    max_draws: int = 10_000,
    ) -> tuple[list[ModuleSpec], int]:
    """
    Draw module specs of the given kinds: e uniform in ±(0.05, 0.95), n uniform
    in (-2, 2). Draws within ``margin`` of the excluded set, or resonant for the
    first three factors, are rejected and counted.
    """
    rejected = 0
    for _ in range(max_draws):
        specs = []
        for kind in kinds:
            n = rng.uniform(-2, 2)
            if kind.upper() == "T":
                e = rng.uniform(0.05, 0.95) * rng.choice((-1, 1))
                specs.append(ModuleSpec("T", e, n))
            else:
                specs.append(ModuleSpec(kind.upper(), 0, n))
        ok = genericity(specs, kappa, margin=margin).generic
        if ok and len(specs) >= 3:
            ok = not resonance_check(KZSystem(tuple(specs[:3]), kappa), margin=margin)
        if ok:
            return specs, rejected
        rejected += 1
    raise ExcludedParameterException(
        f"No generic draw for kinds {tuple(kinds)!r} after {max_draws} attempts."
    )


def _run_suite(config: RunConfig, specs: list[ModuleSpec]) -> CommandResult:
    engine = KZDK(config.kappa, tol=config.tol, order=config.order, force=config.force)
    match config.suite:
        case "verify":
            return engine.verify(specs, config.axioms)
        case "decompose":
            return engine.decompose(*specs[:2])
        case "qring":
            return engine.qring(*specs[:2])
        case "qverify":
            return engine.qverify(specs[:3])
        case "dk-compare":
            return engine.dk_compare(*specs[:2])


def sweep(config: RunConfig) -> tuple[bool, list[dict], dict]:
    """
    Run ``config.samples`` independent instances of ``config.suite`` on seeded
    generic draws. Records keep submission order.
    """
    rng = np.random.default_rng(config.seed)
    draws, rejections = [], 0
    for _ in range(config.samples or 1):
        specs, rejected = sample_generic_specs(config.kinds, config.kappa, rng)
        draws.append(specs)
        rejections += rejected

    workers = thread_count()
    logger.info("sweep: %d instances of %s on %d workers", len(draws), config.suite, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda specs: _run_suite(config, specs), draws))

    records = [
        {"sample": i, "modules": [s.label for s in specs], **record}
        for i, (specs, result) in enumerate(zip(draws, results))
        for record in result.records
    ]
    provenance = {
        "branch": BRANCH_CONVENTION,
        "seed": config.seed,
        "suite": config.suite,
        "rejections": rejections,
        "samplingMargin": SAMPLING_MARGIN,
    }
    return all(r.passed for r in results), records, provenance
# endregion



# region Run
def _check_arity(config: RunConfig) -> None:
    low, high = _ARITY[config.command]
    count = len(config.modules)
    if not low <= count <= high:
        expected = str(low) if low == high else f"{low} to {high}"
        raise ModuleSpecException(
            f"{config.command!r} takes {expected} modules via --modules, received {count}."
        )


def _dispatch(config: RunConfig) -> tuple[KZDK, CommandResult]:
    _check_arity(config)
    engine = KZDK(config.kappa, tol=config.tol, order=config.order, force=config.force)
    specs = config.specs
    match config.command:
        case "decompose":
            return engine, engine.decompose(*specs)
        case "associator":
            return engine, engine.associator(
                *specs, method=config.method, t=config.t, steps=config.steps, scheme=config.scheme,
            )
        case "braiding":
            return engine, engine.braiding(*specs)
        case "monodromy":
            return engine, engine.monodromy(*specs)
        case "verify":
            return engine, engine.verify(specs, config.axioms)
        case "qring":
            return engine, engine.qring(*specs)
        case "qverify":
            return engine, engine.qverify(specs)
        case "dk-compare":
            return engine, engine.dk_compare(*specs)
        case "correlator":
            return engine, engine.correlator(
                specs,
                form=config.form,
                constants=dict(config.constants) or None,
                sector=config.sector,
                samples=config.samples,
            )


def run(config: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns the exit status and the report document."""
    if config.command == "sweep":
        passed, records, provenance = sweep(config)
        document = build_report("sweep", config.to_record(), records, provenance, {})
    else:
        engine, result = _dispatch(config)
        passed = result.passed
        document = engine.report(result, config.to_record(), emit_matrices=config.emit_matrices)
    return (EXIT_OK if passed else EXIT_FAILED), document


def emit(document: dict, out: str = "") -> None:
    if out:
        KZDKExporter(document).export(out)
    else:
        print(pd.Series(document, dtype=object).to_json(indent=2, double_precision=15))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = config_from_args(args)
        status, document = run(config)
    except ModuleSpecException as err:
        logger.error("%s", err)
        return EXIT_USAGE
    except ExcludedParameterException as err:
        logger.error("%s", err)
        return EXIT_EXCLUDED
    except KZDKException as err:
        logger.error("%s: %s", type(err).__name__, err)
        return EXIT_FAILED

    emit(document, config.out)
    if status != EXIT_OK:
        logger.warning("%s: at least one check failed", config.command)
    return status
# endregion


if __name__ == "__main__":
    sys.exit(main())
