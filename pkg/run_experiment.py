#!/usr/bin/env python3
"""
URUCHAMIANIE EKSPERYMENTÓW mwalk

Jedno wywołanie = jedna komenda = jeden raport JSON (+ CSV dla sweep/adversary).
Kody wyjścia: 0 - sukces, 1 - błąd domenowy (zapisany w raporcie), 2 - błąd użycia.

Przykłady:
    python run_experiment.py certify --dist inputs/one_plus_cosine.json --out output/cert.json
    python run_experiment.py exact --dist inputs/two_point.json --coeffs inputs/alternating.json
    python run_experiment.py rademacher --n 4
    python run_experiment.py --replay output/cert.json
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

from adversary import SearchConfig, minimize_ratio, mw_probe
from certificates import best_certificate, certify_distribution
from config import LOGGING_CONFIG
from distributions import load_distribution, validate
from errors import InputSchemaError, MWalkError
from evaluator import evaluate_ratio, load_coefficients, rademacher_exact
from lemma_suite import lemma_suite
from report_writer import COMMANDS, RunManifest, default_output_path, write_report
from riesz import cross_model_check, load_sequence, riesz_l1, riesz_ratio_sweep

MAX_SEED = 2 ** 64


def setup_logging():
    """Konfiguracja logowania."""
    logging.basicConfig(
        level=getattr(logging, LOGGING_CONFIG["level"]),
        format=LOGGING_CONFIG["format"],
        handlers=[
            logging.FileHandler(LOGGING_CONFIG["log_file"], encoding='utf-8'),
            logging.StreamHandler()
        ]
    )


def _seed(text: str) -> int:
    value = int(text)
    if not (0 <= value < MAX_SEED):
        raise argparse.ArgumentTypeError(f"seed musi być w [0, 2^64), podano {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"oczekiwano liczby >= 1, podano {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run_experiment.py",
        description="Stałe dolne L1 dla błądzeń multiplikatywnych: certyfikaty, ewaluacja, kwadratura, wyszukiwanie",
    )
    parser.add_argument("--replay", metavar="REPORT", help="Uruchom ponownie argv zapisane w manifeście raportu")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="Ścieżka raportu JSON (domyślnie output/<komenda>_report.json)")
        p.add_argument("--seed", type=_seed, default=0, help="Ziarno 64-bitowe (domyślnie 0)")
        return p

    p = command("validate", "Walidacja rozkładu")
    p.add_argument("--dist", required=True)
    p.add_argument("--samples", type=_positive_int)

    p = command("certify", "Certyfikaty thm1 i thm3")
    p.add_argument("--dist", required=True)
    p.add_argument("--eps", type=float, help="Własne eps w (0, 1/8) zamiast domyślnego")
    p.add_argument("--samples", type=_positive_int)

    for name, help_text in (("exact", "Dokładne E||sum v_i R_i||"),
                            ("estimate", "Monte Carlo E||sum v_i R_i||"),
                            ("ratio", "Stosunek L1 / l1")):
        p = command(name, help_text)
        p.add_argument("--dist", required=True)
        p.add_argument("--coeffs", required=True)
        p.add_argument("--norm", choices=["l1", "l2", "linf"])
        p.add_argument("--samples", type=_positive_int, default=10**5)
        if name == "ratio":
            p.add_argument("--method", choices=["exact", "monte_carlo"], default="exact")

    p = command("riesz", "Kwadratura kombinacji produktów Riesza")
    p.add_argument("--seq", required=True)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--cross-model", action="store_true", help="Porównaj z modelem i.i.d. 1 + cos(U)")
    p.add_argument("--samples", type=_positive_int)

    p = command("sweep", "Losowe stosunki kwadratury Riesza")
    p.add_argument("--seq", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--tol", type=float, default=1e-6)

    p = command("adversary", "Wyszukiwanie współczynników o małym stosunku (lub sonda z --C)")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=_positive_int, default=1)
    p.add_argument("--norm", choices=["l1", "l2", "linf"], default="l1")
    p.add_argument("--budget", type=_positive_int, default=10**4)
    p.add_argument("--restarts", type=_positive_int, default=4)
    p.add_argument("--method", choices=["exact", "monte_carlo"],
                   help="Wyrocznia (domyślnie exact; sonda dobiera ją sama)")
    p.add_argument("--samples", type=_positive_int, default=4096)
    p.add_argument("--C", type=float, dest="C", help="Ograniczenie sum częściowych - przełącza na sondę")

    p = command("suite", "Sprawdzenie nierówności pomocniczych")
    p.add_argument("--dist", required=True)
    p.add_argument("--trials", type=_positive_int, default=100)

    p = command("rademacher", "Przykład ze znakami +-1")
    p.add_argument("--n", type=int, required=True)
    return parser


class ExperimentRunner:
    """Składa operacje bibliotek w komendy CLI i zapisuje raporty."""

    INPUT_KEYS = ("dist", "coeffs", "seq")

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.handlers: Dict[str, Callable[[argparse.Namespace], Tuple[Any, Optional[List[Dict[str, Any]]]]]] = {
            "validate": self._validate,
            "certify": self._certify,
            "exact": self._exact,
            "estimate": self._estimate,
            "ratio": self._ratio,
            "riesz": self._riesz,
            "sweep": self._sweep,
            "adversary": self._adversary,
            "suite": self._suite,
            "rademacher": self._rademacher,
        }

    # -- komendy ---------------------------------------------------------------

    def _validate(self, args):
        return validate(load_distribution(args.dist), samples=args.samples, seed=args.seed), None

    def _certify(self, args):
        dist = load_distribution(args.dist)
        certificates = certify_distribution(dist, eps=args.eps, samples=args.samples, seed=args.seed)
        return {"distribution": dist, "certificates": certificates,
                "best": best_certificate(certificates)}, None

    def _ratio_of(self, args, method: str):
        dist = load_distribution(args.dist)
        cv = load_coefficients(args.coeffs, args.norm)
        return evaluate_ratio(dist, cv, method, samples=args.samples, seed=args.seed), None

    def _exact(self, args):
        return self._ratio_of(args, "exact")

    def _estimate(self, args):
        return self._ratio_of(args, "monte_carlo")

    def _ratio(self, args):
        return self._ratio_of(args, args.method)

    def _riesz(self, args):
        seq = load_sequence(args.seq)
        a = load_coefficients(args.coeffs).scalars()
        result = {"sequence": seq, "quadrature": riesz_l1(a, seq, args.tol)}
        if args.cross_model:
            result["cross_model"] = cross_model_check(seq, a, args.tol, samples=args.samples, seed=args.seed)
        return result, None

    def _sweep(self, args):
        report = riesz_ratio_sweep(load_sequence(args.seq), args.n, args.trials, args.seed, args.tol)
        return report, report.rows

    def _adversary(self, args):
        dist = load_distribution(args.dist)
        if args.C is not None:
            result = mw_probe(dist, args.n, args.C, args.budget, args.seed, restarts=args.restarts,
                              oracle=args.method, samples=args.samples)
        else:
            config = SearchConfig(n=args.n, d=args.d, norm=args.norm, budget=args.budget,
                                  restarts=args.restarts, seed=args.seed, oracle=args.method or "exact",
                                  samples=args.samples)
            result = minimize_ratio(dist, config)
        return result, result.trace_rows()

    def _suite(self, args):
        return lemma_suite(load_distribution(args.dist), args.trials, args.seed), None

    def _rademacher(self, args):
        return rademacher_exact(args.n), None

    # -- przebieg ----------------------------------------------------------------

    def _manifest(self, args: argparse.Namespace, argv: List[str], output: str) -> RunManifest:
        params = {k: v for k, v in vars(args).items()
                  if k not in self.INPUT_KEYS + ("command", "out", "seed", "replay")}
        return RunManifest(
            command=args.command,
            argv=list(argv),
            inputs={k: getattr(args, k, None) for k in self.INPUT_KEYS if hasattr(args, k)},
            parameters=params,
            seed=args.seed,
            output=output,
        )

    def execute(self, args: argparse.Namespace, argv: List[str]) -> int:
        output = args.out or default_output_path(args.command)
        manifest = self._manifest(args, argv, output)
        print(f"🚀 Komenda: {args.command} (seed = {args.seed})")

        try:
            result, rows = self.handlers[args.command](args)
        except MWalkError as e:
            self.logger.error(f"{e.code}: {e.message}")
            print(f"❌ {e.code}: {e.message}")
            write_report(None, manifest, output, error=e)
            return 1

        written = write_report(result, manifest, output, rows=rows)
        for path in written.values():
            print(f"💾 Zapisano: {path}")
        return 0


def _replay_argv(path: str) -> List[str]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return list(json.load(f)["manifest"]["argv"])
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InputSchemaError(f"Nie można odczytać manifestu z {path}: {e}") from e


def run(argv: Optional[List[str]] = None) -> int:
    """Punkt wejścia: zwraca kod wyjścia."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.replay:
            if args.command:
                parser.error("--replay nie łączy się z komendą")
            try:
                argv = _replay_argv(args.replay)
            except InputSchemaError as e:
                print(f"❌ {e.message}", file=sys.stderr)
                return 2
            args = parser.parse_args(argv)
        if not args.command:
            parser.error("wymagana komenda: " + ", ".join(COMMANDS))
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    setup_logging()
    try:
        return ExperimentRunner().execute(args, argv)
    except MWalkError as e:
        # raport nie dał się zapisać
        print(f"❌ {e.code}: {e.message}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
