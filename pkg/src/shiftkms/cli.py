"""Command-line front end: parse spec documents, dispatch analyses, emit JSON reports.

Input documents are JSON, UTF-8, lowercase keys, 1-based symbols:

    {"type": "full", "alphabet": 3}
    {"type": "sft", "matrix": [[1, 1], [1, 0]]}
    {"type": "forbidden", "alphabet": 2, "words": [[1, 1]]}
    {"type": "beta", "beta": 1.8392867552, "digit_depth": 64}
    {"type": "nonnegative", "matrix": [[0, 2], [3, 0]]}

Exit codes: 0 success, 1 bad input, 2 violated internal invariant.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

import numpy as np

from . import __version__, equilibrium, krieger, subshift, tracespace
from .equilibrium import InvariantViolation
from .spectral import ReducibleMatrixError, as_nonnegative, perron_vectors
from .subshift import SFT, BetaShift, ForbiddenWords, FullShift

COMMANDS = ("entropy", "kms", "parry", "krieger", "bracket", "variational", "resolvent", "all")


class InputError(ValueError):
    """Malformed or inapplicable input document."""


def parse_spec(document):
    """Parse a spec document (JSON text or dict) into a presentation object.

    Returns a subshift presentation, or the tuple ("nonnegative", matrix) for
    a general lambda-matrix input.  Violations name the offending field.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"document is not valid JSON: {exc}") from None
    else:
        doc = document
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    kind = doc.get("type")
    if kind is None:
        raise InputError("missing field 'type'")
    try:
        if kind == "full":
            return FullShift(int(_need(doc, "alphabet")))
        if kind == "sft":
            return SFT(np.asarray(_need(doc, "matrix")))
        if kind == "forbidden":
            words = tuple(tuple(w) for w in _need(doc, "words"))
            return ForbiddenWords(int(_need(doc, "alphabet")), words)
        if kind == "beta":
            return BetaShift(
                beta=_need(doc, "beta"),
                digit_depth=int(doc.get("digit_depth", 64)),
            )
        if kind == "nonnegative":
            return ("nonnegative", as_nonnegative(_need(doc, "matrix")))
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(f"invalid '{kind}' document: {exc}") from None
    raise InputError(f"unknown spec type {kind!r}")


def _need(doc, field):
    if field not in doc:
        raise InputError(f"missing field '{field}'")
    return doc[field]


def _echo(spec):
    if isinstance(spec, FullShift):
        return {"type": "full", "alphabet": spec.alphabet}
    if isinstance(spec, SFT):
        return {"type": "sft", "matrix": spec.matrix.tolist()}
    if isinstance(spec, ForbiddenWords):
        return {"type": "forbidden", "alphabet": spec.alphabet, "words": [list(w) for w in spec.words]}
    if isinstance(spec, BetaShift):
        return {
            "type": "beta",
            "beta": spec.beta if isinstance(spec.beta, str) else float(spec.beta),
            "digit_depth": spec.digit_depth,
        }
    kind, matrix = spec
    return {"type": kind, "matrix": np.asarray(matrix).tolist()}


def _matrix_of(spec):
    if isinstance(spec, FullShift):
        return np.ones((spec.alphabet, spec.alphabet), dtype=int)
    if isinstance(spec, SFT):
        return spec.matrix
    raise InputError(
        "this command needs a transition matrix; give a 'sft', 'full' or 'nonnegative' document"
    )


def _section_entropy(spec, flags):
    est = subshift.topological_entropy(spec, flags["max_n"])
    return {
        "theta": list(est.theta),
        "log_rates": list(est.log_rates),
        "extrapolated": est.extrapolated,
        "exact": est.exact,
        "method": est.method,
        "n_max": flags["max_n"],
    }


def _section_kms(spec, flags, warnings):
    if isinstance(spec, tuple):
        report = tracespace.bimodule_kms(spec[1], depth=flags["depth"], tol=flags["tol"])
        return {
            "kind": "bimodule",
            "lambda": report.lam,
            "beta": report.beta,
            "v0": report.v0.tolist(),
            "sequence": [v.tolist() for v in report.sequence],
        }
    M = _matrix_of(spec)
    report = tracespace.kms_temperature(
        M, depth=flags["depth"], tol=flags["tol"], reducible_mode=flags["reducible_mode"]
    )
    section = {
        "kind": "cuntz-krieger",
        "lambda": report.lam,
        "beta": report.beta,
        "uniqueness": report.uniqueness_flag,
    }
    if report.heuristic:
        warnings.append("reducible mode: bracket lists heuristic candidates, not the exact set")
        section["bracket"] = list(report.bracket)
    else:
        section["eigen_levels"] = [t.tolist() for t in report.eigen_sequence.levels]
        section["eigen_residuals"] = list(report.eigen_sequence.residuals)
    return section


def _section_parry(spec, flags):
    m = equilibrium.parry_measure(_matrix_of(spec), tol=flags["tol"])
    return {
        "lambda": m.lam,
        "transitions": m.transitions.tolist(),
        "stationary": m.stationary.tolist(),
        "entropy": m.entropy,
    }


def _section_krieger(spec, flags, warnings):
    l_max = max(2, min(flags["max_n"], flags["depth"] - 2))
    report = krieger.sofic_check(spec, l_max, depth=flags["depth"])
    if not all(report.stabilized):
        warnings.append("krieger: stabilization not reached for some l; counts are lower bounds")
    return {
        "counts": list(report.counts),
        "stabilized": list(report.stabilized),
        "sofic_detected": report.sofic_detected,
        "l_max": report.l_max,
        "depth": report.depth,
    }


def _section_bracket(spec, flags, warnings):
    n_max = flags["max_n"]
    depth = flags["depth"] if flags["depth"] >= n_max else None
    if depth is None:
        warnings.append(f"bracket: depth raised to {n_max + 10} to cover n_max")
    report = krieger.entropy_bracket(spec, n_max, depth=depth)
    return {
        "lower": report.lower,
        "upper": report.upper,
        "width": report.width,
        "corrections": list(report.correction_sequence),
        "dims": list(report.dims),
        "sofic_detected": report.sofic_detected,
        "n_max": report.n_max,
        "depth": report.depth,
    }


def _section_variational(spec, flags):
    report = equilibrium.variational_scan(
        _matrix_of(spec), n_samples=flags["samples"], seed=flags["seed"]
    )
    return {
        "top_entropy": report.top_entropy,
        "parry_entropy": report.parry_entropy,
        "max_entropy": report.max_entropy,
        "max_sampled": report.max_sampled,
        "gap": report.gap,
        "violations": report.violations,
        "n_samples": report.n_samples,
        "seed": report.seed,
    }


def _section_resolvent(spec, flags):
    M = _matrix_of(spec)
    perron = perron_vectors(M, tol=flags["tol"])
    offsets = (0.5, 0.1, 0.01, 1e-4)
    v_dir = perron.v / perron.v.sum()
    rows = []
    for off in offsets:
        rv = equilibrium.resolvent_vector(M, perron, perron.lam + off)
        a_dir = rv.a / rv.a.sum()
        rows.append(
            {
                "t": rv.t,
                "a": rv.a.tolist(),
                "pairing": rv.pairing,
                "alignment_l1": float(np.abs(a_dir - v_dir).sum()),
            }
        )
    return {"lambda": perron.lam, "schedule": rows}


def run(command: str, spec, flags) -> dict:
    """Execute one command and assemble the deterministic report."""
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    warnings: list[str] = []
    results = {}
    is_matrix_doc = isinstance(spec, tuple)
    matrix_like = is_matrix_doc or isinstance(spec, (FullShift, SFT))

    def applicable(name):
        if name in ("entropy", "krieger", "bracket"):
            return not is_matrix_doc
        if name == "kms":
            return matrix_like
        return matrix_like and not is_matrix_doc

    wanted = [c for c in COMMANDS[:-1] if command in (c, "all")]
    for name in wanted:
        if not applicable(name):
            if command == "all":
                warnings.append(f"{name}: not applicable to this input, skipped")
                continue
            raise InputError(f"command '{name}' is not applicable to this input")
        if name == "entropy":
            results["entropy"] = _section_entropy(spec, flags)
        elif name == "kms":
            results["kms"] = _section_kms(spec, flags, warnings)
        elif name == "parry":
            results["parry"] = _section_parry(spec, flags)
        elif name == "krieger":
            results["krieger"] = _section_krieger(spec, flags, warnings)
        elif name == "bracket":
            results["bracket"] = _section_bracket(spec, flags, warnings)
        elif name == "variational":
            results["variational"] = _section_variational(spec, flags)
        elif name == "resolvent":
            results["resolvent"] = _section_resolvent(spec, flags)
    report = {
        "tool": "shiftkms",
        "version": __version__,
        "command": command,
        "input_echo": _echo(spec),
        "provenance": {
            "seed": flags["seed"],
            "tol": flags["tol"],
            "max_n": flags["max_n"],
            "depth": flags["depth"],
            "samples": flags["samples"],
            "reducible_mode": flags["reducible_mode"],
        },
        "warnings": warnings,
        "results": results,
    }
    if not flags["no_timestamp"]:
        report["provenance"]["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc
        ).isoformat()
    return report


class _Parser(argparse.ArgumentParser):
    # usage problems are bad input (exit 1); exit 2 is reserved for invariant failures
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(
        prog="shiftkms",
        description="KMS temperatures, subshift entropy and Parry measures from spec documents",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", help="path of a JSON spec document, or - for stdin")
    parser.add_argument("--max-n", type=int, default=30, dest="max_n")
    parser.add_argument("--depth", type=int, default=12)
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--reducible-mode", action="store_true", dest="reducible_mode")
    parser.add_argument("--no-timestamp", action="store_true", dest="no_timestamp")
    parser.add_argument("--output", default=None, help="write the report here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    flags = {
        "max_n": args.max_n,
        "depth": args.depth,
        "tol": args.tol,
        "samples": args.samples,
        "seed": args.seed,
        "reducible_mode": args.reducible_mode,
        "no_timestamp": args.no_timestamp,
    }
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_spec(text)
        report = run(args.command, spec, flags)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (InputError, ReducibleMatrixError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text_out = json.dumps(report, indent=2, allow_nan=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text_out + "\n")
    else:
        print(text_out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
