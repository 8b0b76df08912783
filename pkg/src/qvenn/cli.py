"""
Command-line front end.

Exit status is 0 on success, 2 when an input fails validation (the message
names the violated invariant) and 1 on an unexpected internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .blockcoding import MAX_SYMBOLS, block_report
from .bounds import (
    MODEL_FORMULAS,
    MODELS,
    binomial_mixture_analysis,
    bound_value,
    parse_grid,
)
from .channel import (
    QuantumChannel,
    channel_report,
    identity_channel,
    make_depolarizing,
    make_erasure,
    unitary_channel,
)
from .classical import ClassicalChannel, Distribution, binary_symmetric, classical_report
from .codes import (
    BUILTIN_CODES,
    CORRECTABLE_TOL,
    EncodingIsometry,
    builtin_code,
    encode_entangled,
    verify_erasure_code,
)
from .errors import QVennError
from .properties import DEFAULT_SEED, run_property_suite
from .registers import (
    DensityState,
    PureState,
    RegisterLayout,
    bell_state,
    entangled_block_input,
    ghz_state,
    pairs_to_complex,
)
from .sidechannel import (
    IDENTITY_TOL,
    build_teleportation_model,
    encode_with_side_channel,
    side_channel_diagram,
    trivial_side_channel,
    verify_side_channel_code,
)
from .venn import DERIVED_TOL, venn3

SIG_DIGITS = 12


class UsageError(QVennError):
    """Malformed command-line value."""


# ----------------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------------

def round_sig(x: float, digits: int = SIG_DIGITS) -> float:
    return float(f"{x:.{digits}g}")


def _rounded(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            raise UsageError(f"non-finite value {x} in output")
        # -0.0 and tiny float noise serialize as 0
        return 0.0 if x == 0 else round_sig(x)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _rounded(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(doc: dict) -> str:
    return json.dumps(_rounded(doc), indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------------------
# Argument values
# ----------------------------------------------------------------------------

def _read_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{what} must be a number, got {text!r}") from None


def parse_channel(text: str) -> QuantumChannel:
    """``identity[:d]``, ``depolarizing:p``, ``erasure:p``, ``unitary:file`` or a channel JSON file."""
    name, _, arg = text.partition(":")
    if name == "identity":
        return identity_channel(int(arg) if arg else 2)
    if name == "depolarizing":
        return make_depolarizing(_float(arg, "depolarizing probability"))
    if name == "erasure":
        return make_erasure(_float(arg, "erasure probability"))
    if name == "unitary":
        data = _read_json(arg)
        matrix = data["matrix"] if isinstance(data, dict) else data
        return unitary_channel(pairs_to_complex(matrix))
    try:
        return QuantumChannel.from_json(_read_json(text))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"channel file {text} lacks field {exc}") from exc


def parse_input(text: str, dim: int, label: str = "Q") -> DensityState:
    """``maximally-mixed:d``, ``basis:i``, ``diag:p0,p1,...`` or a state JSON file."""
    name, _, arg = text.partition(":")
    layout = RegisterLayout.of((label, int(arg) if name == "maximally-mixed" and arg else dim))
    if name == "maximally-mixed":
        return DensityState.maximally_mixed(layout)
    if name == "basis":
        m = np.zeros((dim, dim))
        m[int(arg), int(arg)] = 1.0
        return DensityState(layout, m)
    if name == "diag":
        probs = [_float(x, "diagonal entry") for x in arg.split(",")]
        return DensityState(RegisterLayout.of((label, len(probs))), np.diag(probs))
    data = _read_json(text)
    state = PureState.from_json(data) if "amplitudes" in data else DensityState.from_json(data)
    if len(state.labels) != 1:
        raise UsageError("channel input must have exactly one subsystem")
    if isinstance(state, PureState):
        state = state.to_density()
    return state.relabel({state.labels[0]: label})


def parse_code(text: str) -> EncodingIsometry:
    if text.startswith("builtin:"):
        name = text.split(":", 1)[1]
        if name not in BUILTIN_CODES:
            raise UsageError(f"unknown builtin code {name!r}; choose from {sorted(BUILTIN_CODES)}")
        return builtin_code(name)
    try:
        return EncodingIsometry.from_json(_read_json(text))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"code file {text} lacks field {exc}") from exc


def parse_state(text: str) -> PureState | DensityState:
    """``ghz:A,B,C``, ``bell:A,B`` or a state JSON file."""
    name, _, arg = text.partition(":")
    if name == "ghz":
        return ghz_state(*arg.split(","))
    if name == "bell":
        a, b = arg.split(",")
        return bell_state(a, b)
    if name == "teleport":
        return build_teleportation_model().state
    data = _read_json(text)
    return PureState.from_json(data) if "amplitudes" in data else DensityState.from_json(data)


def parse_classical_channel(text: str) -> ClassicalChannel:
    name, _, arg = text.partition(":")
    if name == "bsc":
        return binary_symmetric(_float(arg, "crossover probability"))
    if name == "noiseless":
        return ClassicalChannel(np.eye(int(arg) if arg else 2))
    try:
        return ClassicalChannel.from_json(_read_json(text))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"classical channel file {text} lacks field {exc}") from exc


def parse_distribution(text: str, size: int) -> Distribution:
    if text == "uniform":
        return Distribution.uniform(size)
    return Distribution([_float(x, "probability") for x in text.split(",")])


def _labels(text: str) -> list[str]:
    return [t for t in text.split(",") if t]


# ----------------------------------------------------------------------------
# Verbs
# ----------------------------------------------------------------------------

def cmd_analyze_channel(args) -> str:
    ch = parse_channel(args.channel)
    report = channel_report(ch, parse_input(args.input, ch.input_dim))
    doc = {"channel": ch.name, "report": report.to_json(), "violations": report.check(), "tolerance": DERIVED_TOL}
    return dump_json(doc)


def cmd_venn(args) -> str:
    state = parse_state(args.state)
    diagram = venn3(state, _labels(args.x), _labels(args.y), _labels(args.z))
    if args.format == "text":
        return diagram.render() + "\n"
    return dump_json({"diagram": diagram.to_json(), "violations": diagram.check(), "tolerance": DERIVED_TOL})


def cmd_block_report(args) -> str:
    if not 1 <= args.n <= MAX_SYMBOLS:
        raise UsageError(f"block length n={args.n} outside 1..{MAX_SYMBOLS}")
    ch = parse_channel(args.channel)
    if ch.input_dim != 2:
        raise UsageError("block-report inputs are qubits; channel input dimension must be 2")
    symbols = [f"Q{i}" for i in range(1, args.n + 1)]
    inp = entangled_block_input(args.n, entangled=args.input == "entangled")
    rep = block_report([ch] * args.n, inp, symbols)
    broken = rep.violations()
    if args.format == "json":
        return dump_json({"report": rep.to_json(), "violations": broken, "tolerance": DERIVED_TOL})
    rows = [f"{'symbol':>6}  {'S_i':>14}  {'I_i':>14}  {'L_i':>14}"]
    for sym, s, i, l in zip(symbols, rep.per_symbol_S, rep.per_symbol_I, rep.per_symbol_L):
        rows.append(f"{sym:>6}  {s:14.9f}  {i:14.9f}  {l:14.9f}")
    sum_l = sum(rep.per_symbol_L)
    lower, upper = sum_l - 2 * rep.correlation_M, sum_l
    ok = lower - DERIVED_TOL <= rep.joint_L <= upper + DERIVED_TOL
    rows += [
        f"joint I = {rep.joint_I:.9f}   joint L = {rep.joint_L:.9f}   M = {rep.correlation_M:.9f}",
        f"sandwich {lower:.9f} <= L = {rep.joint_L:.9f} <= {upper:.9f}: {'PASS' if ok else 'FAIL'}",
    ]
    return "\n".join(rows) + "\n"


def cmd_code_check(args) -> str:
    code = parse_code(args.code)
    verdict = verify_erasure_code(code, args.erasures)
    doc = {"code": code.name, "k": code.k, "n": code.n, "erasures": args.erasures,
           "verdict": verdict.to_json(), "tolerance": CORRECTABLE_TOL}
    return dump_json(doc)


def cmd_bounds(args) -> str:
    formulas = MODEL_FORMULAS[args.model]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "formula_id", "r_max"])
    for p in parse_grid(args.p_grid):
        for fid in formulas:
            writer.writerow([repr(round_sig(p)), fid, repr(round_sig(bound_value(fid, p)) + 0.0)])
    return buf.getvalue()


def cmd_mixture(args) -> str:
    if not 1 <= args.n <= MAX_SYMBOLS:
        raise UsageError(f"block length n={args.n} outside 1..{MAX_SYMBOLS}")
    inp = entangled_block_input(args.n, entangled=args.input == "entangled")
    analysis = binomial_mixture_analysis(args.n, args.p, inp, args.model)
    return dump_json({"analysis": analysis.to_json(), "violations": analysis.violations(), "tolerance": DERIVED_TOL})


def _diagram_doc(model) -> dict:
    return {"k": model.k, "c": model.c, "s": model.s, "diagram": side_channel_diagram(model), "tolerance": IDENTITY_TOL}


def cmd_teleport_demo(args) -> str:
    model = build_teleportation_model()
    doc = _diagram_doc(model)
    if args.format == "json":
        return dump_json(doc)
    diagram = venn3(model.state, [model.reference], list(model.q_labels), [model.classical])
    lines = [diagram.render(), f"k = {model.k:.9f}  c = {model.c:.9f}  s = {model.s:.9f}"]
    values = dict(doc["diagram"])
    residuals = values.pop("residuals", {})
    for key, value in values.items():
        lines.append(f"{key:>16} = {value:.9f}")
    lines.append("identity residuals:")
    for key, value in residuals.items():
        lines.append(f"{key:>16} : {value:.3e}")
    return "\n".join(lines) + "\n"


def cmd_side_check(args) -> str:
    code = parse_code(args.code)
    if args.paulis == "none":
        model = trivial_side_channel(encode_entangled(code))
    else:
        words = _labels(args.paulis) if args.paulis else None
        if words is None:
            words = ["I" * code.n] + [p + "I" * (code.n - 1) for p in "XYZ"]
        model = encode_with_side_channel(code, words)
    verdict = verify_side_channel_code(model, args.erasures)
    doc = _diagram_doc(model)
    doc.update({"code": code.name, "erasures": args.erasures, "verdict": verdict.to_json()})
    return dump_json(doc)


def cmd_classical_report(args) -> str:
    ch = parse_classical_channel(args.channel)
    report = classical_report(ch, parse_distribution(args.input, ch.input_size))
    return dump_json({"report": report.to_json(), "tolerance": 1e-10})


def cmd_property_suite(args) -> str:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("QVENN_SEED", DEFAULT_SEED))
    results = run_property_suite(seed)
    doc = {"seed": seed, "passed": all(r.passed for r in results), "checks": [r.to_json() for r in results]}
    args._failed = not doc["passed"]
    return dump_json(doc)


# ----------------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qvenn", description="Entropic analysis of quantum channels and codes.")
    parser.add_argument("--version", action="version", version=f"qvenn {__version__}")
    parser.add_argument("--out", help="write output to this file instead of standard output")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze-channel", help="information, loss and noise of one channel use")
    p.add_argument("--channel", required=True)
    p.add_argument("--input", default="maximally-mixed")
    p.set_defaults(func=cmd_analyze_channel)

    p = sub.add_parser("venn", help="three-region entropy diagram of a state")
    p.add_argument("--state", required=True, help="ghz:A,B,C | bell:A,B | teleport | state JSON file")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_venn)

    p = sub.add_parser("block-report", help="joint versus one-symbol loss over n channel uses")
    p.add_argument("--channel", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", choices=("entangled", "product"), default="entangled")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_block_report)

    p = sub.add_parser("code-check", help="verify erasure correction of a code")
    p.add_argument("code", help="builtin:five-qubit | builtin:four-two | code JSON file")
    p.add_argument("--erasures", type=int, required=True)
    p.set_defaults(func=cmd_code_check)

    p = sub.add_parser("bounds", help="capacity bound curves as CSV")
    p.add_argument("--model", choices=tuple(MODEL_FORMULAS), required=True)
    p.add_argument("--p-grid", default="0:1:0.01", help="start:stop:step, stop included")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("mixture", help="binomial pattern mixture analysis")
    p.add_argument("--model", choices=MODELS, default="erasure")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", choices=("entangled", "product"), default="entangled")
    p.set_defaults(func=cmd_mixture)

    p = sub.add_parser("teleport-demo", help="entropy diagram of teleportation with a classical side channel")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_teleport_demo)

    p = sub.add_parser("side-check", help="erasure check with a classical side channel")
    p.add_argument("code", help="builtin:NAME or code JSON file")
    p.add_argument("--erasures", type=int, required=True)
    p.add_argument("--paulis", default="", help="comma-separated Pauli words, or 'none' for no side channel")
    p.set_defaults(func=cmd_side_check)

    p = sub.add_parser("classical-report", help="Shannon information, loss and noise")
    p.add_argument("--channel", required=True, help="bsc:q | noiseless[:d] | transition JSON file")
    p.add_argument("--input", default="uniform", help="uniform or comma-separated probabilities")
    p.set_defaults(func=cmd_classical_report)

    p = sub.add_parser("property-suite", help="randomized invariant battery")
    p.add_argument("--seed", type=int, default=None, help=f"default: $QVENN_SEED or {DEFAULT_SEED}")
    p.set_defaults(func=cmd_property_suite)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        output = args.func(args)
    except (QVennError, ValueError, KeyError) as exc:
        print(f"qvenn {args.verb}: invalid input: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"qvenn {args.verb}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(output)
    else:
        sys.stdout.write(output)
    if getattr(args, "_failed", False):
        print("qvenn property-suite: one or more invariants failed", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
