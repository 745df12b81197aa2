"""Command-line front end.

Every subcommand writes one JSON document (``sweep`` writes CSV) to stdout
or ``--out``.  Exit status: 0 on success, 2 when a verified quantity misses
its tolerance, 1 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from ._jsonutil import encode_complex
from .branch import branch_data, invariants, peel_parameter, reduction_classify
from .domains import DomainSpec, composite_residual, embed, generic_norm, membership
from .errors import (
    ConclusionViolated,
    ContinuationFailure,
    CrossCheckMismatch,
    HoloisoError,
    NotAnIsometry,
)
from .family import (
    boundary_extension_check,
    closed_form_ramification,
    family_map,
    sweep,
    sweep_csv,
)
from .germ import isometry_from_json, isometry_to_json, solve_germ, verify
from .rational import rational_to_json
from .rigidity import candidate_corpus, candidate_from_json, rationality_intake, rigidity_audit
from .unitary import build_family_unitary, build_hessenberg_unitary, check_unitary, base_frame_matrix

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` (no spaces); ``j`` is accepted for ``i``."""
    t = text.strip()
    if not t or " " in t:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")
    t = t.replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def frame_from_spec(text: str, seed: int = 0):
    """``identity<k>``, ``base3``, ``swap3``, ``hessenberg:n[:seed[:slots]]``
    or ``family:zeta:n``."""
    parts = text.split(":")
    head = parts[0].lower()
    if head.startswith("identity"):
        k = int(head[len("identity"):] or 3)
        return check_unitary(np.eye(k))
    if head == "base3":
        return check_unitary(base_frame_matrix())
    if head == "swap3":
        return check_unitary(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    if head == "hessenberg" and len(parts) >= 2:
        n = int(parts[1])
        s = int(parts[2]) if len(parts) > 2 and parts[2] else seed
        slots = tuple(int(x) for x in parts[3].split(",")) if len(parts) > 3 and parts[3] else ()
        return build_hessenberg_unitary(n, s, slots)
    if head == "family" and len(parts) == 3:
        return build_family_unitary(parse_complex(parts[1]), int(parts[2]))
    raise UsageError(f"unknown unitary spec {text!r}")


def grid_points(count: int, rmax: float = 0.95) -> np.ndarray:
    """``count`` points spread over ``|w| <= rmax`` (sunflower layout)."""
    k = np.arange(count)
    r = rmax * np.sqrt((k + 0.5) / count)
    golden = math.pi * (3 - math.sqrt(5))
    return r * np.exp(1j * golden * k)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(obj, complex):
        return encode_complex(obj)
    return obj


def _emit(args, payload: dict):
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(payload)
    text = json.dumps(_clean(doc), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_iso(args):
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            return isometry_from_json(json.load(fh))
    if args.unitary:
        return solve_germ(frame_from_spec(args.unitary, args.seed))
    if args.zeta is not None:
        return family_map(args.zeta, args.n)
    raise UsageError("give --in, --unitary or --zeta")


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAILED


def cmd_construct(args):
    iso = _load_iso(args)
    _emit(args, isometry_to_json(iso))
    return EXIT_OK


def _verify_payload(iso, args):
    rep = verify(iso, grid_points(args.grid))
    out = rep.to_json()
    out["tolerance"] = args.tol
    out["passed"] = out["max_residual"] < args.tol
    return out


def cmd_verify(args):
    iso = _load_iso(args)
    out = _verify_payload(iso, args)
    _emit(args, out)
    return _status(out["passed"])


def cmd_ramify(args):
    if args.zeta is not None and not (args.input or args.unitary):
        prof = closed_form_ramification(args.zeta, args.n, cross_check=True)
        iso = family_map(args.zeta, args.n)
        bd = branch_data(iso.R)
        out = bd.to_json()
        out["closed_form"] = prof.to_json()
    else:
        iso = _load_iso(args)
        if iso.degenerate:
            raise UsageError("degenerate frame: the first component is identically 0")
        bd = branch_data(iso.R)
        out = bd.to_json()
    out["distinct_points"] = bd.distinct_points()
    out["total_order"] = bd.total_order
    _emit(args, out)
    return EXIT_OK


def cmd_classify(args):
    iso = _load_iso(args)
    if iso.degenerate:
        raise UsageError("degenerate frame: the first component is identically 0")
    verdict = reduction_classify(iso.R, iso.n, iso.frame)
    out = {"verdict": verdict.to_json(), "invariants": invariants(iso.R).to_json()}
    _emit(args, out)
    return EXIT_OK


def cmd_peel(args):
    iso = _load_iso(args)
    if iso.degenerate:
        raise UsageError("degenerate frame: the first component is identically 0")
    rest, c = peel_parameter(iso.R)
    _emit(args, {"R_tilde": rational_to_json(rest), "c2": c, "degree": rest.degree})
    return EXIT_OK


def cmd_family(args):
    if args.zeta is None:
        raise UsageError("family needs --zeta")
    iso = family_map(args.zeta, args.n)
    if args.action == "verify":
        out = _verify_payload(iso, args)
        out["zeta"] = args.zeta
        out["n"] = args.n
        _emit(args, out)
        return _status(out["passed"])
    _emit(args, isometry_to_json(iso))
    return EXIT_OK


def cmd_extendcheck(args):
    if args.zeta is None:
        raise UsageError("extendcheck needs --zeta")
    rep = boundary_extension_check(args.zeta, args.eps, n=args.n)
    _emit(args, rep.to_json())
    return _status(rep.passed)


def cmd_embed(args):
    spec = DomainSpec.parse(args.domain)
    if args.w is not None:
        z = [parse_complex(x) for x in args.z.split(",")] if args.z else []
        pt = embed(spec, args.w, z)
        ok, margin = membership(pt)
        out = pt.to_json()
        out.update(member=ok, margin=margin)
        if ok:
            out["generic_norm"] = generic_norm(pt)[0]
        _emit(args, out)
        return EXIT_OK
    source = None
    if spec.kind in ("I", "II"):
        source = _load_iso(args)
    rep = composite_residual(spec, source, grid_points(args.grid))
    rep["tolerance"] = args.tol
    rep["passed"] = rep["max_residual"] < args.tol
    _emit(args, rep)
    return _status(rep["passed"])


def cmd_rigidity(args):
    if args.zeta is not None or args.unitary:
        intake = rationality_intake(_load_iso(args))
        _emit(args, {"intake": intake.to_json()})
        return EXIT_OK
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            cands = [candidate_from_json(json.load(fh))]
    else:
        cands = candidate_corpus(args.corpus, args.seed)
    results = []
    ok = True
    for c in cands:
        try:
            results.append({"status": "passed", "report": rigidity_audit(c).to_json()})
        except NotAnIsometry as exc:
            results.append({"status": "not_an_isometry", "detail": str(exc)})
            ok = False
        except ConclusionViolated as exc:
            results.append({"status": "conclusion_violated", "detail": exc.detail})
            ok = False
    _emit(args, {"candidates": results, "passed": ok})
    return _status(ok)


def cmd_sweep(args):
    rng = np.random.default_rng(args.seed)
    mods = rng.uniform(0.05, 0.95, args.grid)
    phases = rng.uniform(0, 2 * math.pi, args.grid)
    zetas = mods * np.exp(1j * phases)
    rows = sweep(zetas, args.n, jobs=args.jobs)
    text = sweep_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--unitary", help="identity3 | base3 | swap3 | hessenberg:n:seed | family:zeta:n")
    common.add_argument("--in", dest="input", help="isometry bundle (or candidate) JSON")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--zeta", type=parse_complex, help="family parameter, e.g. 0.5+0i")
    common.add_argument("--n", type=int, default=2)
    common.add_argument("--grid", type=int, default=200)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--eps", type=float, default=0.05)

    parser = _Parser(prog="holoiso", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    add("construct", cmd_construct, "solve a frame and emit the isometry bundle")
    add("verify", cmd_verify, "functional and defining residuals on a grid")
    add("ramify", cmd_ramify, "ramification and branch data of R")
    add("classify", cmd_classify, "reduction verdict and congruence invariants")
    add("peel", cmd_peel, "split one Blaschke factor off R")
    fam = add("family", cmd_family, "the zeta family: build or verify")
    fam.add_argument("action", nargs="?", choices=("build", "verify"), default="build")
    add("extendcheck", cmd_extendcheck, "boundary extension checks for n = 2")
    emb = add("embed", cmd_embed, "embed into a classical domain")
    emb.add_argument("--domain", required=True, help="I:p:q | II:m | III:m | IV:n")
    emb.add_argument("--w", type=parse_complex)
    emb.add_argument("--z", help="comma-separated complex entries")
    rig = add("rigidity", cmd_rigidity, "audit rational candidates into ball products")
    rig.add_argument("--corpus", type=int, default=24)
    sw = add("sweep", cmd_sweep, "CSV sweep over random zeta values")
    sw.add_argument("--jobs", type=int, default=1)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.grid < 1:
        parser.error("--grid must be at least 1")
    if not args.tol > 0 or not args.eps > 0:
        parser.error("tolerances must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"holoiso: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContinuationFailure, CrossCheckMismatch) as exc:
        print(f"holoiso: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (HoloisoError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"holoiso: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))
