"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 usage error. Errors raised after
argument parsing are printed as a JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import _rng
from .acceptance import run_all
from .blahut import bernoulli, blahut_arimoto, discretize_exponential, discretize_laplacian, rate_at_distortion
from .covering import covering_lower_bound
from .distortion import (
    KINDS, WindowCodeword, d_norm_l1, d_onesided_l1, d_pc, d_q, distortion_set_volume_mc,
)
from .experiment import EXPERIMENT_KINDS, empirical_rd_experiment, to_csv
from .groups import family, is_subgroup, isomorphic, semidirect_verify
from .polytopes import (
    POLYTOPE_FAMILIES, graph_automorphisms, polytope_graph, verify_sym_equals_aut,
    vertex_symmetry_group, family_polytope,
)
from .source import (
    IntervalVector, PointPattern, SignedIntervalVector, sample_homogeneous, sample_intervals,
    sample_laplacian,
)
from .symmetrize import run, standard_start


class UsageError(ValueError):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _grid(text: str) -> list[Fraction]:
    return [_fraction(x) for x in text.split(",") if x.strip()]


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0 or not math.isfinite(x):
        raise argparse.ArgumentTypeError("must be a positive number")
    return x


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# subcommands; each returns the text to emit


def cmd_simulate(a) -> str:
    if a.form == "timings":
        p = sample_homogeneous(a.rate, a.T, a.seed)
        return _dump(p.to_json())
    if a.n is None:
        raise UsageError("--n is required for interval forms")
    if a.form == "intervals":
        return _dump(sample_intervals(a.n, a.rate, a.seed).to_json())
    return _dump(sample_laplacian(a.n, a.rate, a.seed).to_json())


def _load(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_distort(a) -> str:
    if a.volume:
        if a.kind not in ("point-covering", "queueing") or a.n is None or a.D is None:
            raise UsageError("--volume needs --kind point-covering|queueing, --n and --D")
        if a.kind == "point-covering":
            cw = WindowCodeword(1.0, ((Fraction(0), a.D),))
        else:
            cw = [float(x) for x in a.codeword.split(",")] if a.codeword else [0.0] * a.n
        est = distortion_set_volume_mc(a.kind, cw, float(a.D), a.n, a.samples, a.seed, a.workers)
        return _dump({"estimate": est.estimate, "std_error": est.std_error,
                      "hits": est.hits, "samples": est.samples})
    if a.input is None:
        raise UsageError("--input FILE with {'source': ..., 'codeword': ...} is required")
    obj = _load(a.input)
    src, cw = obj["source"], obj["codeword"]
    if a.kind == "point-covering":
        val = d_pc(PointPattern.from_json(src), WindowCodeword.from_json(cw))
    elif a.kind == "queueing":
        val = d_q(PointPattern.from_json(src), PointPattern.from_json(cw))
    elif a.kind == "normalized-l1":
        val = d_norm_l1(SignedIntervalVector.from_json(src), cw["values"] if isinstance(cw, dict) else cw)
    else:
        xh = cw["intervals"] if isinstance(cw, dict) else cw
        val = d_onesided_l1(IntervalVector.from_json(src), xh)
    return _dump(val.to_json())


def cmd_rd_curve(a) -> str:
    pts = empirical_rd_experiment(a.kind, a.rate, a.n, a.D_grid, a.samples, a.seed)
    return to_csv(pts)


def _ba_source(a):
    if a.source == "bernoulli":
        return bernoulli(0.5)
    make = discretize_laplacian if a.source == "laplacian" else discretize_exponential
    return make(a.rate, a.truncation, a.step)


def cmd_ba(a) -> str:
    src = _ba_source(a)
    if (a.D is None) == (a.slope is None):
        raise UsageError("give exactly one of --D and --slope")
    kw = {"max_iters": a.max_iters, "tol": a.tol}
    p = rate_at_distortion(src, a.D, **kw) if a.D is not None else blahut_arimoto(src, slope=a.slope, **kw)
    return _dump({"R": p.rate, "D": p.distortion, "iters": p.metadata["iters"],
                  "tol": p.metadata["tol"], "slope": p.metadata["slope"]})


def cmd_cover_bound(a) -> str:
    return _dump(covering_lower_bound(a.shape, a.n, a.D).to_json())


def cmd_group(a) -> str:
    G = family(a.family, a.n)
    if a.order:
        return _dump(G.order)
    if a.verify_semidirect:
        H1 = family(a.normal, a.n)
        H2 = family(a.complement, a.n)
        if not (is_subgroup(H1, G) and is_subgroup(H2, G)):
            raise UsageError("both factors must be subgroups of the group")
        return _dump(semidirect_verify(G, H1, H2).to_json())
    other = family(a.other, a.other_n or a.n)
    res = isomorphic(G, other)
    out = {"isomorphic": res.isomorphic, "orders": [G.order, other.order]}
    if res.witness is not None:
        out["witness"] = [[k.to_json(), v.to_json()] for k, v in sorted(res.witness.items())]
    return _dump(out)


def cmd_polytope(a) -> str:
    if a.action == "sym-order":
        return _dump(vertex_symmetry_group(family_polytope(a.family, a.n)).order)
    if a.action == "aut-order":
        return _dump(graph_automorphisms(polytope_graph(a.family, a.n), cap=max(16, 2 ** a.n)).order)
    if a.action == "graph":
        return _dump(polytope_graph(a.family, a.n).to_json())
    return _dump(verify_sym_equals_aut(a.family, a.n, slow=a.slow).to_json())


def cmd_symmetrize(a) -> str:
    first, second = standard_start(a.n)
    return _dump(run(first, second, a.max_steps, heuristic=a.heuristic).to_json())


def cmd_verify_all(a) -> tuple[str, int]:
    results = run_all(slow=a.slow, only=set(a.only) if a.only else None, out=None)
    text = "".join(r.line() + "\n" for r in results)
    return text, 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poissonrd", description="Poisson rate-distortion geometry toolkit")
    p.add_argument("--out", help="write the result to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--out", default=argparse.SUPPRESS, help="output path")
        if seed:
            sp.add_argument("--seed", type=int, default=_rng.DEFAULT_SEED)

    s = sub.add_parser("simulate", help="sample a Poisson realization")
    s.add_argument("--lambda", dest="rate", type=_positive, default=1.0)
    s.add_argument("--T", type=_positive, default=1.0)
    s.add_argument("--n", type=int)
    s.add_argument("--form", choices=("timings", "intervals", "laplacian"), default="timings")
    common(s)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("distort", help="evaluate a distortion or estimate a distortion-set volume")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--input", help="JSON file with 'source' and 'codeword'")
    s.add_argument("--volume", action="store_true")
    s.add_argument("--n", type=int)
    s.add_argument("--D", type=_fraction)
    s.add_argument("--codeword", help="comma-separated queueing codeword for --volume")
    s.add_argument("--samples", type=int, default=10 ** 6)
    s.add_argument("--workers", type=int, default=1)
    common(s)
    s.set_defaults(func=cmd_distort)

    s = sub.add_parser("rd-curve", help="constructive rate-distortion experiment (CSV)")
    s.add_argument("--kind", choices=EXPERIMENT_KINDS, required=True)
    s.add_argument("--lambda", dest="rate", type=_positive, default=1.0)
    s.add_argument("--n", type=int, default=16)
    s.add_argument("--D-grid", dest="D_grid", type=_grid, default=_grid("1/8,1/4,1/2,1"))
    s.add_argument("--samples", type=int, default=1000)
    common(s)
    s.set_defaults(func=cmd_rd_curve)

    s = sub.add_parser("ba", help="Blahut-Arimoto on a discretized source")
    s.add_argument("--source", choices=("laplacian", "exponential", "bernoulli"), default="laplacian")
    s.add_argument("--lambda", dest="rate", type=_positive, default=1.0)
    s.add_argument("--D", type=_positive)
    s.add_argument("--slope", type=_positive)
    s.add_argument("--step", type=_positive)
    s.add_argument("--truncation", type=_positive)
    s.add_argument("--max-iters", dest="max_iters", type=int, default=20_000)
    s.add_argument("--tol", type=_positive, default=1e-7)
    common(s, seed=False)
    s.set_defaults(func=cmd_ba)

    s = sub.add_parser("cover-bound", help="covering-count lower bound")
    s.add_argument("--shape", choices=("cube", "order-simplex"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--D", type=_fraction, required=True)
    common(s, seed=False)
    s.set_defaults(func=cmd_cover_bound)

    s = sub.add_parser("group", help="finite group queries")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--order", action="store_true")
    mode.add_argument("--verify-semidirect", dest="verify_semidirect", action="store_true")
    mode.add_argument("--isomorphic", action="store_true")
    s.add_argument("--family", default="O", help="S, H, O, trivial, D4 or C<k>")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--normal", default="H", help="normal factor for --verify-semidirect")
    s.add_argument("--complement", default="S", help="complement for --verify-semidirect")
    s.add_argument("--other", default="D4", help="second group for --isomorphic")
    s.add_argument("--other-n", dest="other_n", type=int)
    common(s, seed=False)
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("polytope", help="polytope symmetry queries")
    s.add_argument("action", choices=("sym-order", "aut-order", "verify", "graph"))
    s.add_argument("--family", choices=POLYTOPE_FAMILIES, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--slow", action="store_true")
    common(s, seed=False)
    s.set_defaults(func=cmd_polytope)

    s = sub.add_parser("symmetrize", help="run the alternating symmetrization")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--max-steps", dest="max_steps", type=int, default=8)
    s.add_argument("--heuristic", action="store_true",
                   help="compare group orders instead of testing isomorphism above the cap")
    common(s, seed=False)
    s.set_defaults(func=cmd_symmetrize)

    s = sub.add_parser("verify-all", help="run the acceptance suite")
    s.add_argument("--slow", action="store_true")
    s.add_argument("--only", type=int, nargs="*")
    common(s, seed=False)
    s.set_defaults(func=cmd_verify_all)
    return p


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        result = args.func(args)
    except (UsageError, ValueError, OverflowError) as exc:
        _emit(_dump({"error": type(exc).__name__, "message": str(exc), "exit": 2}), None)
        return 2
    except Exception as exc:
        _emit(_dump({"error": type(exc).__name__, "message": str(exc), "exit": 1}), None)
        return 1
    status = 0
    if isinstance(result, tuple):
        result, status = result
    _emit(result, getattr(args, "out", None))
    return status


if __name__ == "__main__":
    sys.exit(main())
