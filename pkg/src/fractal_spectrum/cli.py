"""Command-line front end.

Every subcommand writes one report (JSON by default, CSV where a table makes
sense) to standard output or ``--out``.  Exit status: 0 when the report
passes, 1 when a check fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import __version__
from .boundary import atom_scan, cylinder_tree
from .cuntz import cuntz_identity_check, p_k_project, wold_report
from .errors import FractalSpectrumError
from .fractal import block_structure_check, relation_checks, u_matrix
from .gamma import MAX_DEPTH, enumerate_gamma, format_word, index_to_word, is_in_gamma, parse_word
from .parsing import load_vector
from .report import Report, jsonable
from .spectral import (TrigPoly, cyclic_project, decompose_once, fejer_density, iterate_decomposition,
                       mu_moments, rn_estimate, transitivity_check, u_moments)
from .transform import TransformConfig, mu_hat_int, reduction_trace
from .vectors import gamma_norm
from .verify import verify_all

RESIDUAL_TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    depth: int | None
    kmax: int
    cfg: TransformConfig
    fmt: str
    out: str | None
    figure: str | None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if args.depth is not None and not 0 <= args.depth <= MAX_DEPTH:
            raise UsageError(f"--depth must be between 0 and {MAX_DEPTH}")
        if args.kmax < 0:
            raise UsageError("--kmax must be nonnegative")
        try:
            cfg = TransformConfig(extra_terms=args.terms, abs_tol=args.tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return cls(args.depth, args.kmax, cfg, args.format, args.out, args.figure)

    def depth_or(self, default: int) -> int:
        return default if self.depth is None else self.depth


def _emit(text: str, rc: RunConfig) -> None:
    if rc.out:
        with open(rc.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(payload: dict, command: str) -> str:
    return json.dumps({"version": __version__, "command": command, **jsonable(payload)},
                      indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# fractal_spectrum {__version__}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _report(report: Report, rc: RunConfig, command: str) -> int:
    _emit(_json(report.to_json_dict(), command), rc)
    return 0 if report.passed else 1


def _figure(rc: RunConfig, draw, *objs) -> None:
    if rc.figure:
        from . import plotting

        getattr(plotting, draw)(*objs, rc.figure)


def cmd_muhat(args, rc):
    value = mu_hat_int(args.n, rc.cfg)
    _emit(_json({"n": args.n, "value": value.value, "error_bound": value.error_bound,
                 "reductions": reduction_trace(args.n)}, "muhat"), rc)
    return 0


def cmd_gamma(args, rc):
    if args.contains is not None:
        inside = is_in_gamma(args.contains)
        payload = {"n": args.contains, "in_gamma": inside,
                   "word": format_word(index_to_word(args.contains)) if inside else None}
    else:
        depth = rc.depth_or(4)
        points = enumerate_gamma(depth)
        payload = {"depth": depth, "count": len(points), "points": points}
    _emit(_json(payload, "gamma"), rc)
    return 0


def cmd_cuntz_check(args, rc):
    return _report(cuntz_identity_check(rc.depth_or(8)), rc, "cuntz-check")


def cmd_wold(args, rc):
    return _report(wold_report(load_vector(args.vec), args.n), rc, "wold")


def cmd_relations(args, rc):
    return _report(relation_checks(rc.depth_or(8)), rc, "relations")


def cmd_blocks(args, rc):
    return _report(block_structure_check(rc.depth_or(8), args.levels), rc, "blocks")


def cmd_umatrix(args, rc):
    um = u_matrix(rc.depth_or(4), rc.cfg, args.columns)
    if rc.fmt == "csv":
        rows = ((xi, g, um.matrix[i, j].real, um.matrix[i, j].imag)
                for i, xi in enumerate(um.rows) for j, g in enumerate(um.cols))
        _emit(_csv(["xi", "gamma", "re", "im"], rows), rc)
    else:
        _emit(_json({"depth": um.depth, "column_depth": um.column_depth,
                     "unitarity_deficit": um.unitarity_deficit, "error_bound": um.error_bound,
                     "column_norms": um.column_norms, "rows": um.rows, "cols": um.cols,
                     "matrix": um.matrix}, "umatrix"), rc)
    _figure(rc, "umatrix_figure", um)
    return 0


def cmd_cylinder(args, rc):
    v = load_vector(args.vec)
    tree = cylinder_tree(v, rc.depth_or(4))
    payload = tree.to_json_dict()
    if args.path:
        bits = parse_word(args.path)
        payload["path"] = {"word": args.path, "masses": atom_scan(v, bits, len(bits) - 1)}
    if rc.fmt == "csv":
        _emit(_csv(["prefix", "mass"], tree.rows()), rc)
    else:
        _emit(_json(payload, "cylinder"), rc)
    _figure(rc, "cylinder_figure", tree)
    return 0 if tree.ok() else 1


def _op_moments(op, v, kmax, rc):
    fn = u_moments if op == "U" else mu_moments
    return fn(v, kmax, rc.cfg, rc.depth)


def cmd_moments(args, rc):
    ms = _op_moments(args.op, load_vector(args.vec), rc.kmax, rc)
    _emit(_json({"op": args.op, **ms.to_json_dict()}, "moments"), rc)
    return 0


def cmd_decompose(args, rc):
    d = decompose_once(load_vector(args.vec), rc.kmax, rc.cfg, rc.depth)
    return _report(d.report(RESIDUAL_TOL), rc, "decompose")


def cmd_iterate(args, rc):
    v = load_vector(args.vec)
    if args.normalize:
        norm = gamma_norm(v)
        if norm == 0:
            raise UsageError("cannot normalize the zero vector")
        v = v / norm
    d = iterate_decomposition(v, rc.kmax, rc.cfg, rc.depth)
    ok = d.residual <= RESIDUAL_TOL and d.weights_match_cylinders
    _emit(_json({"passed": ok, "tolerance": RESIDUAL_TOL, **d.to_json_dict()}, "iterate"), rc)
    return 0 if ok else 1


def cmd_density(args, rc):
    ms = _op_moments(args.op, load_vector(args.vec), args.N, rc)
    dens = fejer_density(ms, args.N, args.grid)
    if rc.fmt == "json":
        _emit(_json({"op": args.op, "N": args.N, "min_value": dens.min_value,
                     "nonnegative": dens.nonnegative, "theta": dens.theta,
                     "values": dens.values}, "density"), rc)
    else:
        _emit(_csv(["theta", "value"], dens.rows()), rc)
    _figure(rc, "density_figure", dens)
    return 0 if dens.nonnegative else 1


def cmd_rn(args, rc):
    num = u_moments(load_vector(args.num), args.N, rc.cfg, rc.depth)
    den = u_moments(load_vector(args.den), args.N, rc.cfg, rc.depth)
    est = rn_estimate(num, den, args.N, args.grid, args.floor)
    if rc.fmt == "json":
        _emit(_json({"N": args.N, "floor": est.floor, "theta": est.theta,
                     "ratio": [None if r != r else r for r in est.ratio.tolist()]}, "rn"), rc)
    else:
        _emit(_csv(["theta", "ratio"], ((t, "" if r != r else r) for t, r in est.rows())), rc)
    _figure(rc, "rn_figure", est)
    return 0


def cmd_project(args, rc):
    if args.w or args.v:
        if not (args.w and args.v) or args.vec is not None:
            raise UsageError("cyclic projection needs both --w and --v (and no --vec)")
        res = cyclic_project(load_vector(args.w), load_vector(args.v), args.M, rc.cfg, depth=rc.depth)
        _emit(_json({"M": args.M, **res.to_json_dict()}, "project"), rc)
        return 0
    if args.vec is None or args.k is None:
        raise UsageError("project needs --vec and --k, or --w and --v")
    v = load_vector(args.vec)
    pk = p_k_project(v, args.k)
    _emit(_json({"k": args.k, "projection": pk, "norm": gamma_norm(pk)}, "project"), rc)
    return 0


def cmd_transitivity(args, rc):
    phi = TrigPoly.parse(args.phi)
    return _report(transitivity_check(load_vector(args.vec), args.k, phi, rc.cfg,
                                      depth=rc.depth), rc, "transitivity")


def cmd_verify_all(args, rc):
    reports = verify_all(seed=args.seed, depth=rc.depth_or(6), cfg=rc.cfg)
    for r in reports:
        print(r.line(), file=sys.stderr)
    passed = all(r.passed for r in reports)
    _emit(_json({"passed": passed, "seed": args.seed,
                 "checks": [r.to_json_dict() for r in reports]}, "verify-all"), rc)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None,
                        help="spectrum depth L (command-specific default)")
    common.add_argument("--kmax", type=int, default=12, help="highest moment")
    common.add_argument("--terms", type=int, default=30, help="extra product factors")
    common.add_argument("--tol", type=float, default=1e-12, help="transform error tolerance")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--figure", help="also render a PNG figure (needs matplotlib)")

    parser = argparse.ArgumentParser(prog="fractal-spectrum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("muhat", cmd_muhat, "transform value at an integer")
    p.add_argument("n", type=int)
    p = add("gamma", cmd_gamma, "enumerate spectrum points or test membership")
    p.add_argument("--contains", type=int)
    add("cuntz-check", cmd_cuntz_check, "Cuntz relations on basis vectors")
    p = add("wold", cmd_wold, "Wold sequence of S_0 adjoint powers")
    p.add_argument("--vec", required=True)
    p.add_argument("--n", type=int, default=10)
    add("relations", cmd_relations, "U, S_0, S_1 and MU relations")
    p = add("blocks", cmd_blocks, "block structure of U")
    p.add_argument("--levels", type=int, default=6)
    p = add("umatrix", cmd_umatrix, "truncated matrix of U")
    p.add_argument("--columns", type=int, default=None, help="column depth (default: --depth)")
    p = add("cylinder", cmd_cylinder, "cylinder masses of a vector")
    p.add_argument("--vec", required=True)
    p.add_argument("--path", help="binary word whose prefixes are scanned")
    p = add("moments", cmd_moments, "moment sequence of a spectral measure")
    p.add_argument("--op", choices=("U", "MU"), default="U")
    p.add_argument("--vec", required=True)
    p = add("decompose", cmd_decompose, "one-step measure decomposition")
    p.add_argument("--vec", required=True)
    p = add("iterate", cmd_iterate, "full operator-fractal expansion of a measure")
    p.add_argument("--vec", required=True)
    p.add_argument("--normalize", action="store_true")
    p = add("density", cmd_density, "Fejer density of a spectral measure")
    p.add_argument("--op", choices=("U", "MU"), default="U")
    p.add_argument("--vec", required=True)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--grid", type=int, default=512)
    p = add("rn", cmd_rn, "Radon-Nikodym estimate between two U-measures")
    p.add_argument("--num", required=True)
    p.add_argument("--den", required=True)
    p.add_argument("--N", type=int, default=12)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--floor", type=float, default=None)
    p = add("project", cmd_project, "P_k projection (--vec, --k) or cyclic projection (--w, --v)")
    p.add_argument("--vec")
    p.add_argument("--k", type=int)
    p.add_argument("--w")
    p.add_argument("--v")
    p.add_argument("--M", type=int, default=16)
    p = add("transitivity", cmd_transitivity, "transitivity identity for a test polynomial")
    p.add_argument("--vec", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--phi", default="1")
    p = add("verify-all", cmd_verify_all, "run every acceptance check")
    p.add_argument("--seed", type=int, default=0)
    return parser


_TABLES = ("umatrix", "cylinder", "density", "rn")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.out in ("csv", "json") and args.format is None:
        # "--out csv" names the output format and keeps stdout as the target
        args.format, args.out = args.out, None
    if args.format is None:
        to_csv = args.command == "density" or (
            args.command in _TABLES and (args.out or "").endswith(".csv"))
        args.format = "csv" if to_csv else "json"
    try:
        rc = RunConfig.from_args(args)
        return args.func(args, rc)
    except (UsageError, FractalSpectrumError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
