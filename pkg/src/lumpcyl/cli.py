"""Command-line interface: reproducible, scriptable computations.

Commands: verify, xi0, metric, geodesic, field, length.  All file outputs
are UTF-8 CSV with a header row, LF line endings and 12 significant
digits, written atomically (temp file + rename); identical invocations
produce byte-identical outputs.  Exit codes: 0 success, 1 validation
error, 2 computation failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
import tempfile

import numpy as np

from . import fibers, flow, xi0
from .elliptic import ellip_k, f_closed, f_quadrature, landen_descend
from .errors import DomainError, LumpcylError
from .lumps import TargetValue, parse_complex, random_lump
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(value: float, digits: int = 12) -> str:
    return f"{value:.{digits}g}"


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list[str], rows, digits: int):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str)
                              else _fmt(cell, digits) for cell in row))
    _atomic_write(path, "\n".join(lines) + "\n")
    print(path)


def _load_config_file(path: str) -> dict:
    out = {}
    fields = {f.name for f in dataclasses.fields(QuadratureConfig)}
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _UsageError(f"{path}:{ln}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in fields:
                raise _UsageError(f"{path}:{ln}: unknown key {key!r}")
            out[key] = int(val) if key in ("y_points", "x_panels",
                                           "max_refinements") else float(val)
    return out


def _quad_config(args) -> QuadratureConfig:
    kw = {}
    if args.config:
        kw.update(_load_config_file(args.config))
    for name in ("x_cutoff", "y_points", "x_panels", "rel_tol",
                 "max_refinements"):
        val = getattr(args, name)
        if val is not None:
            kw[name] = val
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _add_common(sub):
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--config", help="key = value file with quadrature defaults")
    sub.add_argument("--digits", type=int, default=12,
                     help="significant digits in CSV output")
    sub.add_argument("--x-cutoff", dest="x_cutoff", type=float)
    sub.add_argument("--y-points", dest="y_points", type=int)
    sub.add_argument("--x-panels", dest="x_panels", type=int)
    sub.add_argument("--rel-tol", dest="rel_tol", type=float)
    sub.add_argument("--max-refinements", dest="max_refinements", type=int)


def _parse_target(text: str) -> TargetValue:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return TargetValue.infinity()
    return TargetValue.finite(parse_complex(text))


def _complex_list(text: str) -> list[complex]:
    return [parse_complex(tok) for tok in text.split(",") if tok.strip()]


# --- verify --------------------------------------------------------------

def _check_mass(cfg, rng, tol):
    rows = []
    for n in (1, 2):
        expected = 4.0 * math.pi * n
        worst = expected
        for _ in range(10):
            lump = random_lump(rng, n)
            got = fibers.mass(lump, cfg)
            if abs(got - expected) > abs(worst - expected):
                worst = got
        rows.append((f"mass_n{n}", expected, worst, tol, "rel"))
    return rows


def _check_f_lemma(cfg, rng, tol):
    quad_cfg = cfg.replace(rel_tol=min(cfg.rel_tol, 1e-10))
    rows = []
    for t in (0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
        rows.append((f"f_lemma_t{t:g}", f_closed(t),
                     f_quadrature(t, quad_cfg), tol, "abs"))
    return rows


def _check_landen(cfg, rng, tol):
    worst = 0.0
    for k in rng.uniform(0.0, 0.999, size=100):
        kp = math.sqrt((1.0 - k) * (1.0 + k))
        resid = abs(ellip_k(k) * (1.0 + kp) / 2.0
                    - ellip_k(landen_descend(k))) / ellip_k(k)
        worst = max(worst, resid)
    return [("landen", 0.0, worst, tol, "abs")]


def _check_i_oracle(cfg, rng, tol):
    rows = []
    for a in (0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0):
        rows.append((f"i_oracle_a{a:g}", xi0.conformal_factor(a),
                     xi0.conformal_factor_quadrature(a, cfg), tol, "rel"))
    return rows


def _check_gauss_bonnet(cfg, rng, tol):
    return [("gauss_bonnet", 2.0 * math.pi, xi0.total_curvature(cfg),
             tol, "abs")]


_VERIFY_SUITES = {
    "mass": (_check_mass, 1e-6),
    "f_lemma": (_check_f_lemma, 1e-8),
    "landen": (_check_landen, 1e-12),
    "i_oracle": (_check_i_oracle, 1e-6),
    "gauss_bonnet": (_check_gauss_bonnet, 1e-3),
}


def cmd_verify(args) -> int:
    cfg = _quad_config(args)
    rng = np.random.default_rng(args.seed)
    names = list(_VERIFY_SUITES)
    if args.only:
        names = [n for n in names if n in set(args.only.split(","))]
        if not names:
            raise _UsageError(f"--only matched no suite; have {list(_VERIFY_SUITES)}")
    failures = 0
    for name in names:
        fn, default_tol = _VERIFY_SUITES[name]
        tol = args.tol if args.tol is not None else default_tol
        for label, expected, got, tol_, mode in fn(cfg, rng, tol):
            scale = max(abs(expected), 1.0) if mode == "rel" else 1.0
            ok = abs(got - expected) <= tol_ * scale
            failures += 0 if ok else 1
            print(f"{label},{_fmt(expected)},{_fmt(got)},{tol_:g},"
                  f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


# --- data-producing commands ----------------------------------------------

def cmd_xi0(args) -> int:
    cfg = _quad_config(args)
    if not (0 < args.a_min < args.a_max):
        raise _UsageError("need 0 < a-min < a-max")
    decades = math.log10(args.a_max / args.a_min)
    count = int(round(decades * args.per_decade)) + 1
    profile = xi0.embedding_profile(args.a_min, args.a_max, count)
    rows = []
    for a, radius, height in zip(profile.a, profile.radius, profile.height):
        rows.append((a, xi0.conformal_factor(a), xi0.scalar_curvature(a),
                     xi0.effective_potential(a), radius, height))
    _write_csv(os.path.join(args.out, "xi0.csv"),
               ["a", "I", "R", "Ueff", "radius", "height"], rows, args.digits)
    return EXIT_OK


def cmd_metric(args) -> int:
    cfg = _quad_config(args)
    p = _parse_target(args.p)
    zeta = _complex_list(args.zeta)
    coords = fibers.FiberCoordinates(args.n, p, tuple(zeta))
    g = fibers.metric_components(coords, cfg)
    rows = []
    for i in range(g.dim):
        for j in range(g.dim):
            rows.append((str(i), str(j), g.entries[i, j].real,
                         g.entries[i, j].imag))
    _write_csv(os.path.join(args.out, "metric.csv"),
               ["i", "j", "re", "im"], rows, args.digits)
    return EXIT_OK


def cmd_geodesic(args) -> int:
    initial = flow.GeodesicState(args.a0, args.theta0, args.va, args.vtheta)
    traj = flow.xi0_geodesic(initial, args.t_end, args.tol,
                             a_floor=args.a_floor)
    rows = []
    for s in traj.states:
        rows.append((s.t, s.q1, s.q2, s.v1, s.v2, flow.xi0_energy(s),
                     flow.clairaut_constant(s)))
    _write_csv(os.path.join(args.out, "geodesic.csv"),
               ["t", "q1", "q2", "v1", "v2", "energy", "p_theta"],
               rows, args.digits)
    if traj.collapsed:
        print(f"collapsed at t = {_fmt(traj.final.t)}")
    return EXIT_OK


def cmd_field(args) -> int:
    grid = flow.GridSpec(args.x_min, args.x_max, args.nx, args.ny)
    if args.family == "lump":
        if not args.lump:
            raise _UsageError("--family lump needs --lump 'n; c0, c1, ...'")
        from .lumps import parse_lump
        lumps = [parse_lump(args.lump)]
        params = [0j]
        frames = flow.scattering_snapshots("xi0", params, grid, lumps=lumps)
    else:
        params = _complex_list(args.alphas)
        if not params:
            raise _UsageError("--alphas must list at least one value")
        frames = flow.scattering_snapshots(args.family, params, grid)
    manifest = []
    for idx, frame in enumerate(frames):
        name = f"field_{idx:03d}.csv"
        rows = []
        for i, xv in enumerate(frame.x):
            for j, yv in enumerate(frame.y):
                rows.append((xv, yv, frame.values[i, j]))
        _write_csv(os.path.join(args.out, name), ["x", "y", "E"],
                   rows, args.digits)
        manifest.append((name, args.family,
                         _fmt(frame.parameter.real, args.digits),
                         _fmt(frame.parameter.imag, args.digits)))
    _write_csv(os.path.join(args.out, "manifest.csv"),
               ["file", "family", "param_re", "param_im"],
               manifest, args.digits)
    return EXIT_OK


def cmd_length(args) -> int:
    cfg = _quad_config(args)
    path = fibers.collapse_path(args.family, args.n,
                                parse_complex(args.p) if args.p else None)
    speed_cfg = cfg.replace(rel_tol=max(cfg.rel_tol, args.speed_rel_tol)) \
        if args.speed_rel_tol else cfg
    value = fibers.path_length(path, cfg, t_end=args.t_max,
                               speed_cfg=speed_cfg)
    _write_csv(os.path.join(args.out, "length.csv"),
               ["family", "n", "t_max", "length"],
               [(args.family, str(args.n),
                 "inf" if args.t_max is None else _fmt(args.t_max),
                 value)], args.digits)
    print(_fmt(value, args.digits))
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="lumpcyl",
                     description="CP^1 lumps on a cylinder: moduli-space "
                                 "metrics and geodesic scattering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the identity/oracle suites")
    _add_common(p)
    p.add_argument("--only", help="comma-separated suite names")
    p.add_argument("--tol", type=float, help="override every tolerance")
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("xi0", help="scan the symmetric two-lump geometry")
    _add_common(p)
    p.add_argument("--a-min", type=float, default=0.01)
    p.add_argument("--a-max", type=float, default=100.0)
    p.add_argument("--per-decade", type=int, default=100)
    p.set_defaults(fn=cmd_xi0)

    p = sub.add_parser("metric", help="metric components at a moduli point")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True, help="endpoint value or 'inf'")
    p.add_argument("--zeta", required=True,
                   help="comma-separated free coordinates, e.g. '0,1,2'")
    p.set_defaults(fn=cmd_metric)

    p = sub.add_parser("geodesic", help="integrate a geodesic on the "
                                        "symmetric two-lump surface")
    _add_common(p)
    p.add_argument("--a0", type=float, required=True)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--va", type=float, default=0.0)
    p.add_argument("--vtheta", type=float, default=0.0)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--a-floor", type=float, default=flow.A_FLOOR)
    p.set_defaults(fn=cmd_geodesic)

    p = sub.add_parser("field", help="energy-density frames along a family")
    _add_common(p)
    p.add_argument("--family", required=True,
                   choices=["xi0", "gamma1", "gamma2", "gamma3", "lump"])
    p.add_argument("--alphas", default="", help="comma-separated parameters")
    p.add_argument("--lump", help="custom lump literal 'n; c0, c1, ...'")
    p.add_argument("--x-min", type=float, default=-4.0)
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--nx", type=int, default=161)
    p.add_argument("--ny", type=int, default=128)
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("length", help="length of a collapse path")
    _add_common(p)
    p.add_argument("--family", required=True,
                   choices=["gamma0", "gamma_p", "gamma_inf"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", help="endpoint for gamma_p")
    p.add_argument("--t-max", type=float)
    p.add_argument("--speed-rel-tol", type=float,
                   help="loosen the speed quadrature only")
    p.set_defaults(fn=cmd_length)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "out"):
            os.makedirs(args.out, exist_ok=True)
        return args.fn(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LumpcylError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
