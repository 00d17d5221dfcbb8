"""Command-line front end: evaluate kernels on points or grids, dump
coefficient tables, and run the verification suites.

Output is a JSON document {tool_version, config_echo, records} or its flat
CSV projection; complex numbers serialise as {"re": .., "im": ..}.  Given
the same arguments and seed the bytes are identical across runs: records
are computed (optionally on parallel workers) and then sorted by case
index before emission.

Exit codes: 0 success, 1 failed verification, 2 domain error,
3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, geometry, kernels, verify
from .errors import DomainError, MharmonicError, NonConvergent, QuadratureFailure
from .kernels import KernelParams, WeightSpec

ENV_OUTPUT_DIR = "MHARMONIC_OUTPUT_DIR"


def _parse_complex(tok: str) -> complex:
    tok = tok.strip().replace("i", "j")
    if not tok:
        return 0.0 + 0.0j
    return complex(tok)


def parse_point(text: str, n: int) -> np.ndarray:
    """Parse 'a+bi,c,...' into a length-n complex vector.

    Missing trailing coordinates are zero-filled, so '--z 0.3' puts the
    point on the first axis in any dimension."""
    parts = [p for p in text.split(",") if p.strip() != ""]
    coords = [_parse_complex(p) for p in parts]
    if len(coords) > n:
        raise DomainError(f"point {text!r} has {len(coords)} coordinates, expected {n}")
    coords += [0.0 + 0.0j] * (n - len(coords))
    return np.asarray(coords, dtype=complex)


def parse_grid_axis(text: str) -> tuple[str, np.ndarray]:
    """Parse 'name:start,stop,count' into (name, values)."""
    name, _, spec = text.partition(":")
    try:
        start, stop, count = spec.split(",")
        vals = np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise DomainError(f"bad grid axis {text!r} (want name:start,stop,count)") from exc
    return name, vals


def _c(v: complex) -> dict:
    return {"re": float(np.real(v)), "im": float(np.imag(v))}


def _weight_from_args(args) -> WeightSpec:
    if getattr(args, "hardy", False):
        return WeightSpec.hardy()
    return WeightSpec.power(args.s)


def _emit(doc: dict, args) -> None:
    path = args.output
    if path is not None:
        outdir = os.environ.get(ENV_OUTPUT_DIR)
        if outdir and not os.path.isabs(path):
            path = os.path.join(outdir, path)
    if args.format == "json":
        text = json.dumps(doc, separators=(",", ":"), sort_keys=False) + "\n"
    else:
        text = _to_csv(doc["records"])
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _flatten(record: dict, prefix: str = "") -> dict:
    flat = {}
    for key, val in record.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten(val, f"{name}_"))
        elif isinstance(val, (list, tuple)):
            flat[name] = json.dumps(val)
        else:
            flat[name] = val
    return flat


def _to_csv(records: list[dict]) -> str:
    if not records:
        return ""
    rows = [_flatten(r) for r in records]
    fields: list[str] = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _map_cases(fn, cases, workers: int):
    """Evaluate fn over enumerate(cases), deterministically ordered."""
    if workers <= 1:
        results = [fn(i, case) for i, case in enumerate(cases)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ic: fn(*ic), enumerate(cases)))
    return sorted(results, key=lambda r: r["case"])


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _eval_one_kernel(args, weight, n, z, w):
    name = args.kernel
    if name == "szego":
        sv = kernels.szego_2f1(n, z, w, tol=args.tol)
        return sv.value, sv.tail_estimate, sv.truncation_order
    if name == "szego-fd":
        sv = kernels.szego_fd(n, z, w, tol=args.tol)
        return sv.value, sv.tail_estimate, sv.truncation_order
    if name == "bergman":
        params = KernelParams(n=n, weight=weight, tol=args.tol, degree_cap=args.cap)
        sv = kernels.bergman_kernel(params, z, w)
        return sv.value, sv.tail_estimate, sv.truncation_order
    if name == "poisson":
        zeta = w / np.linalg.norm(w)
        return complex(kernels.poisson_szego(n, z, zeta)), 0.0, 0
    if name == "fs":
        sv = kernels.f_s_kernel(n, int(args.s), z, w, cap=args.cap, tol=args.tol)
        return sv.value, sv.tail_estimate, sv.truncation_order
    if name == "hol":
        return kernels.hol_kernel(n, args.s, z, w), 0.0, 0
    if name == "harm":
        return complex(kernels.harm_szego(n, z, w)), 0.0, 0
    raise DomainError(f"unknown kernel {name!r}")


def _eval_points(args, weight):
    n = args.n
    if args.grid:
        axes = dict(parse_grid_axis(a) for a in args.grid)
        if set(axes) == {"r1", "r2"}:
            points = []
            for r1 in axes["r1"]:
                for r2 in axes["r2"]:
                    z = np.zeros(n, dtype=complex)
                    z[0] = r1
                    w = np.zeros(n, dtype=complex)
                    w[0] = r2 * np.exp(1j * args.angle)
                    points.append((z, w))
            return points
        if set(axes) == {"U", "V", "Z"}:
            points = []
            for u in axes["U"]:
                for v in axes["V"]:
                    for zz in axes["Z"]:
                        if zz * zz > u * v + 1e-15:
                            continue
                        points.append(geometry.point_from_invariants(n, u, v, zz))
            return points
        raise DomainError("grid must specify axes r1,r2 or U,V,Z")
    if args.z is None or args.w is None:
        raise DomainError("provide --z and --w, or a --grid")
    return [(parse_point(args.z, n), parse_point(args.w, n))]


def cmd_eval(args) -> int:
    weight = _weight_from_args(args)
    points = _eval_points(args, weight)

    def one(i, zw):
        z, w = zw
        try:
            value, tail, order = _eval_one_kernel(args, weight, args.n, z, w)
        except MharmonicError as exc:
            raise type(exc)(f"case {i} at z={list(z)}, w={list(w)}: {exc}") from exc
        return {
            "case": i,
            "kernel": args.kernel,
            "z": [_c(v) for v in z],
            "w": [_c(v) for v in w],
            "value": _c(value),
            "tail_estimate": float(tail),
            "truncation_order": int(order),
        }

    records = _map_cases(one, points, args.workers)
    doc = {
        "tool_version": __version__,
        "config_echo": _echo(args),
        "records": records,
    }
    _emit(doc, args)
    return 0


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    n = args.n
    records = []
    if args.wallach:
        if not args.s > -n - 1:
            raise DomainError("the continued coefficient requires s > -n-1")
        val = kernels.wallach_f(n, args.p, args.q, args.s, tol=args.tol)
        records.append(
            {
                "case": 0,
                "p": args.p,
                "q": args.q,
                "s": args.s,
                "f_pq": val,
                "tol": args.tol,
            }
        )
    else:
        weight = _weight_from_args(args)
        params = KernelParams(n=n, weight=weight, tol=args.tol)
        i = 0
        for p in range(args.pmax + 1):
            for q in range(args.qmax + 1):
                rec = {"case": i, "p": p, "q": q, "c_pq": kernels.coeff_cpq(params, p, q),
                       "tol": 1e-12}  # coefficients are cached at this internal tolerance
                if args.a_slice is not None:
                    j, m = (int(t) for t in args.a_slice.split(","))
                    rec["j"] = j
                    rec["m"] = m
                    rec["a_pqjm"] = kernels.coeff_apqjm(params, p, q, j, m)
                if args.asymptotic and p > 0 and q > 0:
                    rec["leading_ratio"] = rec["c_pq"] / kernels.cpq_asymptotic_leading(
                        n, weight.s, p, q
                    )
                records.append(rec)
                i += 1
    doc = {"tool_version": __version__, "config_echo": _echo(args), "records": records}
    _emit(doc, args)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


_DIM_SUITES = {"pb", "szego-forms", "orthogonality", "folland", "identity-6-5"}
_N_SUITES = {"reproducing", "asymptotics", "wallach", "semiclassical"}


def cmd_verify(args) -> int:
    extra = {}
    if args.suite in _DIM_SUITES and args.n is not None:
        extra["dims"] = (args.n,)
    elif args.suite in _N_SUITES and args.n is not None:
        extra["n"] = args.n
    if args.suite == "identity-6-5" and args.mmax is not None:
        extra["mmax"] = args.mmax
    reports = verify.run_suite(args.suite, args.seed, **extra)
    records = []
    failures = []
    for i, rep in enumerate(reports):
        rec = {"case": i}
        rec.update(rep.to_record())
        records.append(rec)
        line = "PASS" if rep.passed else "FAIL"
        print(f"[{line}] {rep.identity_name}  rel_error={rep.rel_error:.3e}", file=sys.stderr)
        if not rep.passed:
            failures.append(rep.identity_name)
    doc = {
        "tool_version": __version__,
        "config_echo": _echo(args),
        "records": records,
        "failures": failures,
    }
    _emit(doc, args)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _echo(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mharmonic",
        description="Szego / Poisson-Szego / weighted Bergman kernels of "
        "invariant-harmonic functions on the complex unit ball",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=2, help="ball dimension")
        p.add_argument("--s", type=float, default=0.0, help="weight exponent s")
        p.add_argument("--hardy", action="store_true", help="use the point mass at t=1")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help=f"output path (relative paths join ${ENV_OUTPUT_DIR})")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)

    pe = sub.add_parser("eval", help="evaluate a kernel at points or on a grid")
    common(pe)
    pe.add_argument("--kernel", default="szego",
                    choices=("szego", "szego-fd", "bergman", "poisson", "fs", "hol", "harm"))
    pe.add_argument("--z", help="comma-separated complex coordinates")
    pe.add_argument("--w", help="comma-separated complex coordinates")
    pe.add_argument("--grid", nargs="*", help="axes like r1:0,0.9,10 r2:0,0.9,10 or U:..,V:..,Z:..")
    pe.add_argument("--angle", type=float, default=0.0, help="phase angle for the r-grid")
    pe.add_argument("--cap", type=int, default=96, help="total-degree cap for series kernels")
    pe.set_defaults(func=cmd_eval)

    pc = sub.add_parser("coeffs", help="tabulate c_pq / A_pqjm / continued coefficients")
    common(pc)
    pc.add_argument("--pmax", type=int, default=4)
    pc.add_argument("--qmax", type=int, default=4)
    pc.add_argument("--a-slice", help="emit A_pqjm for fixed 'j,m' alongside c_pq")
    pc.add_argument("--asymptotic", action="store_true",
                    help="add the ratio to the large-index leading term")
    pc.add_argument("--wallach", action="store_true",
                    help="analytic continuation f_pq(s), s > -n-1")
    pc.add_argument("--p", type=int, default=1)
    pc.add_argument("--q", type=int, default=0)
    pc.set_defaults(func=cmd_coeffs)

    pv = sub.add_parser("verify", help="run a named verification suite")
    common(pv)
    pv.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    pv.add_argument("--mmax", type=int, help="degree bound for the identity-6-5 suite")
    pv.set_defaults(func=cmd_verify, n=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergent, QuadratureFailure) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3
    except MharmonicError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
