"""Command-line front end.

    lkernel verify-cor2 --k 8 --s 3.6 --sp 1.4
    lkernel verify-theorem --k 12 --s 5.8 --s-im 1.2 --sp 3.2 --sp-im -1.2 --quadrature
    lkernel table --grid points.json --format csv --out table.csv

Exit status: 0 when every residual is within tolerance, 2 for parameters
outside the admissible region, 3 for accuracy failures.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import kernel as K
from . import selftest
from .errors import AccuracyError, LKernelError, OracleFailure, ValidationError
from .modforms import QExpansion, dim_cusp, eigenbasis, victor_miller_basis
from .specfun import AccuracyBudget

log = logging.getLogger("lkernel")

EXIT_OK, EXIT_INVALID, EXIT_ACCURACY = 0, 2, 3
DEFAULT_TOL = {
    "verify-cor2": 1e-8,
    "verify-theorem": 1e-6,
    "average": 1e-6,
    "table": 1e-6,
    "oracles": 1e-7,
    "selftest": 0.0,
}
QUADRATURE_TOL = 1e-4


@dataclass
class RunConfig:
    command: str
    grid: list = field(default_factory=list)
    tol: float = None
    box: int = None
    m_max: int = 60
    quadrature: bool = False
    out: str = None
    fmt: str = "json"
    cache: str = None
    threads: int = 1

    def __post_init__(self):
        if self.command not in DEFAULT_TOL:
            raise ValueError(f"unknown command {self.command}")
        if self.command not in ("selftest", "oracles") and not self.grid:
            raise ValueError("parameter grid is empty")
        if self.tol is None:
            self.tol = DEFAULT_TOL[self.command]


# ------------------------------------------------------------------ cache


def _cache_path(k, directory):
    return Path(directory) / f"basis_k{k}.json"


def cache_expansions(k, prec, directory):
    """Echelon basis of S_k at precision >= prec, read from or written to ``directory``.

    A cached file with lower precision is recomputed and overwritten; a
    corrupt file is replaced with a warning.
    """
    path = _cache_path(k, directory)
    if path.exists():
        try:
            data = json.loads(path.read_text())
            basis = [QExpansion.from_json(obj) for obj in data["basis"]]
            if int(data["k"]) != k or len(basis) != dim_cusp(k):
                raise ValueError("cache does not match the requested weight")
            if all(g.prec >= prec for g in basis):
                return [g.truncate(prec) for g in basis]
        except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
            log.warning("ignoring corrupt cache %s (%s); recomputing", path, exc)
    basis = victor_miller_basis(k, prec) if dim_cusp(k) else []
    Path(directory).mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"k": k, "prec": prec, "basis": [g.to_json() for g in basis]}))
    os.replace(tmp, path)
    return basis


def _forms(k, cache):
    if not dim_cusp(k):
        return []
    basis = cache_expansions(k, 64, cache) if cache else None
    return eigenbasis(k, basis=basis)


# ----------------------------------------------------------------- points


def parse_grid(obj):
    """Grid entries: [k, s, sp], [k, s_re, s_im, sp_re, sp_im], or dicts with those keys."""
    out = []
    for item in obj:
        if isinstance(item, dict):
            k = item["k"]
            s = complex(item.get("s_re", item.get("s", 0)), item.get("s_im", 0))
            sp = complex(item.get("sp_re", item.get("sp", 0)), item.get("sp_im", 0))
        elif len(item) == 3:
            k, s, sp = item
        elif len(item) == 5:
            k, s, sp = item[0], complex(item[1], item[2]), complex(item[3], item[4])
        else:
            raise ValueError(f"cannot read grid entry {item!r}")
        out.append((int(k), complex(s), complex(sp)))
    return out


def _num(x):
    return float(f"{x:.17g}")


def _params_dict(p):
    return {"k": p.k, "s_re": _num(p.s.real), "s_im": _num(p.s.imag), "sp_re": _num(p.sprime.real), "sp_im": _num(p.sprime.imag)}


# --------------------------------------------------------------- commands


def _cor2(p, cfg):
    res, bound = K.corollary2_residual(p, cfg.box, AccuracyBudget(abs_tol=cfg.tol / 10, rel_tol=1e-16) if cfg.box is None else None)
    return {"params": _params_dict(p), "residual": _num(res), "trunc_error": _num(bound), "ok": res < cfg.tol}


def _theorem(p, cfg):
    rep = K.verify_theorem(p, cfg.box, spectral=True, quadrature_lhs=cfg.quadrature, m_max=cfg.m_max, forms=_forms(p.k, cfg.cache))
    out = rep.to_dict()
    ok = rep.residuals.get("spectral_rel", rep.residuals.get("spectral_abs", 0.0)) <= cfg.tol
    if cfg.quadrature:
        ok = ok and rep.residuals["quadrature_rel"] <= QUADRATURE_TOL
    out["ok"] = bool(ok)
    return out


def _average(p, cfg):
    closed = K.average_lseries(p, cfg.box)
    spec = K.spectral_lhs(p, _forms(p.k, cfg.cache)) / K.c_k(p.k)
    err = abs(closed - spec) / abs(spec) if spec else abs(closed)
    return {
        "params": _params_dict(p),
        "average": [_num(closed.real), _num(closed.imag)],
        "average_spectral": [_num(spec.real), _num(spec.imag)],
        "residual": _num(err),
        "ok": err <= cfg.tol,
    }


def _table_row(p, cfg):
    t = K.rhs_theorem(p, cfg.box)
    row = {"params": _params_dict(p)}
    for name in ("t1", "t2", "t3", "t4", "total"):
        z = getattr(t, name)
        row[name] = [_num(z.real), _num(z.imag)]
    row["trunc_error"] = _num(t.trunc_error)
    if dim_cusp(p.k):
        lhs = K.spectral_lhs(p, _forms(p.k, cfg.cache))
        res = abs(K.gamma_k(p.s, p.k) * t.total - lhs) / abs(lhs)
    else:
        res = abs(t.total)
    row["residual"] = _num(res)
    row["ok"] = res <= (cfg.tol if dim_cusp(p.k) else max(1e-8, 10 * t.trunc_error))
    return row


def _oracles(p, cfg):
    worst = {}
    for q in K.enumerate_quadruples(6):
        direct, closed = K.per_matrix_oracle(q, p)
        worst["per_matrix"] = max(worst.get("per_matrix", 0.0), abs(direct - closed) / max(1.0, abs(closed)))
    closed = K.a_term_closed(p)
    worst["a_term"] = abs(K.a_term_direct(p) - closed) / max(1.0, abs(closed))
    direct, closed = K.c_zero_term_oracle(p)
    worst["c_zero"] = abs(direct - closed) / max(1.0, abs(closed))
    direct, closed = K.beta_integral_check(p.s, p.sprime)
    worst["beta"] = abs(direct - closed) / max(1.0, abs(closed))
    direct, closed = K.lipschitz_check(p.s, 1.0)
    worst["lipschitz"] = abs(direct - closed) / max(1.0, abs(closed))
    return {
        "params": _params_dict(p),
        "residuals": {k: _num(v) for k, v in worst.items()},
        "ok": max(worst.values()) <= cfg.tol,
    }


HANDLERS = {
    "verify-cor2": _cor2,
    "verify-theorem": _theorem,
    "average": _average,
    "table": _table_row,
    "oracles": _oracles,
}

DEFAULT_ORACLE_GRID = [(8, 3.6, 1.4), (12, 6.5, 2.5), (10, 5.2 + 1.3j, 1.8 - 1.3j)]


def _flatten(rec, prefix=""):
    out = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        elif isinstance(val, list) and len(val) == 2:
            out[name + ".re"], out[name + ".im"] = val
        else:
            out[name] = val
    return out


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return "" if v is None else str(v)


def to_csv(records):
    rows = [_flatten(r) for r in records]
    cols = []
    for r in rows:
        cols.extend(c for c in r if c not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def run(cfg):
    """Execute ``cfg``; return (exit status, records)."""
    if cfg.command == "selftest":
        records = [{"check": name, "ok": ok, "detail": detail} for name, ok, detail in selftest.run_all()]
        return (EXIT_OK if all(r["ok"] for r in records) else EXIT_ACCURACY), records
    grid = cfg.grid or DEFAULT_ORACLE_GRID
    try:
        points = [K.validate_params(*g) for g in grid]
    except ValidationError as exc:
        return EXIT_INVALID, [{"error": f"invalid parameters: {exc}"}]
    if cfg.command == "verify-cor2":
        bad = [p.k for p in points if p.k not in K.EMPTY_WEIGHTS]
        if bad:
            msg = f"verify-cor2 needs S_k = 0 (k in {K.EMPTY_WEIGHTS}); got k={bad}"
            return EXIT_INVALID, [{"error": msg}]
    handler = HANDLERS[cfg.command]
    try:
        if cfg.threads > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                records = list(pool.map(lambda p: handler(p, cfg), points))
        else:
            records = [handler(p, cfg) for p in points]
    except (AccuracyError, OracleFailure) as exc:
        return EXIT_ACCURACY, [{"error": f"accuracy failure: {exc}"}]
    return (EXIT_OK if all(r["ok"] for r in records) else EXIT_ACCURACY), records


def _summary_line(rec):
    if "error" in rec:
        return f"error: {rec['error']}"
    if "check" in rec:
        return f"{'ok  ' if rec['ok'] else 'FAIL'} {rec['check']}: {rec['detail']}"
    p = rec["params"]
    head = f"k={p['k']} s={p['s_re']:g}{p['s_im']:+g}i s'={p['sp_re']:g}{p['sp_im']:+g}i"
    if "residuals" in rec:
        tail = " ".join(f"{k}={v:.3g}" for k, v in rec["residuals"].items())
    else:
        tail = f"residual={rec['residual']:.3g}"
        if "trunc_error" in rec and "t1" not in rec:
            tail += f" bound={rec['trunc_error']:.3g}"
    return f"{'ok  ' if rec['ok'] else 'FAIL'} {head} {tail}"


def build_parser():
    ap = argparse.ArgumentParser(prog="lkernel", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("verify-cor2", "check the vanishing sum for k = 8, 10, 14"),
        ("verify-theorem", "compare both sides of the identity"),
        ("average", "average of L*(f,s)L*(f,s')/<f,f> over the eigenbasis"),
        ("oracles", "dual-method checks of every closed-form step"),
        ("selftest", "invariant checks across all modules"),
        ("table", "one row of terms and residuals per grid point"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--k", type=int)
        p.add_argument("--s", type=float, default=None)
        p.add_argument("--s-im", type=float, default=0.0)
        p.add_argument("--sp", type=float, default=None)
        p.add_argument("--sp-im", type=float, default=0.0)
        p.add_argument("--grid", help="JSON file with a list of parameter points")
        p.add_argument("--n-max", type=int, default=None, help="box size for the matrix sum (default: adaptive)")
        p.add_argument("--m-max", type=int, default=60, help="entry bound for the truncated kernel")
        p.add_argument("--quadrature", action="store_true", help="also integrate the truncated kernel")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"), default="json" if name != "table" else "csv")
        p.add_argument("--cache")
        p.add_argument("--threads", type=int, default=1)
    return ap


def config_from_args(args):
    grid = []
    if args.grid:
        grid = parse_grid(json.loads(Path(args.grid).read_text()))
    if args.k is not None:
        if args.s is None or args.sp is None:
            raise ValueError("--k needs --s and --sp")
        grid.append((args.k, complex(args.s, args.s_im), complex(args.sp, args.sp_im)))
    return RunConfig(
        command=args.command,
        grid=grid,
        tol=args.tol,
        box=args.n_max,
        m_max=args.m_max,
        quadrature=args.quadrature,
        out=args.out,
        fmt=args.format,
        cache=os.environ.get("LKERNEL_CACHE") or args.cache,
        threads=max(1, args.threads),
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        status, records = run(cfg)
    except LKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    for rec in records:
        print(_summary_line(rec), file=sys.stderr if "error" in rec else sys.stdout)
    if cfg.out:
        text = to_csv(records) if cfg.fmt == "csv" else json.dumps(records, indent=2) + "\n"
        Path(cfg.out).write_text(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
