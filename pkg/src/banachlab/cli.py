"""Command-line experiments: ``banachlab {sweep,bj,theorem1,stack,opnorm,opial}``.

Every subcommand emits one table, as CSV (default) or JSON, to standard
output or ``--out``. Output is deterministic for a fixed seed. Failures
print a single line ``banachlab: error: field=<name>: <message>`` to
standard error and exit nonzero (2 for bad input, 1 for a failed check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupTableError,
    cyclic_group,
    invariant_projection,
    mean_operator,
    read_cayley_file,
    regular_representation,
)
from .lp import DenseVector, Exponent, ExponentError, SparseSeq
from .opnorm import (
    BRUTE_MAX_DIM,
    NormEstimate,
    OperatorMatrix,
    block_estimates,
    block_psum_norm,
    opnorm_auto,
    opnorm_brute,
    opnorm_exact,
    opnorm_power,
)
from .orthogonality import bj_orthogonal
from .shift import opial_gap, random_certificate_instance, theorem1_certificate

METHODS = ("exact", "power", "brute", "auto")

COLUMNS = {
    "sweep": ["n", "p", "norm_P", "norm_complement", "analytic_inf_value", "method", "iterations", "converged"],
    "stack": ["scope", "n", "p", "norm_complement", "analytic_inf_value", "method", "converged"],
    "bj": ["p", "kato_pairing", "min_lambda", "min_value", "norm_v", "kato_verdict",
           "minimization_verdict", "orthogonal"],
    "opnorm": ["n", "p", "norm", "method", "iterations", "converged", "witness"],
    "theorem1": ["quantity", "value"],
    "opial": ["quantity", "value"],
}


class CliError(Exception):
    def __init__(self, field: str, message: str, code: int = 2):
        super().__init__(message)
        self.field = field
        self.message = message
        self.code = code


# ---------------------------------------------------------------------------
# parsing


def parse_int_list(text: str, field: str) -> list[int]:
    """``"3..10"``, ``"3,5,8"`` or a mix such as ``"3..5,9"``."""
    out: list[int] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            raise CliError(field, f"empty entry in {text!r}")
        try:
            if ".." in tok:
                a, b = tok.split("..", 1)
                lo, hi = int(a), int(b)
                if hi < lo:
                    raise CliError(field, f"empty range {tok!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(tok))
        except ValueError:
            raise CliError(field, f"bad integer {tok!r}") from None
    return out


def parse_exponent(tok: str, field: str) -> Exponent:
    try:
        return Exponent.of(tok)
    except ExponentError as exc:
        raise CliError(field, str(exc)) from None


def parse_exponents(text: str, field: str) -> list[Exponent]:
    toks = [t for t in text.split(",")]
    if any(not t.strip() for t in toks):
        raise CliError(field, f"empty entry in {text!r}")
    return [parse_exponent(t, field) for t in toks]


def parse_vector(text: str, field: str) -> np.ndarray:
    vals = []
    for tok in text.split(","):
        try:
            x = float(tok)
        except ValueError:
            raise CliError(field, f"bad number {tok.strip()!r}") from None
        if not math.isfinite(x):
            raise CliError(field, f"non-finite number {tok.strip()!r}")
        vals.append(x)
    return np.array(vals)


def parse_sparse(text: str, field: str) -> dict[int, float]:
    """``"0:1,3:-2.5"``; the empty string is the zero sequence."""
    out: dict[int, float] = {}
    if not text.strip():
        return out
    for tok in text.split(","):
        if ":" not in tok:
            raise CliError(field, f"expected index:value, got {tok.strip()!r}")
        i, x = tok.split(":", 1)
        try:
            out[int(i)] = out.get(int(i), 0.0) + float(x)
        except ValueError:
            raise CliError(field, f"bad entry {tok.strip()!r}") from None
    return out


def parse_matrix(text: str, field: str) -> np.ndarray:
    rows = [parse_vector(r, field) for r in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise CliError(field, "rows have different lengths")
    return np.array(rows)


def format_p(p: Exponent) -> str:
    if p.is_inf:
        return "inf"
    v = p.value
    return str(int(v)) if v == int(v) else repr(v)


def _cell(x, fmt="csv"):
    if isinstance(x, Exponent):
        if fmt == "json" and not x.is_inf:
            return int(x.value) if x.value == int(x.value) else x.value
        return format_p(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "inf" if math.isinf(x) else x
    return x


# ---------------------------------------------------------------------------
# output


def render(command: str, rows: list[dict], fmt: str) -> str:
    cols = COLUMNS[command]
    rows = [{c: _cell(r.get(c), fmt) for c in cols} for r in rows]
    if fmt == "json":
        return json.dumps({"command": command, "columns": cols, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow(["" if r[c] is None else (repr(r[c]) if isinstance(r[c], float) else r[c]) for c in cols])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepConfig:
    group_sizes: tuple[int, ...]
    exponents: tuple[Exponent, ...]
    method: str = "auto"
    seed: int = 0
    output_format: str = "csv"
    group: FiniteGroup | None = None

    def __post_init__(self):
        if not self.group_sizes:
            raise CliError("ns", "no group sizes given")
        if not self.exponents:
            raise CliError("ps", "no exponents given")
        if any(n < 1 for n in self.group_sizes):
            raise CliError("ns", f"group sizes must be >= 1, got {min(self.group_sizes)}")
        if self.method not in METHODS:
            raise CliError("method", f"unknown method {self.method!r}")
        if self.output_format not in ("csv", "json"):
            raise CliError("format", f"unknown format {self.output_format!r}")
        for p in self.exponents:
            if self.method == "exact" and not (p.is_one or p.is_two or p.is_inf):
                raise CliError("method", f"exact needs p in {{1, 2, inf}}, got p={format_p(p)}")
            if self.method == "power" and not p.is_interior:
                raise CliError("method", f"power needs 1 < p < inf, got p={format_p(p)}")
        if self.method == "brute" and max(self.group_sizes) > BRUTE_MAX_DIM:
            raise CliError("method", f"brute needs n <= {BRUTE_MAX_DIM}, got n={max(self.group_sizes)}")


def estimate(A: OperatorMatrix, method: str, seed: int) -> NormEstimate:
    if method == "exact":
        return opnorm_exact(A)
    if method == "power":
        return opnorm_power(A, seed)
    if method == "brute":
        return opnorm_brute(A)
    return opnorm_auto(A, seed)


def sweep_cell(group: FiniteGroup, p: Exponent, method: str, seed: int) -> dict:
    proj = invariant_projection(regular_representation(group, p))
    ep = estimate(OperatorMatrix(proj.p_invariant, p), method, seed)
    ec = estimate(OperatorMatrix(proj.complement, p), method, seed)
    n = group.order
    return {
        "n": n,
        "p": p,
        "norm_P": ep.lower,
        "norm_complement": ec.lower,
        "analytic_inf_value": 2.0 - 2.0 / n if p.is_inf else None,
        "method": ec.method.value,
        "iterations": ep.iterations + ec.iterations,
        "converged": ep.converged and ec.converged,
    }


def cmd_projection_sweep(cfg: SweepConfig, jobs: int = 1) -> list[dict]:
    if cfg.group is not None:
        groups = [cfg.group]
    else:
        groups = [cyclic_group(n) for n in cfg.group_sizes]
    cells = [(g, p) for g in groups for p in cfg.exponents]
    run = lambda c: sweep_cell(c[0], c[1], cfg.method, cfg.seed)  # noqa: E731
    if jobs > 1:
        # map() yields in submission order, so output order is fixed
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(run, cells))
    return [run(c) for c in cells]


# ---------------------------------------------------------------------------
# other subcommands


def cmd_bj(v: np.ndarray, w: np.ndarray, p: Exponent, tol: float = 1e-8) -> list[dict]:
    if len(v) != len(w):
        raise CliError("w", f"length {len(w)} differs from v length {len(v)}")
    if not p.is_interior:
        raise CliError("p", "Birkhoff-James check needs 1 < p < inf")
    if not np.any(v):
        raise CliError("v", "v must be nonzero")
    if not np.any(w):
        raise CliError("w", "w must be nonzero")
    r = bj_orthogonal(DenseVector(v, p), DenseVector(w, p), tol)
    return [{"p": p, **r.as_dict()}]


def cmd_theorem1(p: Exponent, trivial_dim: int, seed: int, g_max: int = 10) -> tuple[list[dict], str | None]:
    """Random instance of the certificate; returns rows and the first failure."""
    if not p.is_interior:
        raise CliError("p", "theorem1 needs 1 < p < inf")
    if trivial_dim < 1:
        raise CliError("trivial-dim", "trivial_dim must be >= 1")
    if g_max < 1:
        raise CliError("g-max", "g_max must be >= 1")
    rng = np.random.default_rng(seed)
    v, w = random_certificate_instance(rng, p, trivial_dim)
    gs = list(range(1, g_max + 1))
    cert = theorem1_certificate(v, w, gs)
    rows = [{"quantity": "v", "value": " ".join(f"{i}:{x!r}" for i, x in v.seq.items)},
            {"quantity": "w_fixed", "value": " ".join(repr(float(x)) for x in w.fixed)}]
    for g, cp, cm in zip(gs, cert.c_plus, cert.c_minus):
        rows.append({"quantity": f"c_plus[{g}]", "value": cp})
        rows.append({"quantity": f"c_minus[{g}]", "value": cm})
    rows += [
        {"quantity": "c_limit", "value": cert.c_limit},
        {"quantity": "kato_pairing", "value": cert.bj.kato_pairing},
        {"quantity": "min_lambda", "value": cert.bj.min_lambda},
        {"quantity": "bj_orthogonal", "value": cert.bj.orthogonal},
        {"quantity": "complement_norm", "value": cert.complement_norm},
        {"quantity": "complement_norm_power", "value": cert.complement_norm_power},
        {"quantity": "passed", "value": cert.passed},
    ]
    return rows, (cert.failures[0] if cert.failures else None)


def complement_block(n: int, p: Exponent) -> OperatorMatrix:
    return OperatorMatrix(np.eye(n) - mean_operator(n), p)


def cmd_stack(ns: Sequence[int], p: Exponent, seed: int = 0) -> list[dict]:
    if not ns:
        raise CliError("ns", "no block sizes given")
    if any(n < 1 for n in ns):
        raise CliError("ns", "block sizes must be >= 1")
    blocks = [complement_block(n, p) for n in ns]
    ests = block_estimates(blocks, p, seed)
    total = block_psum_norm(blocks, p, seed)
    k = int(np.argmax([e.lower for e in ests]))
    rows = [{
        "scope": "block", "n": n, "p": p, "norm_complement": e.lower,
        "analytic_inf_value": 2.0 - 2.0 / n if p.is_inf else None,
        "method": e.method.value, "converged": e.converged,
    } for n, e in zip(ns, ests)]
    rows.append({
        "scope": "stack", "n": ns[k], "p": p, "norm_complement": total.lower,
        "analytic_inf_value": 2.0 - 2.0 / max(ns) if p.is_inf else None,
        "method": total.method.value, "converged": total.converged,
    })
    return rows


def cmd_opnorm(A: np.ndarray, ps: Sequence[Exponent], method: str, seed: int) -> list[dict]:
    rows = []
    for p in ps:
        op = OperatorMatrix(A, p)
        if method == "exact" and not (p.is_one or p.is_two or p.is_inf):
            raise CliError("method", f"exact needs p in {{1, 2, inf}}, got p={format_p(p)}")
        if method == "power" and not p.is_interior:
            raise CliError("method", f"power needs 1 < p < inf, got p={format_p(p)}")
        if method == "brute" and op.n > BRUTE_MAX_DIM:
            raise CliError("method", f"brute needs n <= {BRUTE_MAX_DIM}")
        e = estimate(op, method, seed)
        rows.append({
            "n": op.n, "p": p, "norm": e.lower, "method": e.method.value,
            "iterations": e.iterations, "converged": e.converged,
            "witness": " ".join(repr(float(x)) for x in e.witness.entries),
        })
    return rows


def cmd_opial(v: dict, u: dict, y: dict, p: Exponent) -> list[dict]:
    if p.is_inf:
        raise CliError("p", "opial needs a finite exponent")
    if not any(u.values()):
        raise CliError("u", "u must be nonzero")
    sv, su, sy = (SparseSeq.from_dict(d, p) for d in (v, u, y))
    r = opial_gap(sv, su, sy)
    return [
        {"quantity": "lim_to_weak_limit", "value": r.lim_to_weak_limit},
        {"quantity": "lim_to_y", "value": r.lim_to_y},
        {"quantity": "closed_form_to_y", "value": r.closed_form_to_y},
        {"quantity": "gap", "value": r.gap},
        {"quantity": "threshold", "value": r.threshold},
        {"quantity": "strict", "value": r.gap > 0},
    ]


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"banachlab: error: field=args: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="banachlab", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--format", default="csv", help="csv or json")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for random restarts and instances")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", parents=[common], help="norms of P and I-P for regular reps of Z_n")
    s.add_argument("--ns", default="3..10", help='group orders, e.g. "3,5" or "3..10"')
    s.add_argument("--ps", default="inf", help='exponents, e.g. "2,4,inf"')
    s.add_argument("--method", default="auto", help="auto, exact, power or brute")
    s.add_argument("--group-file", default=None, help="Cayley table file; overrides --ns")
    s.add_argument("--jobs", type=int, default=1, help="worker threads; output order is fixed")

    b = sub.add_parser("bj", parents=[common], help="Birkhoff-James orthogonality of v to w")
    b.add_argument("v", help="comma-separated reals (use -- before a leading minus)")
    b.add_argument("w", help="comma-separated reals, same length as v")
    b.add_argument("p", help="exponent, 1 < p < inf")
    b.add_argument("--tol", type=float, default=1e-8, help="relative tolerance of both verdicts")

    t = sub.add_parser("theorem1", parents=[common], help="orthogonality certificate on the shift model")
    t.add_argument("--p", default="3", help="exponent, 1 < p < inf")
    t.add_argument("--trivial-dim", type=int, default=1, help="dimension k of the trivial factor R^k")
    t.add_argument("--g-max", type=int, default=10, help="check c_n for g = 1..G and -1..-G")

    k = sub.add_parser("stack", parents=[common], help="norm of I-M on a p-sum of l_p(Z_n) blocks")
    k.add_argument("--ns", default="3..50", help="block orders")
    k.add_argument("--ps", default="inf", help="a single exponent")

    o = sub.add_parser("opnorm", parents=[common], help="operator p-norm of a matrix or of I-P")
    o.add_argument("--matrix", default=None, help='rows separated by ";", e.g. "1,2;3,4"')
    o.add_argument("--group-file", default=None, help="use I-P of the regular rep of this group")
    o.add_argument("--n", type=int, default=None, help="use I-M on l_p(Z_n)")
    o.add_argument("--ps", default="2", help="exponents")
    o.add_argument("--method", default="auto", help="auto, exact, power or brute")

    q = sub.add_parser("opial", parents=[common], help="Opial limits for x_n = v + shift(u, n)")
    q.add_argument("--v", default="", help='weak limit, sparse "i:x,j:y"')
    q.add_argument("--u", default="0:1", help="translated bump, nonzero")
    q.add_argument("--y", default="", help="comparison point")
    q.add_argument("--p", default="2", help="finite exponent")
    return ap


def _load_group(path: str) -> FiniteGroup:
    try:
        return read_cayley_file(path)
    except OSError as exc:
        raise CliError("group-file", f"cannot read {path!r}: {exc.strerror}") from None
    except GroupTableError as exc:
        raise CliError("group-file", str(exc)) from None


def run(args: argparse.Namespace) -> tuple[str, list[dict], str | None]:
    if args.format not in ("csv", "json"):
        raise CliError("format", f"unknown format {args.format!r}")
    cmd = args.command
    failure = None
    if cmd == "sweep":
        group = _load_group(args.group_file) if args.group_file else None
        ns = (group.order,) if group else tuple(parse_int_list(args.ns, "ns"))
        cfg = SweepConfig(ns, tuple(parse_exponents(args.ps, "ps")), args.method.lower(),
                          args.seed, args.format, group)
        if args.jobs < 1:
            raise CliError("jobs", "jobs must be >= 1")
        rows = cmd_projection_sweep(cfg, args.jobs)
    elif cmd == "bj":
        rows = cmd_bj(parse_vector(args.v, "v"), parse_vector(args.w, "w"),
                      parse_exponent(args.p, "p"), args.tol)
    elif cmd == "theorem1":
        rows, failure = cmd_theorem1(parse_exponent(args.p, "p"), args.trivial_dim, args.seed, args.g_max)
    elif cmd == "stack":
        ps = parse_exponents(args.ps, "ps")
        if len(ps) != 1:
            raise CliError("ps", "stack takes exactly one exponent")
        rows = cmd_stack(parse_int_list(args.ns, "ns"), ps[0], args.seed)
    elif cmd == "opnorm":
        method = args.method.lower()
        if method not in METHODS:
            raise CliError("method", f"unknown method {args.method!r}")
        sources = [x is not None for x in (args.matrix, args.group_file, args.n)]
        if sum(sources) != 1:
            raise CliError("matrix", "give exactly one of --matrix, --group-file, --n")
        if args.matrix is not None:
            A = parse_matrix(args.matrix, "matrix")
            if A.shape[0] != A.shape[1]:
                raise CliError("matrix", f"matrix must be square, got {A.shape[0]}x{A.shape[1]}")
        elif args.group_file is not None:
            A = invariant_projection(regular_representation(_load_group(args.group_file))).complement
        else:
            if args.n < 1:
                raise CliError("n", "n must be >= 1")
            A = complement_block(args.n, Exponent(2.0)).entries
        rows = cmd_opnorm(A, parse_exponents(args.ps, "ps"), method, args.seed)
    elif cmd == "opial":
        rows = cmd_opial(parse_sparse(args.v, "v"), parse_sparse(args.u, "u"),
                         parse_sparse(args.y, "y"), parse_exponent(args.p, "p"))
    else:  # pragma: no cover - argparse restricts choices
        raise CliError("command", f"unknown command {cmd!r}")
    return cmd, rows, failure


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cmd, rows, failure = run(args)
    except CliError as exc:
        print(f"banachlab: error: field={exc.field}: {exc.message}", file=stderr)
        return exc.code
    text = render(cmd, rows, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if failure is not None:
        print(f"banachlab: error: field=certificate: {failure}", file=stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
