"""Command-line front end.

Every command writes a table (CSV) or a report (JSON) that starts with a
provenance header recording the full parameter set, so re-running the same
command reproduces the same file byte for byte.

Exit status: 0 on success, 2 on invalid parameters, 1 on runtime failure.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import scipy.fft as sfft

from . import __version__
from . import configs, models, reconstruct, spectral, stats
from .numtheory import segmented_sieve


class ValidationError(ValueError):
    """Raised for parameters that violate a command's preconditions."""


def build_id() -> str:
    """Package version plus the git commit of the source tree, when available."""
    try:
        rev = subprocess.run(["git", "rev-parse", "--short", "HEAD"], capture_output=True,
                             text=True, cwd=Path(__file__).parent, timeout=5)
        if rev.returncode == 0 and rev.stdout.strip():
            return f"{__version__}+g{rev.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def parse_grid(text: str, integer: bool = False) -> np.ndarray:
    """Grid from "a,b,c", "a..b" (integer steps), or "start:stop:num[:log]"."""
    text = text.strip()
    try:
        if ".." in text:
            lo, _, rest = text.partition("..")
            hi, _, step = rest.partition(":")
            out = np.arange(int(lo), int(hi) + 1, int(step) if step else 1)
        elif ":" in text:
            parts = text.split(":")
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            log = len(parts) > 3 and parts[3] == "log"
            out = np.geomspace(a, b, n) if log else np.linspace(a, b, n)
        else:
            out = np.array([float(x) for x in text.split(",") if x])
    except ValueError as exc:
        raise ValidationError(f"cannot parse grid {text!r}: {exc}") from None
    if out.size == 0:
        raise ValidationError(f"grid {text!r} is empty")
    if integer:
        out = np.unique(np.rint(out).astype(np.int64))
    return out


def _num(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


class Output:
    """Collects header and rows, then writes them in one go."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.buf = io.StringIO()
        params = {k: v for k, v in sorted(vars(args).items())
                  if k not in ("func", "out") and v is not None}
        self.header = [f"primeorder {args.command}", f"build={build_id()}",
                       "params=" + json.dumps(params, sort_keys=True, default=str)]

    def note(self, line: str) -> None:
        self.header.append(line)

    def table(self, columns, rows) -> None:
        self.buf.write(",".join(columns) + "\n")
        for row in zip(*rows):
            self.buf.write(",".join(_num(v) for v in row) + "\n")

    def text(self) -> str:
        if self.args.format == "json":
            return self.buf.getvalue()
        return "".join(f"# {h}\n" for h in self.header) + self.buf.getvalue()

    def write(self, path: str | None = None) -> None:
        path = self.args.out if path is None else path
        if path in (None, "-"):
            sys.stdout.write(self.text())
        else:
            Path(path).write_text(self.text())


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


def _config_from_args(args) -> configs.PointConfiguration:
    kind = args.kind
    if kind == "primes":
        _require(args.M >= 2 and args.L >= 1, "primes need M >= 2 and L >= 1")
        return configs.primes_config(args.M, args.L)
    if kind == "lattice":
        _require(args.f is not None and 0 < args.f <= 1, "lattice needs 0 < f <= 1")
        try:
            return configs.integer_lattice_config(args.L, args.f)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
    if kind == "gas":
        _require(args.f is not None and 0 <= args.f <= 1, "gas needs 0 <= f <= 1")
        return configs.lattice_gas_config(args.L, args.f, args.seed)
    if kind == "pdchain":
        _require(1 <= args.iters <= configs.MAX_PD_ITERATIONS, "iters out of range")
        return configs.period_doubling_config(args.iters, args.letter)
    raise ValidationError(f"unknown kind {kind}")


# ------------------------------------------------------------------ commands

def cmd_sieve(args) -> Output:
    _require(args.M >= 0 and args.L >= 1, "sieve needs M >= 0 and L >= 1")
    iv = segmented_sieve(args.M, args.L)
    out = Output(args)
    out.note(f"N={iv.N}")
    if args.format == "json":
        out.buf.write(json.dumps({"M": args.M, "L": args.L, "N": iv.N,
                                  "primes": iv.primes.tolist()}) + "\n")
    else:
        out.table(["p"], [iv.primes.astype(np.int64)])
    return out


def cmd_spectrum(args) -> Output:
    cfg = _config_from_args(args)
    _require(cfg.N > 0, "configuration is empty")
    spec = spectral.structure_factor(cfg)
    out = Output(args)
    out.note(f"N={cfg.N} length={cfg.length} f={_num(cfg.f)}")
    out.note(f"parseval_ratio={_num(spectral.parseval_ratio(spec))}")
    k, S = spec.half()
    m = k.size
    out.table(["k", "re_eta", "im_eta", "S"], [k, spec.eta.real[:m], spec.eta.imag[:m], S])
    if args.out not in (None, "-"):
        side = Output(args)
        if args.kind == "pdchain":
            pk, pw = models.pd_structure_factor(args.nmax or 20, np.pi)
            side.table(["k", "weight"], [pk, pw])
        else:
            tab = models.prime_peak_table(args.nmax or max(1, int(100 * math.log(max(args.M, 3)))))
            side.note("predicted height S = N * weight")
            side.table(["n", "m", "k", "weight"], [tab.n, tab.m, tab.k, tab.weight])
        p = Path(args.out)
        side.write(str(p.with_name(p.stem + "_peaks" + p.suffix)))
    return out


def cmd_zk(args) -> Output:
    K = parse_grid(args.K)
    _require(bool(np.all((K > 0) & (K <= np.pi))), "K must lie in (0, pi]")
    cfg = _config_from_args(args)
    spec = spectral.structure_factor(cfg)
    Z = spectral.cumulative_intensity(spec, K)
    out = Output(args)
    if args.kind == "pdchain":
        out.table(["K", "Z_empirical", "Z_model"], [K, Z, models.pd_cumulative_intensity(K)])
    elif args.kind == "primes":
        nmax = args.nmax or max(1, int(10 * math.log(args.M)))
        mod = models.prime_cumulative_model(K, args.M, nmax)
        out.table(["K", "Z_empirical", "Z_peak_sum", "Z_smooth"], [K, Z, mod.peak_sum, mod.smooth])
    else:
        out.table(["K", "Z_empirical"], [K, Z])
    return out


def cmd_variance(args) -> Output:
    R = parse_grid(args.R)
    cfg = _config_from_args(args)
    _require(bool(np.all(R > 0)) and 2 * R.max() < cfg.length, "need 0 < 2R < length")
    d = stats.number_variance_direct(cfg, R).sigma2
    fo = stats.number_variance_fourier(spectral.structure_factor(cfg), R).sigma2
    out = Output(args)
    if args.kind == "pdchain" and args.letter == "a":
        out.table(["R", "sigma2_direct", "sigma2_fourier", "sigma2_model"],
                  [R, d, fo, models.pd_number_variance_closed(R)])
    else:
        out.table(["R", "sigma2_direct", "sigma2_fourier"], [R, d, fo])
    return out


def cmd_tau(args) -> Output:
    out = Output(args)
    if args.sweep:
        Ms = parse_grid(args.Mgrid, integer=True)
        Ls = parse_grid(args.Lgrid, integer=True)
        _require(bool(Ms.min() >= 2 and Ls.min() >= 2), "sweep needs M >= 2 and L >= 2")
        tm = stats.tau_phase_map(Ms, Ls)
        MM, LL = np.meshgrid(tm.M, tm.L, indexing="ij")
        out.table(["M", "L", "ln_tau"], [MM.ravel(), LL.ravel(), tm.ln_tau.ravel()])
        return out
    cfg = _config_from_args(args)
    r = stats.tau_discrete(cfg)
    out.table(["tau", "f", "N_s", "tau_over_rho2_L"],
              [[r.tau], [r.f], [r.N_s], [r.tau / r.rho**2 / r.L]])
    return out


def cmd_cdf(args) -> Output:
    t = parse_grid(args.t)
    cfg = _config_from_args(args)
    cv = stats.sk_cdf(spectral.structure_factor(cfg), t)
    out = Output(args)
    out.note(f"max_t_lambda={_num(np.max(cv.t * cv.lam))}")
    out.table(["t", "lambda", "lambda_minus"], [cv.t, cv.lam, cv.lam_minus])
    return out


def cmd_gallagher(args) -> Output:
    _require(args.X >= 3 and args.lam > 0 and args.samples >= 1, "need X >= 3, lam > 0, samples >= 1")
    _require(args.lam * math.log(args.X) >= 1, "lam * ln X must be >= 1")
    h = stats.gallagher_histogram(args.X, args.lam, args.samples, args.seed)
    out = Output(args)
    out.note(f"L={h.L} tv={_num(h.tv)} mean={_num(h.mean)} var={_num(h.var)}")
    out.table(["N", "freq", "poisson_pmf"], [h.N, h.freq, h.poisson])
    return out


def cmd_peaks(args) -> Output:
    _require(args.nmax >= 1, "nmax must be >= 1")
    tab = models.prime_peak_table(args.nmax)
    out = Output(args)
    out.table(["n", "m", "k", "weight"], [tab.n, tab.m, tab.k, tab.weight])
    return out


def cmd_hl(args) -> Output:
    r = parse_grid(args.r, integer=True)
    _require(bool(np.all(r != 0)), "r must be nonzero")
    out = Output(args)
    eu = [models.singular_series_pair(int(x), args.pmax).value for x in r]
    ra = [models.singular_series_ramanujan(int(x), args.qmax).value for x in r]
    with __import__("warnings").catch_warnings():
        __import__("warnings").simplefilter("ignore")
        hg = [models.hl_g2(int(x), args.nmax or 10_000) for x in r]
    out.table(["r", "euler_product", "ramanujan_series", "hl_g2"], [r, eu, ra, hg])
    return out


def cmd_reconstruct(args) -> Output:
    _require(args.M >= 3 and args.L >= 2, "need M >= 3 and L >= 2")
    _require(1 <= args.nmax < args.L / 2, "need 1 <= nmax < L/2")
    thr = args.threshold if args.threshold == "sqrtN" else float(args.threshold)
    rep = reconstruct.reconstruct_primes(args.M, args.L, args.nmax, thr)
    out = Output(args)
    if args.format == "json":
        d = json.loads(rep.to_json())
        d["provenance"] = out.header
        out.buf.write(json.dumps(d, indent=2) + "\n")
    else:
        out.table(["M", "L", "n_max", "N_predicted", "N_c", "N_i", "N_u", "t1", "t2"],
                  [[rep.M], [rep.L], [rep.n_max], [rep.N_predicted], [rep.N_c], [rep.N_i],
                   [rep.N_u], [rep.t1], [rep.t2]])
    if args.field_csv:
        fld = reconstruct.synthesize_field(args.M, args.L, args.nmax, thr).real_field()
        side = Output(args)
        side.table(["n", "eta"], [np.arange(args.M + 1, args.M + args.L + 1), fld])
        side.write(args.field_csv)
    return out


def cmd_pdchain(args) -> Output:
    _require(1 <= args.iters <= configs.MAX_PD_ITERATIONS, "iters out of range")
    cfg = configs.period_doubling_config(args.iters, args.letter)
    out = Output(args)
    out.note(f"N={cfg.N} length={cfg.length} f={_num(cfg.f)} indexing=0-based")
    out.table(["position"], [cfg.occupied])
    return out


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="primeorder", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, kinds=False):
        sp.add_argument("--out", default="-", help="output path, '-' for stdout")
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--threads", type=int, default=1, help="FFT worker threads")
        sp.add_argument("--M", type=int, default=10**6)
        sp.add_argument("--L", type=int, default=10**5)
        sp.add_argument("--nmax", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        if kinds:
            sp.add_argument("--kind", choices=["primes", "lattice", "gas", "pdchain"], default="primes")
            sp.add_argument("--f", type=float, default=None, help="occupation fraction")
            sp.add_argument("--iters", type=int, default=20, help="period-doubling iterations")
            sp.add_argument("--letter", choices=["a", "b"], default="a")

    sp = sub.add_parser("sieve", help="primes in (M, M+L]")
    common(sp)
    sp.set_defaults(func=cmd_sieve)

    sp = sub.add_parser("spectrum", help="S(k) on the uniform grid plus model peaks")
    common(sp, kinds=True)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("zk", help="cumulative intensity Z(K)")
    common(sp, kinds=True)
    sp.add_argument("--K", default="0.01:3.14159:50:log")
    sp.set_defaults(func=cmd_zk)

    sp = sub.add_parser("variance", help="number variance sigma^2(R)")
    common(sp, kinds=True)
    sp.add_argument("--R", default="1:1000:30:log")
    sp.set_defaults(func=cmd_variance)

    sp = sub.add_parser("tau", help="tau order metric, or the (M, L) map with --sweep")
    common(sp, kinds=True)
    sp.add_argument("--sweep", action="store_true")
    sp.add_argument("--Mgrid", default="100:1e8:25:log")
    sp.add_argument("--Lgrid", default="8:1e4:40:log")
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("cdf", help="lambda(t), measure where S(k) > t")
    common(sp, kinds=True)
    sp.add_argument("--t", default="0.05:100:60:log")
    sp.set_defaults(func=cmd_cdf)

    sp = sub.add_parser("gallagher", help="prime counts in short random intervals")
    common(sp)
    sp.add_argument("--X", type=int, default=10**8)
    sp.add_argument("--lam", type=float, default=2.0)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.set_defaults(func=cmd_gallagher)

    sp = sub.add_parser("peaks", help="predicted Bragg peaks of the primes")
    common(sp)
    sp.set_defaults(func=cmd_peaks, nmax=None)
    sp.set_defaults(nmax=100)

    sp = sub.add_parser("hl", help="pair singular series in three forms")
    common(sp)
    sp.add_argument("--r", default="2..100:2")
    sp.add_argument("--pmax", type=int, default=10**7)
    sp.add_argument("--qmax", type=int, default=10_000)
    sp.set_defaults(func=cmd_hl)

    sp = sub.add_parser("reconstruct", help="predict primes from the peak model")
    common(sp)
    sp.add_argument("--threshold", default="1", help="off-grid keep threshold, number or 'sqrtN'")
    sp.add_argument("--field-csv", default=None, help="also write the real field to this CSV")
    sp.set_defaults(func=cmd_reconstruct, nmax=2000, L=510510, format="json")

    sp = sub.add_parser("pdchain", help="period-doubling site positions")
    common(sp)
    sp.add_argument("--iters", type=int, default=10)
    sp.add_argument("--letter", choices=["a", "b"], default="a")
    sp.set_defaults(func=cmd_pdchain)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse itself exits with status 2
    try:
        if args.threads < 1:
            raise ValidationError("threads must be >= 1")
        with sfft.set_workers(args.threads):
            out = args.func(args)
        out.write()
    except ValidationError as exc:
        print(f"primeorder {args.command}: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and signal runtime failure
        print(f"primeorder {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
