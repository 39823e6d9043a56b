"""Command-line front end.

Configuration is plain text, one ``key=value`` pair per line, ``#`` starts
a comment.  Recognised keys:

    model            weak (default) | strong
    generator        catalog name; parameters as generator.<name>=value
                     or bare (theta=0.5)
    marginal         base marginal for both coordinates, params marginal.<p>
    marginal1/2      per-coordinate marginal, params marginal1.<p> / marginal2.<p>
    marginals_are    base (default) | distorted; distorted means the given
                     marginals are F_i and the base is G_i = h^{-1} o F_i
    lambda           weak-model rate; lambda1, lambda2 for the strong model
    n, seed, grid, method, t, out, workers, empirical
                     command options, overridden by flags

Exit codes: 0 ok, 1 usage, 2 invalid distribution, 3 numeric instability.
"""
from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .core import PseudoStrongDistribution, PseudoWeakDistribution, validate
from .dependence import (
    kendall_analytic,
    kendall_empirical,
    kendall_tau,
    kendall_tau_empirical,
    taildep_base,
    taildep_distorted,
    taildep_model_numeric,
)
from .errors import (
    BadBracketError,
    DiagonalStencilError,
    DomainError,
    InvalidGeneratorError,
    InversionFailure,
    NegativeConditionalError,
    NonConvergenceError,
    NoRegularVariationError,
    PseudoLomError,
    RateDomainError,
    UnstableLimitError,
)
from .generators import Identity, make_generator
from .marginals import make_marginal, undistort
from .sampling import RngState, Tag, sample

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_UNSTABLE = 0, 1, 2, 3

_OPTION_KEYS = {"n", "seed", "grid", "method", "t", "out", "workers", "empirical"}
_MODEL_KEYS = {"model", "generator", "marginal", "marginal1", "marginal2", "marginals_are",
               "lambda", "lambda1", "lambda2"}
_PREFIXES = ("generator.", "marginal.", "marginal1.", "marginal2.")
# bare parameter names are read as generator parameters
_BARE_PARAMS = {"a", "theta", "beta", "gamma"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        cfg = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (p.strip() for p in line.split("=", 1))
            cfg.set(key, value)
        return cfg

    def set(self, key: str, value: str):
        if key in _BARE_PARAMS:
            key = f"generator.{key}"
        if not (key in _OPTION_KEYS or key in _MODEL_KEYS or key.startswith(_PREFIXES)):
            raise UsageError(f"unknown config key {key!r}")
        self.values[key] = value

    def get(self, key, default=None):
        return self.values.get(key, default)

    def number(self, key, kind=float, default=None):
        v = self.values.get(key)
        if v is None:
            if default is None:
                raise UsageError(f"missing required key {key!r}")
            return default
        try:
            return kind(v)
        except ValueError:
            raise UsageError(f"{key}={v!r} is not a valid {kind.__name__}") from None

    def params(self, prefix: str) -> dict:
        p = prefix + "."
        out = {}
        for k, v in self.values.items():
            if k.startswith(p):
                try:
                    out[k[len(p):]] = float(v)
                except ValueError:
                    raise UsageError(f"{k}={v!r} is not a number") from None
        return out

    # -- model construction -------------------------------------------
    def generator(self):
        name = self.get("generator", "identity")
        return make_generator(name, **self.params("generator"))

    def _marginal(self, i: int):
        key = f"marginal{i}"
        if key in self.values:
            return make_marginal(self.values[key], **self.params(key))
        if "marginal" in self.values:
            return make_marginal(self.values["marginal"], **self.params("marginal"))
        raise UsageError(f"missing {key} (or marginal)")

    def build(self, undistorted: bool = False, check: bool = True):
        g = self.generator()
        if self.get("model", "weak") == "strong":
            return PseudoStrongDistribution(g, self.number("lambda1"), self.number("lambda2"))
        if self.get("model", "weak") != "weak":
            raise UsageError("model must be weak or strong")
        G1, G2 = self._marginal(1), self._marginal(2)
        mode = self.get("marginals_are", "base")
        if mode == "distorted":
            G1, G2 = undistort(g, G1), undistort(g, G2)
        elif mode != "base":
            raise UsageError("marginals_are must be base or distorted")
        if undistorted:
            g = Identity()
        return PseudoWeakDistribution(g, G1, G2, self.number("lambda"), check=check)


# ---------------------------------------------------------------------------
# Output


def _emit(text: str, out: str | None):
    """Write once; files are replaced atomically."""
    if not out or out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pseudolom-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _kv(lines) -> str:
    return "".join(line + "\n" for line in lines)


def _t_grid(cfg: RunConfig) -> np.ndarray:
    if cfg.get("t"):
        try:
            t = np.array([float(s) for s in cfg.get("t").split(",") if s.strip()])
        except ValueError:
            raise UsageError("t must be a comma-separated list of numbers") from None
        return t
    n = cfg.number("grid", int, 100)
    if n < 1:
        raise UsageError("grid must be at least 1")
    return np.arange(1, n + 1) / n


def _fmt(v) -> str:
    return repr(float(v))


def _weak_only(d):
    if not isinstance(d, PseudoWeakDistribution):
        raise UsageError("this command needs model=weak")
    return d


# ---------------------------------------------------------------------------
# Commands


def cmd_validate(cfg: RunConfig, args) -> int:
    d = _weak_only(cfg.build(undistorted=args.undistorted, check=False))
    rep = validate(d, grid_n=cfg.number("grid", int, 64))
    _emit(_kv(rep.to_lines()), cfg.get("out"))
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_sample(cfg: RunConfig, args) -> int:
    n = cfg.number("n", int, 1000)
    if n < 1:
        raise UsageError("n must be at least 1")
    seed = cfg.number("seed", int, 0)
    method = cfg.get("method", "structural")
    d = cfg.build(undistorted=args.undistorted)
    batch = sample(d, n, RngState(seed), method, workers=cfg.number("workers", int, 0))
    buf = io.StringIO()
    buf.write(f"# seed={seed} method={batch.method} n={n}\n")
    buf.write("x,y,tag\n")
    names = {int(t): t.name for t in Tag}
    for x, y, t in zip(batch.x.tolist(), batch.y.tolist(), batch.tag.tolist()):
        buf.write(f"{x!r},{y!r},{names[t]}\n")
    _emit(buf.getvalue(), cfg.get("out"))
    return EXIT_OK


def cmd_kendall(cfg: RunConfig, args) -> int:
    d = _weak_only(cfg.build(undistorted=args.undistorted))
    t = _t_grid(cfg)
    status = EXIT_OK
    curve = kendall_analytic(d, [])
    K = np.full(t.size, np.nan)
    for i, ti in enumerate(t):
        try:
            K[i] = curve.func(ti)
        except (NonConvergenceError, BadBracketError) as exc:
            print(f"t={ti!r}: {exc}", file=sys.stderr)
            status = EXIT_UNSTABLE
    n_emp = cfg.number("empirical", int, 0)
    emp = None
    if n_emp:
        emp = kendall_empirical(
            d, n_emp, t, seed=cfg.number("seed", int, 0), method=cfg.get("method", "structural")
        ).K
    buf = io.StringIO()
    buf.write("t,K_analytic" + (",K_empirical" if emp is not None else "") + "\n")
    for i, ti in enumerate(t):
        row = [_fmt(ti), "" if np.isnan(K[i]) else _fmt(K[i])]
        if emp is not None:
            row.append(_fmt(emp[i]))
        buf.write(",".join(row) + "\n")
    _emit(buf.getvalue(), cfg.get("out"))
    return status


def cmd_tau(cfg: RunConfig, args) -> int:
    d = _weak_only(cfg.build(undistorted=args.undistorted))
    lines = [f"tau_analytic={_fmt(kendall_tau(kendall_analytic(d, [1.0])))}"]
    n = cfg.number("n", int, 100000)
    if n > 0:
        seed = cfg.number("seed", int, 0)
        batch = sample(d, n, RngState(seed), cfg.get("method", "structural"),
                       workers=cfg.number("workers", int, 0))
        lines += [f"tau_empirical={_fmt(kendall_tau_empirical(batch))}", f"n={n}", f"seed={seed}"]
    _emit(_kv(lines), cfg.get("out"))
    return EXIT_OK


def cmd_taildep(cfg: RunConfig, args) -> int:
    d = _weak_only(cfg.build(undistorted=args.undistorted))
    lines = []
    status = EXIT_OK
    if d.G1 == d.G2:
        try:
            td = taildep_distorted(taildep_base(d), d.generator)
            lines += td.to_lines()
        except NoRegularVariationError as exc:
            lines.append("method=unavailable")
            print(str(exc), file=sys.stderr)
    for side in ("upper", "lower"):
        try:
            rep = taildep_model_numeric(d, side)
            lines += [f"{side}_numeric={_fmt(rep.estimate)}", f"{side}_numeric_delta={_fmt(rep.delta)}"]
        except UnstableLimitError as exc:
            lines += [f"{side}_numeric={_fmt(exc.estimate)}", f"{side}_numeric_status=unstable"]
            print(str(exc), file=sys.stderr)
            status = EXIT_UNSTABLE
    _emit(_kv(lines), cfg.get("out"))
    return status


def cmd_atom(cfg: RunConfig, args) -> int:
    d = _weak_only(cfg.build(undistorted=args.undistorted))
    lines = [f"atom={_fmt(d.atom_mass())}"]
    t = np.array([float(s) for s in cfg.get("t", "0").split(",") if s.strip()])
    lines += [f"atom_tail_{float(ti)!r}={_fmt(d.atom_tail(ti))}" for ti in t]
    n = cfg.number("n", int, 0)
    if n > 0:
        seed = cfg.number("seed", int, 0)
        batch = sample(d, n, RngState(seed), cfg.get("method", "structural"))
        lines += [f"atom_empirical={_fmt(batch.diagonal_fraction())}", f"n={n}", f"seed={seed}"]
    _emit(_kv(lines), cfg.get("out"))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "sample": cmd_sample,
    "kendall": cmd_kendall,
    "tau": cmd_tau,
    "taildep": cmd_taildep,
    "atom": cmd_atom,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudolom", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="key=value configuration file")
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")
        s.add_argument("--seed", type=int)
        s.add_argument("--out", help="output path (default stdout)")
        s.add_argument("--n", type=int)
        s.add_argument("--grid", type=int)
        s.add_argument("--method", choices=("structural", "conditional"))
        s.add_argument("--t", help="comma-separated t values")
        s.add_argument("--workers", type=int)
        s.add_argument("--empirical", type=int, metavar="N",
                       help="kendall: append an empirical curve from N draws")
        s.add_argument("--undistorted", action="store_true",
                       help="drop the generator and use the base survival function")
    return p


def _load(args) -> RunConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = RunConfig.parse(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    else:
        cfg = RunConfig()
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        cfg.set(k.strip(), v.strip())
    for key in _OPTION_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            cfg.values[key] = str(v)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _load(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RateDomainError, InvalidGeneratorError, NegativeConditionalError) as exc:
        print(f"invalid distribution: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnstableLimitError, NonConvergenceError, InversionFailure, BadBracketError,
            DiagonalStencilError) as exc:
        print(f"numeric instability: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except PseudoLomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE


if __name__ == "__main__":
    raise SystemExit(main())
