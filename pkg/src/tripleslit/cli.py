"""Command-line front end: ``tripleslit {intensity,kappa,surface,gouy,verify}``.

Every command writes a CSV whose leading ``#`` lines hold the run manifest,
plus a gnuplot script next to it. Exit codes: 0 ok, 2 bad config,
3 numerical failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, gchain
from .classical import classical_chain
from .nonclassical import HOP_NOTES, build_zchain, gouy_nc
from .oracle import (ConvergenceError, QuadratureSpec, closed_form_classical,
                     closed_form_nonclassical, quad_classical, quad_nonclassical)
from .params import (ConfigError, ExperimentConfig, config_as_text, config_from_mapping,
                     derived_scales, estimate_epsilon, load_config, parse_quantity)
from .sorkin import (build_paths, direct_kappa, gouy_scan, intensity, kappa_from_paths,
                     kappa_scan, kappa_surface)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

CONFIG_KEYS = ("m", "hbar", "sigma0", "beta", "d", "t", "tau", "epsilon", "hop_prefactor")


def fmt(value: float) -> str:
    """Fixed 12-significant-digit scientific notation."""
    return f"{value:.11e}"


@dataclass
class RunManifest:
    command: str
    config: ExperimentConfig
    outputs: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        scales = derived_scales(self.config)
        out = [f"command={self.command}", f"code=tripleslit {__version__}"]
        out += [f"config.{line}" for line in config_as_text(self.config)]
        out += [f"derived.epsilon={fmt(estimate_epsilon(self.config))}",
                f"derived.tau0={fmt(scales.tau0)}"]
        out += [f"note={n}" for n in HOP_NOTES]
        out.append(f"note=hop prefactor convention {self.config.hop_prefactor}")
        out += [f"{k}={v}" for k, v in self.extra.items()]
        out += [f"output={p}" for p in self.outputs]
        return out


def write_csv(path: Path, manifest: RunManifest, header, rows) -> None:
    buf = io.StringIO()
    for line in manifest.lines():
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue())


def write_plot(csv_path: Path, body: str) -> Path:
    script = csv_path.with_suffix(".gp")
    script.write_text(
        "set datafile separator ','\n"
        "set datafile commentschars '#'\n"
        "set key autotitle columnhead\n"
        f"data = '{csv_path.name}'\n" + body)
    return script


# --- argument handling ------------------------------------------------------

def _grid(lo, hi, n, kind):
    lo, hi = parse_quantity(lo, kind), parse_quantity(hi, kind)
    n = int(n)
    if n < 1:
        raise ConfigError("grid must have at least one point")
    if n == 1 or lo == hi:
        return np.array([lo])
    return np.linspace(lo, hi, n)


def resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {k: getattr(args, k) for k in CONFIG_KEYS if getattr(args, k) is not None}
    if args.mirror_loop is not None:
        overrides["mirror_loop"] = args.mirror_loop
    return config_from_mapping(overrides, cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="key=value parameter file")
    common.add_argument("--out", help="output CSV path")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--gouy", choices=("on", "off", "both"), default="both")
    common.add_argument("--mirror-loop", choices=("on", "off"), default=None)
    common.add_argument("--ablation", choices=("gouy-only", "all-constant-phases"),
                        default="gouy-only")
    for key in CONFIG_KEYS:
        common.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)
    common.add_argument("--x-min", default="-1mm")
    common.add_argument("--x-max", default="1mm")
    common.add_argument("--x-points", type=int, default=2001)
    common.add_argument("--tau-min", default="0.5ns")
    common.add_argument("--tau-max", default="20ns")
    common.add_argument("--tau-points", type=int, default=200)

    parser = argparse.ArgumentParser(prog="tripleslit", allow_abbrev=False,
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("intensity", parents=[common], help="normalised I_c and I_nc along x")
    p.add_argument("--slits", type=int, choices=(1, 3), default=3)
    sub.add_parser("kappa", parents=[common], help="kappa(x) with and/or without Gouy phase")
    sub.add_parser("surface", parents=[common], help="|kappa| over (x, tau)")
    sub.add_parser("gouy", parents=[common], help="Gouy phases and kappa(0) along tau")
    sub.add_parser("verify", parents=[common], help="oracle and invariant self-test")
    return parser


# --- commands ---------------------------------------------------------------

def cmd_intensity(cfg, args, out: Path) -> list[Path]:
    x = _grid(args.x_min, args.x_max, args.x_points, "length")
    paths = build_paths(cfg)
    classical = paths.classical if args.slits == 3 else (paths.psi2,)
    i_c = intensity(classical, x)
    i_nc = intensity(classical + tuple(paths.nc), x) if args.slits == 3 else i_c
    manifest = RunManifest("intensity", cfg, [out.name, out.with_suffix(".gp").name],
                           {"slits": args.slits})
    write_csv(out, manifest, ("x", "I_c_normalized", "I_nc_normalized"),
              zip(x, i_c / i_c.max(), i_nc / i_nc.max()))
    plot = write_plot(out, "set xlabel 'x (m)'\nset ylabel 'normalised intensity'\n"
                           "plot data using 1:2 with lines, '' using 1:3 with lines dt 2\n")
    return [out, plot]


def cmd_kappa(cfg, args, out: Path) -> list[Path]:
    x = _grid(args.x_min, args.x_max, args.x_points, "length")
    modes = {"on": (True,), "off": (False,), "both": (True, False)}[args.gouy]
    cols, names = [x], ["x"]
    for use in modes:
        cols.append(kappa_scan(cfg, x, use_gouy=use, ablation=args.ablation).kappa)
        names.append("kappa_gouy" if use else "kappa_no_gouy")
    manifest = RunManifest("kappa", cfg, [out.name, out.with_suffix(".gp").name],
                           {"gouy": args.gouy, "ablation": args.ablation})
    write_csv(out, manifest, names, zip(*cols))
    series = ", ".join(["data using 1:2 with lines"]
                       + [f"'' using 1:{i + 2} with lines dt 2" for i in range(1, len(modes))])
    plot = write_plot(out, f"set xlabel 'x (m)'\nset ylabel 'kappa'\nplot {series}\n")
    return [out, plot]


def cmd_surface(cfg, args, out: Path) -> list[Path]:
    x = _grid(args.x_min, args.x_max, args.x_points, "length")
    taus = _grid(args.tau_min, args.tau_max, args.tau_points, "time")
    use = args.gouy != "off"
    surf = np.abs(kappa_surface(cfg, x, taus, use_gouy=use, ablation=args.ablation,
                                threads=args.threads))
    it, ix = np.unravel_index(np.argmax(surf), surf.shape)
    manifest = RunManifest("surface", cfg, [out.name, out.with_suffix(".gp").name],
                           {"use_gouy": "on" if use else "off",
                            "argmax_x": fmt(x[ix]), "argmax_tau": fmt(taus[it])})
    rows = ((x[j], taus[i], surf[i, j]) for i in range(len(taus)) for j in range(len(x)))
    write_csv(out, manifest, ("x", "tau", "abs_kappa"), rows)
    plot = write_plot(out, "set xlabel 'x (m)'\nset ylabel 'tau (s)'\nset pm3d map\n"
                           f"set dgrid3d {len(taus)},{len(x)}\n"
                           "splot data using 1:2:3\n")
    return [out, plot]


def cmd_gouy(cfg, args, out: Path) -> list[Path]:
    taus = _grid(args.tau_min, args.tau_max, args.tau_points, "time")
    scan = gouy_scan(cfg, taus, args.ablation, args.threads)
    manifest = RunManifest("gouy", cfg, [out.name, out.with_suffix(".gp").name],
                           {"ablation": args.ablation})
    write_csv(out, manifest, ("tau", "mu_c", "mu_nc", "abs_kappa0", "percent_error"),
              zip(scan.tau, scan.mu_c, scan.mu_nc, np.abs(scan.kappa0), scan.percent_error))
    plot = write_plot(out, "set xlabel 'tau (s)'\nset ylabel 'Gouy phase (rad)'\n"
                           "plot data using 1:2 with lines, '' using 1:3 with lines\n")
    return [out, plot]


def verify_checks(cfg: ExperimentConfig, nodes: int = 257):
    """(name, passed, detail) for the oracle-equivalence and invariant checks."""
    spec = QuadratureSpec(nodes=nodes)
    checks = []
    screen = gchain.packet_width(classical_chain(cfg, 0.0))
    x = np.linspace(-3 * screen, 3 * screen, 11)

    for center in (cfg.d, 0.0, -cfg.d):
        q = quad_classical(cfg, center, x, spec)
        c = closed_form_classical(cfg, center, x)
        err = float(np.max(np.abs(q - c) / np.abs(c)))
        checks.append((f"oracle classical slit {center:+.3e} m", err < 1e-5, f"max rel {err:.2e}"))
    q = quad_nonclassical(cfg, x, spec=spec)
    c = closed_form_nonclassical(cfg, x)
    err = float(np.max(np.abs(q - c) / np.abs(c)))
    checks.append(("oracle looping path", err < 1e-5, f"max rel {err:.2e}"))

    paths = build_paths(cfg)
    parity = float(np.max(np.abs(paths.psi3.evaluate(x) - paths.psi1.evaluate(-x))
                          / np.abs(paths.psi1.evaluate(-x))))
    checks.append(("parity psi3(x) = psi1(-x)", parity < 1e-12, f"max rel {parity:.2e}"))

    n1 = gchain.log_norm(classical_chain(cfg, cfg.d))
    n2 = gchain.log_norm(classical_chain(cfg, cfg.d, tau=3 * cfg.tau))
    checks.append(("norm independent of tau", abs(math.expm1(n2 - n1)) < 1e-10,
                   f"rel {abs(math.expm1(n2 - n1)):.2e}"))

    k = kappa_from_paths(paths, x).kappa
    kd = direct_kappa(paths, x, dps=40)
    ident = float(np.max(np.abs(k - kd) / np.abs(kd)))
    checks.append(("kappa expansion = direct", ident < 1e-10, f"max rel {ident:.2e}"))

    mu_chain = paths.nc[0].mu_tracked
    mu_z = gouy_nc(build_zchain(cfg))
    diff = abs(gchain.principal_gouy(mu_chain - mu_z))
    ok = diff < 1e-8 if cfg.hop_prefactor == "shared" else True
    checks.append(("z-recursion mu_nc = chain mu_nc", ok, f"diff {diff:.2e} rad"))
    return checks


def cmd_verify(cfg, args, out: Path | None) -> int:
    start = time.perf_counter()
    checks = verify_checks(cfg)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, ok, detail in checks]
    lines.append(f"elapsed {time.perf_counter() - start:.1f} s")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if out is not None:
        out.write_text(text)
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_NUMERIC


COMMANDS = {"intensity": cmd_intensity, "kappa": cmd_kappa, "surface": cmd_surface,
            "gouy": cmd_gouy}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "verify":
            return cmd_verify(cfg, args, Path(args.out) if args.out else None)
        out = Path(args.out) if args.out else Path(f"{args.command}.csv")
        written = COMMANDS[args.command](cfg, args, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error on {exc.filename or args.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
