"""barut-kit command line.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import algebra as alg
from . import barut, fgm, majorana, noether, spinors, verification
from .jsonio import csv_text, document

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CONFIG_ENV = "BARUT_KIT_CONFIG"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    alpha_inverse: float = 137.03
    electron_mass_mev: float = 0.511
    tolerance: float = 1e-10
    box_length: float | None = None
    output_format: str = "json"

    def __post_init__(self):
        for name in ("alpha_inverse", "electron_mass_mev", "tolerance", "box_length"):
            v = getattr(self, name)
            if v is None and name == "box_length":
                continue
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v) or v <= 0:
                raise UsageError(f"config {name} must be a positive number")
        if self.tolerance >= 1e-6:
            raise UsageError("config tolerance must be below 1e-6")
        if self.output_format not in ("json", "csv"):
            raise UsageError("config output_format must be json or csv")

    @classmethod
    def load(cls, path: str | None) -> "Config":
        if path is None:
            return cls()
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def resolve_config(args) -> Config:
    path = os.environ.get(CONFIG_ENV) or getattr(args, "config", None)
    cfg = Config.load(path)
    overrides = {}
    if getattr(args, "tolerance", None) is not None:
        overrides["tolerance"] = args.tolerance
    if getattr(args, "output", None) is not None:
        overrides["output_format"] = args.output
    return replace(cfg, **overrides) if overrides else cfg


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _csv_only_for(cfg: Config, command: str) -> None:
    if cfg.output_format == "csv":
        raise UsageError(f"csv output is available for spectrum and spinors only, not {command}")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _resolved(states: list[barut.MassState], tol: float = 1e-6) -> list[tuple[float, int]]:
    """Closed-form masses merged below the root finder's resolution (weighted mean)."""
    out: list[tuple[float, int]] = []
    for s in states:
        if out and abs(s.mass - out[-1][0]) <= tol * max(1.0, s.mass):
            m, k = out[-1]
            out[-1] = ((m * k + s.mass * s.multiplicity) / (k + s.multiplicity), k + s.multiplicity)
        else:
            out.append((s.mass, s.multiplicity))
    return out


def _compare_spectra(closed: list[barut.MassState], numeric: list[barut.MassState]) -> float:
    """Worst relative mass error, or inf if masses or multiplicities do not pair up."""
    ref = _resolved(closed)
    if [k for _, k in ref] != [s.multiplicity for s in numeric]:
        return math.inf
    return max((_rel(n.mass, m) for (m, _), n in zip(ref, numeric)), default=0.0)


# ------------------------------------------------------------ commands

def cmd_spectrum(args, cfg: Config) -> int:
    try:
        params = barut.BarutParams(args.a, args.b, args.m, args.b1, args.b2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload: dict = {"params": asdict(params)}
    if args.third_order:
        try:
            res = barut.third_order_operator(params, args.branch)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        closed = res.spectrum
        numeric = barut.numeric_spectrum(res.product)
        payload["branch"] = res.branch
        payload["expansion_residual"] = res.expansion_residual
        ok = res.expansion_residual < 1e-12
    else:
        canon = barut.param_map(params)
        closed = barut.second_order_spectrum(params)
        numeric = barut.numeric_spectrum(barut.second_order_operator(params))
        payload["canonical"] = asdict(canon)
        ok = True
    err = _compare_spectra(closed, numeric)
    ok = ok and err < 1e-8
    payload["spectrum"] = [s.as_dict() for s in closed]
    payload["numeric_relative_error"] = err
    payload["verified"] = ok
    if cfg.output_format == "csv":
        _emit(csv_text(["mass", "multiplicity", "branch"],
                       [[s.mass, s.multiplicity, s.branch] for s in closed]))
    else:
        _emit(document("spectrum", payload))
    if not ok:
        print("spectrum verification failed: closed form and root finding disagree", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_leptons(args, cfg: Config) -> int:
    _csv_only_for(cfg, "leptons")
    alpha_inv = cfg.alpha_inverse if args.alpha_inverse is None else args.alpha_inverse
    m_e = cfg.electron_mass_mev if args.electron_mass is None else args.electron_mass
    if not alpha_inv > 0 or not m_e > 0:
        raise UsageError("alpha inverse and electron mass must be positive")
    table = barut.lepton_table(alpha_inv, m_e)
    payload = {
        "constants": {"alpha_inverse": alpha_inv, "electron_mass_mev": m_e},
        "masses_mev": table,
        "alpha2_electron_per_mev": barut.alpha2_physical(m_e, 1.0 / alpha_inv),
    }
    _emit(document("leptons", payload))
    return EXIT_OK


def _read_modeset(path: str, cfg: Config) -> noether.ModeSet:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read mode set: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("mode set must be a JSON object")
    if "L" not in data and cfg.box_length is not None:
        data = {**data, "L": cfg.box_length}
    try:
        return noether.ModeSet.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid mode set: {exc}") from None


def _complex_arg(text: str | None) -> complex | None:
    if text is None:
        return None
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def cmd_invariants(args, cfg: Config) -> int:
    _csv_only_for(cfg, "invariants")
    ms = _read_modeset(args.modeset, cfg)
    a1 = _complex_arg(args.alpha1)
    a2 = _complex_arg(args.alpha2)
    a3 = _complex_arg(args.alpha3)
    a4 = _complex_arg(args.alpha4)
    lagr = barut.LagrangianParams(complex(-0.5 if a1 is None else a1), complex(a2 or 0), complex(a3 or 0), 0j)
    lagr = noether.on_shell(lagr, ms.m) if a4 is None else replace(lagr, alpha4=a4)
    report = noether.invariants(lagr, ms, args.time)
    h_modes, q_modes = noether.factorized_invariants(lagr, ms)
    per_mode = []
    for md in ms.modes:
        k = ms.momentum(md)
        mass = ms.mass_of(md)
        per_mode.append({
            "n": list(md.n), "h": md.h, "energy": ms.energy(md),
            "hamiltonian_coefficient": complex(noether.mode_hamiltonian_coefficient(lagr, k, mass)),
            "charge_coefficient": noether.mode_charge_coefficient(lagr, k, md.h, md.h, mass),
        })
    scale = max(1.0, abs(report.hamiltonian), abs(report.charge))
    mismatch = max(abs(report.hamiltonian - h_modes), abs(report.charge - q_modes)) / scale
    payload = {
        "lagrangian": asdict(lagr),
        "modeset": ms.to_dict(),
        "report": {k: v for k, v in report.as_dict().items() if not k.endswith("_samples")},
        "factorized": {"hamiltonian": h_modes, "charge": q_modes, "relative_mismatch": mismatch},
        "modes": per_mode,
        "sign_convention": "Euclidean: H = -int T_44, Q = -i int J_4; mode coefficients carry the overall minus sign",
    }
    _emit(document("invariants", payload))
    if mismatch > 1e-8:
        print("invariants: mode sum and coefficient form disagree", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_transform(args, cfg: Config) -> int:
    _csv_only_for(cfg, "transform")
    try:
        rep = alg.Representation(args.rep)
        gs = alg.build_gammas(rep)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    c = alg.charge_conjugation_matrix(rep)
    max_re = max(float(np.max(np.abs(g.real))) for g in gs.gammas)
    payload = {
        "representation": rep.value,
        "basis_change": alg.basis_change(rep),
        "gammas": [g for g in gs.gammas],
        "gamma5": gs.gamma5,
        "charge_conjugation": c,
        "clifford_residual": alg.clifford_residual(gs),
        "max_abs_real_part": max_re,
        "conjugation_identities": alg.conjugation_identities(rep),
    }
    if rep is alg.Representation.MAJORANA:
        payload["majorana_report"] = majorana.majorana_report()
    _emit(document("transform", payload))
    return EXIT_OK


def _parse_vector(text: str | None, n: int, name: str) -> list[float] | None:
    if text is None:
        return None
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{name} must be comma-separated numbers") from None
    if len(vals) != n:
        raise UsageError(f"{name} needs {n} numbers")
    return vals


def cmd_fgm_check(args, cfg: Config) -> int:
    _csv_only_for(cfg, "fgm-check")
    c = _parse_vector(args.c, 4, "--c") or [0.0] * 4
    f_flat = _parse_vector(args.F, 16, "--F")
    f = np.zeros((4, 4)) if f_flat is None else np.asarray(f_flat).reshape(4, 4)
    if args.B is not None:
        f = np.zeros((4, 4))
        f[1, 2], f[2, 1] = args.B, -args.B
    if not args.m > 0:
        raise UsageError("mass must be positive")
    try:
        field_ = fgm.EMField(args.field, tuple(c), f, args.e)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    identity = fgm.squared_dirac_identity(field_)
    g5 = fgm.gamma5_structure(field_, args.m)
    payload = {
        "field": {"family": field_.family, "c": list(field_.c), "F": field_.F, "e": field_.e},
        "mass": args.m,
        "squared_dirac_residual": identity,
        "gamma5_commutator": g5.commutator,
        "chiral_projection_residual": g5.projected_residual,
        "tolerance": cfg.tolerance,
    }
    ok = identity < cfg.tolerance and g5.commutator < cfg.tolerance and g5.projected_residual < cfg.tolerance
    payload["verified"] = ok
    _emit(document("fgm-check", payload))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, cfg: Config) -> int:
    ctx = verification.Context(tolerance=cfg.tolerance)
    if args.corrupt_u:
        u = alg.majorana_unitary()
        ctx.majorana_u = u + 1e-3 * np.diag([1, -1, 1, -1])
    suites = verification.SUITES if args.suite == "all" else (args.suite,)
    first_failure = None
    for suite in suites:
        results = verification.run_suite(suite, ctx)
        print(f"[{suite}]")
        for r in results:
            print(f"  {r.line()}")
            if not r.passed and not r.note and first_failure is None:
                first_failure = f"{suite}: {r.name}"
        passed = sum(r.passed for r in results if not r.note)
        total = sum(not r.note for r in results)
        notes = sum(r.note for r in results)
        print(f"  summary {suite}: {passed}/{total} passed, {notes} note(s)")
    if first_failure is not None:
        print(f"FAILED: {first_failure}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_spinors(args, cfg: Config) -> int:
    momenta = [_parse_vector(p, 3, "--p") for p in (args.p or ["0,0,0.5"])]
    try:
        rows = spinors.spinor_table(momenta, args.a, args.b, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.output_format == "csv":
        header = ["p0", "p1", "p2", "p3", "h", "kind"] + [f"{part}{i}" for i in range(4) for part in ("re", "im")]
        _emit(csv_text(header, [[*r["p"], r["h"], r["kind"], *r["components"]] for r in rows]))
    else:
        _emit(document("spinors", {"a": args.a, "b": args.b, "m": args.m, "rows": rows}))
    return EXIT_OK


# ------------------------------------------------------------ parser

def _finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help=f"JSON config file (overridden by ${CONFIG_ENV})")
    common.add_argument("--output", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--tolerance", type=_finite_float, default=argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="barut-kit", description="Barut wave-equation toolkit.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("spectrum", help="mass spectrum of the second- or third-order operator")
    s.add_argument("--a", type=_finite_float, required=True)
    s.add_argument("--b", type=_finite_float, default=0.0)
    s.add_argument("--m", type=_finite_float, default=1.0)
    s.add_argument("--b1", type=_finite_float, default=0.0)
    s.add_argument("--b2", type=_finite_float, default=0.0)
    s.add_argument("--third-order", action="store_true")
    s.add_argument("--branch", default="++", help="sign branch: ++, +-, -+ or --")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("leptons", help="electron, muon and tau masses")
    s.add_argument("--alpha-inverse", type=_finite_float, default=None)
    s.add_argument("--electron-mass", type=_finite_float, default=None)
    s.set_defaults(func=cmd_leptons)

    s = sub.add_parser("invariants", help="H and Q of a mode set")
    s.add_argument("modeset", help="mode-set JSON file, or - for stdin")
    s.add_argument("--alpha1", default=None, help="complex, default -0.5 (positive energy for particle modes)")
    s.add_argument("--alpha2", default=None)
    s.add_argument("--alpha3", default=None)
    s.add_argument("--alpha4", default=None, help="default: on-shell value for the mode-set mass")
    s.add_argument("--time", type=_finite_float, default=0.0)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("transform", help="gamma matrices and C in a representation")
    s.add_argument("--rep", default="majorana", choices=[r.value for r in alg.Representation])
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("fgm-check", help="squared Dirac identity and gamma5 structure")
    s.add_argument("--field", default="zero", choices=fgm.FAMILIES)
    s.add_argument("--e", type=_finite_float, default=1.0)
    s.add_argument("--c", default=None, help="constant potential c0,c1,c2,c3")
    s.add_argument("--F", default=None, help="16 comma-separated F_mu_nu entries, row major")
    s.add_argument("--B", type=_finite_float, default=None, help="shorthand for F_12 = B")
    s.add_argument("--m", type=_finite_float, default=1.0)
    s.set_defaults(func=cmd_fgm_check)

    s = sub.add_parser("verify", help="run identity suites")
    s.add_argument("--suite", default="all", choices=("all",) + verification.SUITES)
    s.add_argument("--corrupt-u", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("spinors", help="helicity spinor table")
    s.add_argument("--p", action="append", help="3-momentum px,py,pz (repeatable)")
    s.add_argument("--a", type=_finite_float, default=1.0)
    s.add_argument("--b", type=_finite_float, default=0.0)
    s.add_argument("--m", type=_finite_float, default=1.0)
    s.set_defaults(func=cmd_spinors)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"barut-kit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
