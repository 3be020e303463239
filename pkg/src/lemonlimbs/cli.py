"""Command-line entry point.

Every command prints line-oriented ASCII records: either bare values or
space-separated key=value fields.  Exit status is 0 on success, 1 on a
domain error and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import re
import sys
import time

from . import combinatorics as comb
from . import laminations as lam
from . import lemon
from . import numerics as num
from . import render as rnd
from . import renorm
from . import simulating as sim
from . import suites
from .angles import Angle, forward_orbit, parse_angle_list
from .errors import DomainError


def _angle(text: str) -> Angle:
    if not re.fullmatch(r"\s*-?\d+(\s*/\s*-?\d+)?\s*", text):
        raise argparse.ArgumentTypeError(f"not an angle p/q: {text!r}")
    try:
        return Angle.parse(text.replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _angles(text: str) -> list:
    try:
        out = parse_angle_list(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if not out:
        raise argparse.ArgumentTypeError("empty angle list")
    return out


def _complex(text: str) -> complex:
    try:
        return num.parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number re,im: {text!r}")


def _perm(text: str):
    try:
        return comb.parse_cyclic(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _res(text: str) -> tuple:
    m = re.fullmatch(r"(\d+)[xX,](\d+)", text.strip())
    if not m or int(m.group(1)) == 0 or int(m.group(2)) == 0:
        raise argparse.ArgumentTypeError(f"resolution must be WxH: {text!r}")
    return int(m.group(1)), int(m.group(2))


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _cplx(z: complex) -> str:
    return num.fmt_complex(complex(z))


def _pair(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g} {z.imag:.17g}"


# ---- combinatorial commands -------------------------------------------------


def cmd_orbits(args, out):
    for orb in comb.all_cycles(args.k, args.q):
        sigma = comb.combinatorics(orb)
        rot = comb.rotation_number(sigma)
        out(f"orbit={orb} sigma={sigma} degree={comb.degree(sigma)} rotation={rot if rot is not None else 'none'}")


def cmd_simulate(args, out):
    sp = sim.simulating_pair(args.t)
    out(sp.record())
    if args.levels:
        for j, orb in enumerate(sim.realizations_ordered(sp.sigma)):
            out(f"level={j} orbit={orb}")


def cmd_realize(args, out):
    if args.count:
        out(str(comb.count_realizations(args.sigma, args.k)))
        return
    for orb in comb.enumerate_realizations(args.sigma, args.k):
        out(f"orbit={orb} below_half={orb.count_below(sim.HALF)}")


def cmd_partners(args, out):
    if args.t is not None:
        out(f"t={args.t} partner={lam.m_partner(args.t)}")
        return
    for a, b in lam.partner_table(args.q):
        out(f"{a} <-> {b}")


def cmd_portrait(args, out):
    out(str(lam.portrait_for_limb(forward_orbit(2, args.orbit), args.limb)))


def cmd_reduce(args, out):
    cert = comb.dynamically_reducible(args.sigma)
    if cert is None:
        out(f"sigma={args.sigma} reducible=false")
        return
    pred = lam.predict_merging(args.sigma)
    out(f"sigma={args.sigma} reducible=true {cert}")
    if pred is not None:
        out(str(pred))


def cmd_third_cycle(args, out):
    orb = lam.third_cycle(args.t, args.limb)
    if orb is None:
        out(f"t={args.t} third_cycle=none")
    else:
        out(f"t={args.t} third_cycle={orb} sigma={comb.combinatorics(orb)}")


# ---- numerical commands -----------------------------------------------------


def _cubic(args) -> num.CubicMap:
    return num.CubicMap(args.a, args.b)


def cmd_trace_ray(args, out):
    tr = num.trace_ray(_cubic(args), args.angle, s_end=args.s_end)
    if args.summary:
        landing = "none" if tr.landing is None else _cplx(tr.landing)
        tail = _cplx(tr.tail) if tr.points else "none"
        out(f"angle={tr.angle} status={tr.status} points={len(tr.points)} tail={tail} landing={landing}")
        return
    for z, s in tr.points:
        out(f"{s:.17g} {_pair(z)}")
    return 0 if tr.points else 1


def cmd_coland(args, out):
    res = num.coland_test(_cubic(args), args.theta1, args.theta2, args.q)
    out(str(res))


def cmd_lemon(args, out):
    if args.lemon_cmd == "kappa":
        out(_pair(lemon.internal_kappa(args.a)))
    elif args.lemon_cmd == "boundary":
        bp = lemon.boundary_param(args.t, args.resolution)
        out(_pair(bp.a))
    elif args.lemon_cmd == "ray":
        tr = lemon.param_ray(args.xi, args.s_end)
        if args.points:
            for a, _ in tr.points:
                out(_pair(a))
        if tr.landing is not None:
            out(_pair(tr.landing))
        else:
            raise num.NoConvergence(f"parameter ray {args.xi} status {tr.status}")
    elif args.lemon_cmd == "center":
        out(_pair(lemon.find_center(args.t, args.seed)))
    elif args.lemon_cmd == "limb":
        out(str(lemon.is_in_limb(args.a, args.t)))


def cmd_verify(args, out):
    if args.verify_cmd == "lren":
        verdict = renorm.lren_membership(num.CubicMap(args.a, args.b), args.t, args.n)
        out(f"t={args.t} verdict={verdict.kind} n={verdict.n if verdict.n is not None else 'none'} critical={verdict.which or 'none'} detail={verdict.detail or 'none'}")
        return 0
    names = list(suites.SUITES) if args.verify_cmd == "all" else [args.verify_cmd]
    status = 0
    for name in names:
        t0 = time.perf_counter()
        res = suites.SUITES[name](args.max_period)
        prefix = f"suite={name} " if args.verify_cmd == "all" else ""
        out(f"{prefix}{res}")
        if args.verify_cmd == "all":
            out(f"suite={name} seconds={time.perf_counter() - t0:.3f}")
        if not res.ok:
            status = 1
    return status


def cmd_examples(args, out):
    if args.example == "cheb-basilica":
        P = renorm.make_chebyshev_basilica()
        out(f"a={_cplx(P.a)} b={_cplx(P.b)}")
        if args.report:
            out(str(renorm.classify_coland_orbit(P, "1/3")))
    elif args.example == "merging":
        P = renorm.make_merging_example()
        out(f"a={_cplx(P.a)} b={_cplx(P.b)}")
        if args.report:
            out(str(renorm.classify_coland_orbit(P, "1/5")))
    elif args.example == "lemon-center":
        a = lemon.find_center(args.t)
        out(f"t={args.t} a={_cplx(a)}")


def cmd_render(args, out):
    w = rnd.Window(args.center, args.half_width)
    if args.scene == "julia":
        P = num.CubicMap(args.a, args.b)
        rays = [num.trace_ray(P, th, s_end=1e-6) for th in args.rays or []]
        img = rnd.render_julia(P, w, args.res, rays, args.palette, args.threads, args.max_iter)
    else:
        rays = [lemon.param_ray(th, 1e-5) for th in args.rays or []]
        img = rnd.render_param_lemon(w, args.res, rays, args.palette, args.threads, args.max_iter)
    rnd.write_ppm(img, args.out)
    out(f"wrote={args.out} width={img.width} height={img.height}")


# ---- record syntax ----------------------------------------------------------

_NUM = r"[-+]?(?:\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|inf|nan)"
_VALUE_PATTERNS = [
    r"[-+]?\d+",  # integer
    _NUM,
    r"-?\d+/\d+",  # angle
    rf"{_NUM},{_NUM}",  # complex
    r"\{[^{}\s]*\}",  # angle list
    r"\{(?:\{[^{}\s]*\},?)*\}",  # list of classes
    r"\(\d+(?:\s\d+)*\)(?:\(\d+(?:\s\d+)*\))*",  # permutation
    r"\((?:\d+/\d+|0),(?:\d+/\d+|0)\)",  # arc
    r"[A-Za-z][A-Za-z0-9_./:,'-]*",  # word
    r"<->",
    r"\S+\.ppm",
]
_VALUE_RE = re.compile("|".join(f"(?:{p})" for p in _VALUE_PATTERNS))
_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def parse_record(line: str) -> list:
    """Split a record into (key, value) pairs; bare values get key None.

    Raises ValueError when a token is not a recognised value.
    """
    fields = []
    for token in line.split(" "):
        if token == "":
            raise ValueError("empty field")
        key, value = None, token
        if "=" in token:
            key, value = token.split("=", 1)
            if not _KEY_RE.fullmatch(key):
                raise ValueError(f"bad key {key!r}")
        if not _VALUE_RE.fullmatch(value):
            raise ValueError(f"bad value {value!r}")
        fields.append((key, value))
    return fields


def format_record(fields) -> str:
    return " ".join(v if k is None else f"{k}={v}" for k, v in fields)


def parse_check(stream, out) -> int:
    bad = 0
    n = 0
    for n, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        try:
            if format_record(parse_record(line)) != line:
                raise ValueError("round trip changed the record")
        except ValueError as exc:
            bad += 1
            out(f"line={n} error={str(exc).replace(' ', '_')}")
    out(f"parse-check lines={n} bad={bad}")
    return 1 if bad else 0


# ---- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lemonlimbs", description="Limbs of cubic polynomials via simulating orbits.")
    p.add_argument("--parse-check", metavar="FILE", help="check that FILE ('-' for stdin) holds valid output records")
    sub = p.add_subparsers(dest="cmd")

    s = sub.add_parser("orbits", help="all period-q cycles of m_k with their combinatorics")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("simulate", help="simulating pair of a periodic angle")
    s.add_argument("--t", type=_angle, required=True)
    s.add_argument("--levels", action="store_true", help="also list O_0..O_q")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("realize", help="count or list m_k realizations of a cyclic permutation")
    s.add_argument("--sigma", type=_perm, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--count", action="store_true")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("partners", help="partner pairs of a period, or the partner of one angle")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--period", "--q", dest="q", type=int)
    g.add_argument("--t", type=_angle)
    s.set_defaults(func=cmd_partners)

    s = sub.add_parser("portrait", help="portrait of a doubling cycle for parameters in a limb")
    s.add_argument("--orbit", "--orbit-of", dest="orbit", type=_angle, required=True)
    s.add_argument("--limb", type=_angles, required=True)
    s.set_defaults(func=cmd_portrait)

    s = sub.add_parser("reduce", help="dynamical reducibility and merging prediction")
    s.add_argument("--sigma", type=_perm, required=True)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("third-cycle", help="third m_3 cycle co-landing with the simulating pair")
    s.add_argument("--t", type=_angle, required=True)
    s.add_argument("--limb", type=_angles, required=True)
    s.set_defaults(func=cmd_third_cycle)

    def cubic_flags(s):
        s.add_argument("--a", type=_complex, required=True)
        s.add_argument("--b", type=_complex, default=0j)

    s = sub.add_parser("trace-ray", help="follow an external ray of z^3 + 3a z^2 + b")
    cubic_flags(s)
    s.add_argument("--angle", "--theta", dest="angle", type=_angle, required=True)
    s.add_argument("--s-end", type=_positive, default=1e-6)
    s.add_argument("--summary", action="store_true", help="one status record instead of the point list")
    s.set_defaults(func=cmd_trace_ray)

    s = sub.add_parser("coland", help="do two rays land together")
    cubic_flags(s)
    s.add_argument("--angle1", "--theta1", dest="theta1", type=_angle, required=True)
    s.add_argument("--angle2", "--theta2", dest="theta2", type=_angle, required=True)
    s.add_argument("--q", type=int)
    s.set_defaults(func=cmd_coland)

    s = sub.add_parser("lemon", help="the slice z^3 + 3a z^2")
    s.set_defaults(func=cmd_lemon)
    ls = s.add_subparsers(dest="lemon_cmd", required=True)
    x = ls.add_parser("kappa")
    x.add_argument("--a", type=_complex, required=True)
    x = ls.add_parser("boundary")
    x.add_argument("--t", type=_angle, required=True)
    x.add_argument("--resolution", type=_positive, default=1e-8)
    x = ls.add_parser("ray")
    x.add_argument("--xi", type=_angle, required=True)
    x.add_argument("--s-end", type=_positive, default=1e-5)
    x.add_argument("--points", action="store_true")
    x = ls.add_parser("center")
    x.add_argument("--t", type=_angle, required=True)
    x.add_argument("--seed", type=_complex)
    x = ls.add_parser("limb")
    x.add_argument("--a", type=_complex, required=True)
    x.add_argument("--t", type=_angle, required=True)

    s = sub.add_parser("verify", help="oracle suites and renormalization-locus membership")
    s.set_defaults(func=cmd_verify)
    vs = s.add_subparsers(dest="verify_cmd", required=True)
    for name in list(suites.SUITES) + ["all"]:
        x = vs.add_parser(name)
        x.add_argument("--max-period", type=int, default=6)
    x = vs.add_parser("lren")
    cubic_flags(x)
    x.add_argument("--t", type=_angle, required=True)
    x.add_argument("--n", type=int, default=100)

    s = sub.add_parser("examples", help="named example cubics")
    s.set_defaults(func=cmd_examples)
    es = s.add_subparsers(dest="example", required=True)
    for name in ("cheb-basilica", "merging"):
        x = es.add_parser(name)
        x.add_argument("--report", action="store_true")
    x = es.add_parser("lemon-center")
    x.add_argument("--t", type=_angle, required=True)

    s = sub.add_parser("render", help="write a PPM picture")
    s.set_defaults(func=cmd_render)
    rs = s.add_subparsers(dest="scene", required=True)
    for scene in ("julia", "lemon"):
        x = rs.add_parser(scene)
        if scene == "julia":
            cubic_flags(x)
        x.add_argument("--center", type=_complex, default=0j)
        x.add_argument("--half-width", type=_positive, default=1.5)
        x.add_argument("--res", type=_res, default=(400, 400))
        x.add_argument("--out", required=True)
        x.add_argument("--rays", type=_angles)
        x.add_argument("--threads", type=int)
        x.add_argument("--palette", choices=sorted(rnd.PALETTES), default="default")
        x.add_argument("--max-iter", type=int, default=rnd.MAX_ITER)
    return p


_NEGATIVE_VALUE = re.compile(r"-[\d.][^\s]*")


def _attach_negative_values(argv: list) -> list:
    """Rewrite "--flag -1,2" as "--flag=-1,2" so argparse does not read the value as an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE_VALUE.fullmatch(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))

    def out(line: str) -> None:
        stdout.write(line + "\n")

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.parse_check is not None:
        if args.parse_check == "-":
            return parse_check(sys.stdin, out)
        with open(args.parse_check) as fh:
            return parse_check(fh, out)
    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        status = args.func(args, out)
    except DomainError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return status or 0


def main() -> None:
    sys.exit(run())
