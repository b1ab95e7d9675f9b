"""``lamplighter`` command line interface.

Every command prints one JSON document (or CSV with ``--format csv``).  Exact
values are strings such as ``"3/4*z(3,1)"``; floats are rounded to
``--precision`` digits so identical inputs give byte-identical output.

Exit codes: 0 success, 1 a verification found violations, 2 usage,
3 syntax error, 4 mixed picture, 5 domain error, 6 unsupported operation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import climit, feldman_moore as fm, odometer, periodic, spectral
from .bernoulli import BernoulliElement, mult_operator_rank
from .errors import LamplighterError, LevelTooSmall, Unsupported
from .odometer import OdometerElement
from .parser import PICTURES, parse_element
from .periodic import PeriodicOperator
from .wreath import WreathElement, kappa, kappa_inverse

EXIT_VIOLATION = 1
EXIT_DOMAIN = 5


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LAMPLIGHTER_THREADS", "1")))
    except ValueError:
        return 1


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def _level_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError("need 0 <= a <= b")
    return list(range(lo, hi + 1))


def _grid_arg(text: str):
    if "," in text:
        try:
            return sorted(float(x) for x in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")
    if n < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    return n


# -- helpers -------------------------------------------------------------------------

def _as_operator(elem) -> PeriodicOperator:
    if isinstance(elem, PeriodicOperator):
        return elem
    if isinstance(elem, OdometerElement):
        return odometer.psi_inv(elem)
    raise Unsupported(f"this command needs a periodic or odometer element, not {elem.picture}")


def _levels(args, A: PeriodicOperator, default_extra: int = 3) -> list[int]:
    if getattr(args, "levels", None):
        levels = args.levels
    elif getattr(args, "level", None) is not None:
        levels = [args.level]
    else:
        levels = [A.period_exp + default_extra]
    low = [n for n in levels if n < A.period_exp]
    if low:
        raise LevelTooSmall(f"level {low[0]} is below the period exponent {A.period_exp}")
    return levels


def _map_levels(fn, levels):
    """Evaluate per level, concurrently when threads are configured; ordered output."""
    threads = _threads()
    if threads > 1 and len(levels) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, levels))
    return [fn(n) for n in levels]


def _element(args):
    return parse_element(args.expression, args.picture)


def _picture_of(elem) -> str:
    return elem.picture


# -- commands ---------------------------------------------------------------------------

def cmd_trace(args):
    elem = _element(args)
    value = elem.t_trace() if isinstance(elem, PeriodicOperator) else elem.trace()
    return {"command": "trace", "picture": _picture_of(elem), "expression": str(elem), "trace": str(value)}


def cmd_rank(args):
    elem = _element(args)
    if isinstance(elem, BernoulliElement):
        r = mult_operator_rank(elem)
        return {"command": "rank", "picture": "bernoulli", "expression": str(elem), "rank": str(r)}
    A = _as_operator(elem)

    def one(n):
        X = periodic.truncate(A, n)
        return {"level": n, "rank": str(X.rank()), "rank_int": X.rank_int()}

    return {
        "command": "rank",
        "picture": _picture_of(elem),
        "expression": str(elem),
        "results": _map_levels(one, _levels(args, A)),
    }


def cmd_rank_limit(args):
    elem = _element(args)
    A = _as_operator(elem)
    cert = climit.rank_limit(A, args.epsilon)
    out = {"command": "rank-limit", "picture": _picture_of(elem), "expression": str(elem), "epsilon": str(args.epsilon)}
    out.update(cert.to_json())
    return out


def cmd_spectrum(args):
    elem = _element(args)
    A = _as_operator(elem)
    grid = args.grid
    if isinstance(grid, int):
        grid = spectral.default_grid(A, grid)
    reports = _map_levels(lambda n: spectral.spectral_distribution(A, n, grid), _levels(args, A))
    if args.format == "csv":
        lines = []
        for i, rep in enumerate(reports):
            text = rep.to_csv(args.precision)
            lines.append(text if i == 0 else text.split("\n", 1)[1])
        return "".join(lines)
    return {
        "command": "spectrum",
        "picture": _picture_of(elem),
        "expression": str(elem),
        "reports": [r.to_json(args.precision) for r in reports],
    }


def cmd_moments(args):
    elem = _element(args)
    A = _as_operator(elem)
    levels = _levels(args, A)

    def one(n):
        rows = []
        for k in range(1, args.k + 1):
            rows.append(
                {
                    "k": k,
                    "moment": str(spectral.moments(A, k, n)),
                    "error_bound": str(spectral.moment_error_bound(A, k, n)),
                }
            )
        return {"level": n, "moments": rows}

    return {
        "command": "moments",
        "picture": _picture_of(elem),
        "expression": str(elem),
        "limit": [str(spectral.limit_moment(A, k)) for k in range(1, args.k + 1)],
        "levels": _map_levels(one, levels),
    }


def cmd_verify_axioms(args):
    from .sampling import random_level_matrix, random_low_rank_matrix, random_orthogonal_idempotents

    rng = random.Random(args.seed)
    n = args.level if args.level is not None else 3
    pairs = []
    for i in range(args.samples):
        gen = random_low_rank_matrix if i % 2 else random_level_matrix
        pairs.append((gen(rng, n), gen(rng, n)))
    idem = [random_orthogonal_idempotents(rng, n) for _ in range(max(1, args.samples // 5))]
    report = climit.verify_rank_axioms(pairs, idem)
    out = {"command": "verify-axioms", "level": n, "samples": args.samples, "seed": args.seed}
    out.update(report.to_json())
    out["violations_count"] = len(report.violations)
    return out, (0 if report.ok else EXIT_VIOLATION)


def cmd_psi(args):
    elem = _element(args)
    if isinstance(elem, PeriodicOperator):
        image = periodic.psi(elem)
    elif isinstance(elem, OdometerElement):
        image = odometer.psi_inv(elem)
    else:
        raise Unsupported("psi maps between the periodic and odometer pictures")
    out = {
        "command": "psi",
        "orientation": odometer.ORIENTATION,
        "input_picture": elem.picture,
        "input": str(elem),
        "output_picture": image.picture,
        "output": str(image),
    }
    if isinstance(image, PeriodicOperator):
        out["table"] = image.to_json()
    return out


def cmd_kappa(args):
    elem = _element(args)
    if isinstance(elem, WreathElement):
        image = kappa(elem)
    elif isinstance(elem, BernoulliElement):
        image = kappa_inverse(elem)
    else:
        raise Unsupported("kappa maps between the wreath and bernoulli pictures")
    return {
        "command": "kappa",
        "input_picture": elem.picture,
        "input": str(elem),
        "output_picture": image.picture,
        "output": str(image),
    }


def cmd_oe_demo(args):
    if args.actions:
        with open(args.actions) as fh:
            data = json.load(fh)
        a1 = fm.FiniteAction.from_json(data["action1"])
        a2 = fm.FiniteAction.from_json(data["action2"])
        psi = data.get("psi", list(range(a1.size)))
    else:
        a1, a2 = fm.odometer_action(args.m), fm.flip_action(args.m)
        psi = list(range(a1.size))
    report = fm.verify_orbit_equivalence_maps(a1, a2, psi)
    partitions = {}
    if report.checks.get("orbit_equivalence") and fm.check_orbit_equivalence(a1, a2, psi):
        for g in range(a1.order):
            parts = fm.fm_partition(a1, a2, psi, g)
            partitions[a1.names[g]] = {a2.names[d]: sorted(s) for d, s in parts.items() if s}
    out = {
        "command": "oe-demo",
        "orbits1": [sorted(o) for o in fm.orbits(a1)],
        "orbits2": [sorted(o) for o in fm.orbits(a2)],
        "free": [fm.is_free(a1), fm.is_free(a2)],
        "partitions": partitions,
    }
    out.update(report.to_json())
    return out, (0 if report.ok else EXIT_VIOLATION)


def cmd_convergence(args):
    elem = _element(args)
    A = _as_operator(elem)
    levels = _levels(args, A) if (args.levels or args.level is not None) else list(
        range(A.period_exp + 1, A.period_exp + 5)
    )
    levels = [n for n in levels if n >= A.period_exp]
    if len(levels) < 2:
        raise LevelTooSmall("convergence needs at least two levels")
    steps = list(zip(levels, levels[1:]))

    def one(nm):
        n, m = nm
        Xn = climit.diag_embed(periodic.truncate(A, n), m)
        Xm = periodic.truncate(A, m)
        check = spectral.uniform_convergence_check(A, n, m)
        return {
            "n": n,
            "m": m,
            "rank_n": str(periodic.truncate(A, n).rank()),
            "rank_m": str(Xm.rank()),
            "rank_distance": str(climit.rank_distance(Xn, Xm)),
            "cauchy_modulus": str(periodic.cauchy_modulus(A, n, m)),
            "cdf": check.to_json(args.precision),
        }

    rows = _map_levels(one, steps)
    if args.format == "csv":
        head = "n,m,rank_n,rank_m,rank_distance,cauchy_modulus,cdf_sup_distance\n"
        return head + "".join(
            f"{r['n']},{r['m']},{r['rank_n']},{r['rank_m']},{r['rank_distance']},{r['cauchy_modulus']},"
            f"{r['cdf']['sup_distance']}\n"
            for r in rows
        )
    return {"command": "convergence", "picture": _picture_of(elem), "expression": str(elem), "steps": rows}


COMMANDS = {
    "trace": cmd_trace,
    "rank": cmd_rank,
    "rank-limit": cmd_rank_limit,
    "spectrum": cmd_spectrum,
    "moments": cmd_moments,
    "verify-axioms": cmd_verify_axioms,
    "psi": cmd_psi,
    "kappa": cmd_kappa,
    "oe-demo": cmd_oe_demo,
    "convergence": cmd_convergence,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lamplighter", description="Exact computations in the lamplighter algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--picture", choices=PICTURES, help="algebra picture when the expression is ambiguous")
    common.add_argument("-e", "--epsilon", type=_fraction, default=Fraction(1, 256), help="rank tolerance (default 1/256)")
    common.add_argument("--level", type=int, help="truncation level n (matrices are 2^n x 2^n)")
    common.add_argument("--levels", type=_level_range, help="range of levels a..b")
    common.add_argument("--grid", type=_grid_arg, default=64, help="number of points on [0, K^2] or a comma list")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--precision", type=int, default=12, help="digits kept in float output")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify-axioms":
            sp.add_argument("--samples", type=int, default=50)
            sp.add_argument("--seed", type=int, default=0)
        elif name == "oe-demo":
            sp.add_argument("--m", type=int, default=2, help="binary word length of the demo")
            sp.add_argument("--actions", help="JSON file with action1, action2 and optional psi")
        else:
            sp.add_argument("expression")
            if name == "moments":
                sp.add_argument("-k", type=int, default=3, help="highest moment order")
    return p


def _emit(result, fmt: str, stream) -> None:
    if isinstance(result, str):
        stream.write(result)
    else:
        if fmt == "csv":
            raise Unsupported("csv output is available for spectrum and convergence")
        stream.write(json.dumps(result, indent=2) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
        code = 0
        if isinstance(result, tuple):
            result, code = result
        _emit(result, args.format, sys.stdout)
        return code
    except LamplighterError as exc:
        err = {"error": exc.code, "message": str(exc)}
        if getattr(exc, "position", None) is not None:
            err["position"] = exc.position
        sys.stderr.write(json.dumps(err) + "\n")
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(json.dumps({"error": "domain_error", "message": str(exc)}) + "\n")
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
