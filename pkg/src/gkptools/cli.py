"""Command-line interface.

Every subcommand prints JSON (or CSV for ``stats --format csv``) to stdout,
or to the file named by ``--out``.  Exit codes: 0 success, 2 invalid input,
3 domain error; errors are reported as one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import clifford, curves, lattice, modular, paths
from .errors import GkpError, ValidationError
from .exact_linalg import ExactMatrix, rotation
from .expr import parse_complex, parse_real

EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN = 0, 2, 3


# output


class _Full:
    """Marks data printed with round-trip precision (code descriptors meant to be reloaded)."""

    def __init__(self, value):
        self.value = value


def _fmt(x, style="%.12g"):
    if isinstance(x, _Full):
        return _fmt(x.value, "%.17g")
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "null"
        if x == 0:
            x = 0.0  # no "-0"
        return style % x
    if isinstance(x, (complex, np.complexfloating)):
        return _fmt({"re": x.real, "im": x.imag}, style)
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v, style)}" for k, v in x.items()) + "}"
    if isinstance(x, ExactMatrix):
        return _fmt([[float(v) if v.denominator != 1 else int(v) for v in r] for r in x.rows], style)
    if isinstance(x, np.ndarray):
        return _fmt(x.tolist(), style)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v, style) for v in x) + "]"
    return json.dumps(str(x))


def render_json(obj):
    return _fmt(obj) + "\n"


# parsing helpers


def _complex_arg(text):
    return parse_complex(text)


def _int_list(text, n=None):
    try:
        vals = [int(v) for v in text.replace(" ", "").split(",")]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise ValidationError(f"expected {n} integers, got {len(vals)}")
    return vals


def _real_list(text):
    return [parse_real(v) for v in text.split(",")]


def _matrix2(text, exact=True):
    if exact:
        a, b, c, d = _int_list(text, 4)
        return ExactMatrix([[a, b], [c, d]])
    vals = _real_list(text)
    if len(vals) != 4:
        raise ValidationError("expected 4 comma-separated entries")
    return np.array(vals).reshape(2, 2)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise ValidationError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise ValidationError("expected a positive integer")
    return v


def _load_code(args):
    if getattr(args, "descriptor", None):
        text = args.descriptor
        if not text.lstrip().startswith("{"):
            try:
                with open(text) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ValidationError(f"cannot read descriptor: {exc}") from None
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"bad JSON descriptor: {exc}") from None
        return lattice.GkpCode.from_json(obj)
    d = args.d
    if getattr(args, "tau", None) is not None:
        return lattice.from_tau(_complex_arg(args.tau), d)
    name = getattr(args, "code", None) or "square"
    if name == "square":
        return lattice.square_code(d)
    if name in ("hexagonal", "hex"):
        return lattice.hexagonal_code(d)
    raise ValidationError(f"unknown code {name!r} (use square, hexagonal, --tau or --descriptor)")


def _code_report(code):
    Mp = lattice.dual_basis(code)
    out = {
        "n": code.n,
        "D": list(code.D),
        "M": _Full(code.M),
        "gram": code.A,
        "dual": Mp,
    }
    out["distance"] = lattice.distance(code)  # EmptyCoset when D = 1
    pb = lattice.canonical_pauli_basis(code)
    out["pauli_basis"] = [{"e": e, "f": f, "eJf": float(p)} for e, f, p in zip(pb.e, pb.f, pb.products)]
    if code.n == 1:
        out["tau"] = lattice.code_tau(code).value
    return out


# commands


def cmd_code(args):
    return _code_report(_load_code(args))


def cmd_clifford(args):
    code = _load_code(args)
    if args.U is not None:
        U = _matrix2(args.U)
        g = clifford.real_rep(code, U)
    else:
        if args.rotate is not None:
            g = rotation(parse_real(args.rotate))
        elif args.g is not None:
            g = _matrix2(args.g, exact=False)
        else:
            raise ValidationError("give one of --rotate, --g or --U")
        U = clifford.integral_rep(code, g)
    d = code.d if code.d is not None else code.D[-1]
    return {"U": U, "g": g, "d": d, "logical": clifford.logical_action(U, d)}


def cmd_rademacher(args):
    A = _matrix2(args.matrix)
    if args.mod is not None:
        q = _positive_int(args.mod)
        return {"matrix": A, "q": q, "psi_mod_q": clifford.rademacher_mod(A, q)}
    if A.det() != 1:
        raise ValidationError("det A must be 1")
    out = {"matrix": A, "psi": clifford.rademacher_dedekind(A)}
    tokens, sign = clifford.st_word(A)
    out["st_word"] = " ".join(tokens)
    out["st_sign"] = sign
    a, _, _, d = (int(x) for r in A.rows for x in r)
    if abs(a + d) > 2:
        w = clifford.rl_word(A)
        out["rl_word"] = list(w.exponents)
        out["psi_rl"] = clifford.rademacher_rl(w)
    return out


def cmd_stats(args):
    h = clifford.rademacher_stats(_positive_int(args.q))
    fmt = args.format or ("csv" if (args.out or "").endswith(".csv") else "json")
    if fmt == "csv":
        buf = io.StringIO()
        buf.write("k,count,density\n")
        for k, c, p in h.rows():
            buf.write(f"{k},{c},{'%.12g' % p}\n")
        return buf.getvalue()
    return {
        "q": h.q,
        "group_order": h.group_order,
        "hyperbolic": h.total,
        "rows": [{"k": k, "count": c, "density": p} for k, c, p in h.rows()],
    }


def _path_from_args(args):
    code = _load_code(args)
    if code.n != 1:
        raise ValidationError("paths need a single-mode code")
    return code, paths.parse_path(args.path, code.M)


def cmd_linking(args):
    _, p = _path_from_args(args)
    A = paths.closure(p)
    k = paths.linking_number(p)
    return {"linking": k, "winding": paths.winding(p)[0], "certificate": A}


def cmd_braid(args):
    _, p = _path_from_args(args)
    bt = paths.braid_trace(p, resolution=args.resolution)
    A = paths.closure(p)
    return {
        "permutation": [i + 1 for i in bt.permutation],
        "crossings": [f"s{k}" if s > 0 else f"s{k}^-1" for k, s in bt.crossings],
        "certificate": A,
        "two_torsion_permutation": [i + 1 for i in paths.two_torsion_permutation(A)],
    }


def cmd_reduce(args):
    t = _complex_arg(args.tau)
    tr, word, gamma = modular.reduce_fundamental(t)
    return {"tau": tr.value, "word": word, "gamma": gamma}


_EMIT = ("j", "delta", "g2", "g3", "e2", "e4", "e6", "e-roots")


def cmd_modular(args):
    t = _complex_arg(args.tau)
    modular.Tau(t)
    keys = [k.strip() for k in args.emit.split(",") if k.strip()]
    bad = [k for k in keys if k not in _EMIT]
    if bad:
        raise ValidationError(f"unknown quantities {bad}; choose from {', '.join(_EMIT)}")
    out = {"tau": t}
    for k in keys:
        if k == "j":
            out["j"] = modular.j_invariant(t)
        elif k == "delta":
            out["delta"] = modular.discriminant(t)
        elif k == "g2":
            out["g2"] = modular.g2(t)
        elif k == "g3":
            out["g3"] = modular.g3(t)
        elif k in ("e2", "e4", "e6"):
            out[k] = modular.eisenstein(int(k[1]), t)
        else:
            out["e_roots"] = list(modular.wp_half_periods(t))
    return out


def cmd_curve(args):
    roots = _real_list(args.roots)
    curve = curves.HyperellipticCurve(tuple(roots), leading=parse_real(args.leading))
    code = curves.gkp_from_curve(curve, args.d)
    desc = code.to_json()
    desc["M"] = _Full(desc["M"])
    return desc


# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser():
    p = _Parser(prog="gkptools", description="GKP lattice, Clifford and modular-form tools")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=False):
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--format", choices=("json", "csv") if fmt else ("json",))

    def code_args(sp):
        sp.add_argument("--code", choices=("square", "hexagonal", "hex"), help="named single-mode code")
        sp.add_argument("--tau", help="modular parameter, e.g. i, rho, 0.3+1.2i, exp(2*pi*i/3)")
        sp.add_argument("--d", type=_positive_int, default=2)
        sp.add_argument("--descriptor", help='JSON code descriptor {"n":..,"D":..,"M":..} or a file holding one')

    sp = sub.add_parser("code", help="type, Gram, dual basis, distance and Pauli basis of a code")
    code_args(sp)
    common(sp)
    sp.set_defaults(func=cmd_code)

    sp = sub.add_parser("clifford", help="integral / real representation and logical action")
    code_args(sp)
    sp.add_argument("--rotate", help="phase-space rotation angle, e.g. pi/2")
    sp.add_argument("--g", help="symplectic matrix 'a,b,c,d' (row major)")
    sp.add_argument("--U", help="integral matrix 'a,b,c,d' (row major)")
    common(sp)
    sp.set_defaults(func=cmd_clifford)

    sp = sub.add_parser("rademacher", help="Rademacher function of an SL(2, Z) matrix")
    sp.add_argument("--matrix", required=True, help="'a,b,c,d' (row major)")
    sp.add_argument("--mod", help="prime q for the mod-q invariant")
    common(sp)
    sp.set_defaults(func=cmd_rademacher)

    sp = sub.add_parser("stats", help="histogram of psi mod q over hyperbolic elements of SL(2, Z_q)")
    sp.add_argument("--q", required=True)
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_stats)

    for name, func, helptext in (
        ("linking", cmd_linking, "linking number of a closed path with the trefoil"),
        ("braid", cmd_braid, "braid of the half-period roots along a path"),
    ):
        sp = sub.add_parser(name, help=helptext)
        code_args(sp)
        sp.add_argument("--path", required=True, help="segments rotate:<angle>, shear:<s>, squeeze:<lambda>, comma separated")
        if name == "braid":
            sp.add_argument("--resolution", type=_positive_int, default=64)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("reduce", help="reduce tau to the fundamental domain")
    sp.add_argument("--tau", required=True)
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("modular", help="modular forms at tau")
    sp.add_argument("--tau", required=True)
    sp.add_argument("--emit", default="j,delta,g2,g3,e-roots")
    common(sp)
    sp.set_defaults(func=cmd_modular)

    sp = sub.add_parser("curve", help="GKP code from a real hyperelliptic curve")
    sp.add_argument("--roots", required=True, help="comma-separated real branch points")
    sp.add_argument("--leading", default="1", help="leading coefficient")
    sp.add_argument("--d", type=_positive_int, default=2)
    common(sp)
    sp.set_defaults(func=cmd_curve)
    return p


def _error_line(exc):
    return json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"


def _glue_values(argv):
    # every option takes a value; gluing lets values such as -1,0,1 or -pi/3 through
    out, it = [], iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok and tok not in ("--help", "--"):
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
            else:
                out += [tok, nxt]
        else:
            out.append(tok)
    return out


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_values(argv))
        result = args.func(args)
        text = result if isinstance(result, str) else render_json(result)
        if args.out:
            try:
                with open(args.out, "w") as fh:
                    fh.write(text)
            except OSError as exc:
                raise ValidationError(f"cannot write {args.out}: {exc}") from None
        else:
            stdout.write(text)
        return EXIT_OK
    except ValidationError as exc:
        stderr.write(_error_line(exc))
        return EXIT_VALIDATION
    except GkpError as exc:
        stderr.write(_error_line(exc))
        return EXIT_DOMAIN


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
