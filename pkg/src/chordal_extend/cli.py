"""Command-line front end.

JSON results go to stdout (or ``--out``), one-line summaries to stderr.
Exit codes: 0 success, 1 negative result with a certificate, 2 usage or
input error, 3 numerical failure or cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import cayley as CY
from . import extend as E
from . import groups as G
from .completion import CliqueNotPSD, NotChordal, NotPSD, matrix_from_json
from .graphs import DEFAULT_CLIQUE_CAP, CliqueCapExceeded, is_chordal

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

CAPS_ENV = "CHORDAL_EXTEND_CAPS"

PAULI_X = [[0, 1], [1, 0]]
PAULI_Z = [[1, 0], [0, -1]]


class UsageError(Exception):
    pass


def load_caps(env=None) -> dict:
    """Parse ``radius=R,cliques=C`` from the environment."""
    env = os.environ if env is None else env
    caps = {"radius": G.DEFAULT_RADIUS_CAP, "cliques": DEFAULT_CLIQUE_CAP}
    raw = env.get(CAPS_ENV, "").strip()
    if not raw:
        return caps
    for part in raw.split(","):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in caps:
            raise UsageError(f"bad {CAPS_ENV} entry {part!r}")
        try:
            caps[key] = int(val)
        except ValueError:
            raise UsageError(f"bad {CAPS_ENV} value {val!r}") from None
    return caps


def load_json(arg: str):
    """Inline JSON, or the contents of a file when ``arg`` names one."""
    if arg is None:
        return None
    text = arg
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _group(args):
    if args.group is None:
        raise UsageError("--group is required")
    return G.GroupSpec.from_json(load_json(args.group))


def _set(spec, args):
    if args.set is None:
        raise UsageError("--set is required")
    return G.set_from_json(spec, load_json(args.set))


# -- subcommands --------------------------------------------------------------------

def cmd_chordal_check(args, caps):
    spec = _group(args)
    S = _set(spec, args)
    if args.box is not None:
        w = CY.box(spec, args.box)
    else:
        w = CY.ball(spec, args.radius, cap=caps["radius"])
    cert = is_chordal(CY.cayley_graph(spec, S, w))
    out = {"chordal": cert.chordal, "window": w.to_json(spec), "certificate": cert.to_json()}
    if not cert.chordal:
        out["cycle_elements"] = [G.element_to_json(spec, w.elements[i]) for i in cert.cycle]
        summary = f"not chordal: chordless cycle of length {len(cert.cycle)}"
    else:
        summary = f"chordal on a window of {len(w)} elements"
    return (EXIT_OK if cert.chordal else EXIT_NEGATIVE), out, summary


def cmd_extend(args, caps):
    if args.data is None:
        raise UsageError("--data is required")
    data = E.PDFunctionData.from_json(load_json(args.data))
    targets = [G.element_from_json(data.spec, t) for t in (load_json(args.targets) or [])]
    Ns = _int_list(args.folner_sizes)
    try:
        rep = E.extension_report(data, [args.radius], Ns, test_set=targets, seed=args.seed,
                                 tol=args.tol, cap=caps["cliques"], radius_cap=caps["radius"])
    except NotChordal as exc:
        out = {"ok": False, "reason": "not_chordal", "certificate": exc.certificate.to_json(),
               "cycle_elements": [G.element_to_json(data.spec, x) for x in exc.elements]}
        return EXIT_NEGATIVE, out, "window Cayley graph is not chordal"
    except CliqueNotPSD as exc:
        out = {"ok": False, "reason": "clique_not_psd", "min_eig": exc.min_eig,
               "clique_elements": [G.element_to_json(data.spec, x) for x in exc.elements]}
        return EXIT_NEGATIVE, out, "data is not partially positive definite"
    out = {"ok": True, **rep.to_json()}
    eigs = ", ".join(f"{v:.3e}" for v in rep.min_eigs(args.radius))
    return EXIT_OK, out, f"extended; Gram min eigenvalues over N={Ns}: {eigs}"


def cmd_certify(args, caps):
    if args.which == "z2":
        cert = E.certify_z2_counterexample(tol=args.tol, cap=caps["cliques"])
        summary = f"z2: forced Phi(2,1) contradicts phi(2,1) by {cert.contradiction:.6f}"
    else:
        if args.unitaries is not None:
            pair = load_json(args.unitaries)
            if not isinstance(pair, list) or len(pair) != 2:
                raise UsageError("--unitaries must be a JSON list of two matrices")
            U1, U2 = (matrix_from_json(M) for M in pair)
        else:
            U1, U2 = np.array(PAULI_X, dtype=complex), np.array(PAULI_Z, dtype=complex)
        cert = E.certify_cross_counterexample(U1, U2, tol=args.tol)
        state = "extendable" if cert.extendable else "not extendable"
        summary = f"cross: forced C11 values differ by {cert.difference:.6f} ({state})"
    if not cert.confirmed:
        return EXIT_NUMERIC, cert.to_json(), "certificate did not confirm"
    return EXIT_OK, cert.to_json(), summary


def cmd_lulu(args, caps):
    spec = G.int_lattice(2)
    if args.set is None:
        raise UsageError("--set is required")
    obj = load_json(args.set)
    if isinstance(obj, list):
        points = [G.element_from_json(spec, p) for p in obj]
    else:
        S = G.set_from_json(spec, obj)
        if isinstance(S, G.Cross):
            points = S.points()
        elif isinstance(S, G.Explicit):
            points = sorted(S.elements)
        else:
            raise UsageError("lulu-cycle needs a finite set: a point list, explicit or cross rule")
    N = "auto" if args.N == "auto" else int(args.N)
    try:
        cyc = CY.lulu_cycle(points, N=N)
    except CY.PolygonHasChord as exc:
        out = {"ok": False, "N": exc.N, "chord": [list(exc.chord[0]), list(exc.chord[1])]}
        return EXIT_NEGATIVE, out, str(exc)
    out = {"ok": True, "N": cyc.N, "directions": [list(v) for v in cyc.directions],
           "cycle": [list(p) for p in cyc.points], "length": len(cyc.points)}
    return EXIT_OK, out, f"chordless cycle of length {len(cyc.points)} at N={cyc.N}"


def cmd_folner(args, caps):
    spec = _group(args)
    Ns = _int_list(args.folner_sizes)
    gens = spec.generators
    if spec.amenable and spec.kind != G.FREE_GROUP:
        rows = [{"N": N, "size": len(CY.folner_set(spec, N)),
                 "ratio": CY.folner_ratio(spec, gens, CY.folner_set(spec, N))} for N in Ns]
        out = {"group": spec.to_json(), "kind": "folner_sets", "rows": rows}
    else:
        # no Folner sets; report ball ratios instead, which stay bounded below
        rows = []
        for r in Ns:
            K = CY.ball(spec, r, cap=caps["radius"]).elements
            rows.append({"radius": r, "size": len(K), "ratio": CY.folner_ratio(spec, gens, K)})
        out = {"group": spec.to_json(), "kind": "balls", "rows": rows}
    ratios = [row["ratio"] for row in rows]
    out["decreasing"] = all(b < a for a, b in zip(ratios, ratios[1:]))
    return EXIT_OK, out, "ratios: " + ", ".join(f"{r:.4f}" for r in ratios)


def cmd_cf(args, caps):
    obj = load_json(args.moments)
    if not isinstance(obj, list) or not obj:
        raise UsageError("--moments must be a nonempty JSON list")
    moments = [complex(*c) if isinstance(c, list) else complex(c) for c in obj]
    try:
        atoms = E.cf_decompose(moments, tol=args.tol)
    except NotPSD as exc:
        return EXIT_NEGATIVE, {"ok": False, "reason": str(exc)}, "moments are not positive definite"
    recon = E.atoms_moments(atoms, len(moments) - 1)
    out = {"ok": True,
           "atoms": [{"weight": w, "frequency": a} for w, a in atoms],
           "residual": float(np.max(np.abs(recon - np.asarray(moments))))}
    return EXIT_OK, out, f"{len(atoms)} atom(s)"


COMMANDS = {
    "chordal-check": cmd_chordal_check,
    "extend": cmd_extend,
    "certify": cmd_certify,
    "lulu-cycle": cmd_lulu,
    "folner": cmd_folner,
    "cf-decompose": cmd_cf,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=E.DEFAULT_TOL,
                        help="numerical tolerance (default %(default)s)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for random tuples in reports (default %(default)s)")
    common.add_argument("--out", help="write JSON here instead of stdout")

    p = _Parser(prog="chordal-extend",
                description="Positive definite extension on Cayley graph windows.",
                epilog=f"Caps: set {CAPS_ENV}='radius=R,cliques=C' "
                       f"(defaults radius={G.DEFAULT_RADIUS_CAP}, cliques={DEFAULT_CLIQUE_CAP}). "
                       "JSON arguments may be inline or a file path.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("chordal-check", parents=[common], help="chordality of a Cayley graph window")
    c.add_argument("--group", help='group JSON, e.g. {"kind":"int_lattice","d":2}')
    c.add_argument("--set", help='symmetric set JSON, e.g. {"rule":"cross","m":1,"n":1}')
    c.add_argument("--radius", type=int, default=2, help="word-length ball radius (default %(default)s)")
    c.add_argument("--box", type=int, help="use the box [-R,R]^d instead of a ball (Z^d only)")

    c = sub.add_parser("extend", parents=[common], help="Folner-averaged extension report")
    c.add_argument("--data", help="PDFunctionData JSON")
    c.add_argument("--radius", type=int, default=1, help="test ball radius (default %(default)s)")
    c.add_argument("--folner-sizes", default="2,4,8", help="comma-separated N (default %(default)s)")
    c.add_argument("--targets", help="JSON list of extra elements to report Phi_F at")

    c = sub.add_parser("certify", parents=[common], help="non-extendability certificates")
    c.add_argument("which", choices=["z2", "cross"])
    c.add_argument("--unitaries", help="JSON [U1, U2] for cross (default: Pauli X and Z)")

    c = sub.add_parser("lulu-cycle", parents=[common], help="chordless polygon cycle in Z^2")
    c.add_argument("--set", help="JSON point list, or an explicit/cross set rule")
    c.add_argument("--N", default="auto", help="steps per direction, or 'auto' (default)")

    c = sub.add_parser("folner", parents=[common], help="Folner ratios")
    c.add_argument("--group", help="group JSON")
    c.add_argument("--folner-sizes", default="2,4,8,16",
                   help="N values, or ball radii for free groups (default %(default)s)")

    c = sub.add_parser("cf-decompose", parents=[common], help="Caratheodory-Fejer decomposition")
    c.add_argument("--moments", help="JSON list c_0..c_m; complex entries as [re, im]")
    return p


def _emit(out, path):
    text = json.dumps(out, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        caps = load_caps()
        code, out, summary = COMMANDS[args.command](args, caps)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (G.RadiusCapExceeded, CliqueCapExceeded, E.RootOffCircle, AssertionError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(out, args.out)
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
