"""Command-line front end.

Exit codes: 0 success, 1 other errors, 2 parity SSR violation, 3 numerical
verification failure, 64 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import io
from .channels import (
    KrausChannel,
    apply_kraus,
    choi_of_channel,
    stinespring_from_kraus,
    verify_axioms,
)
from .entanglement import is_uncorrelated, purify, schmidt
from .entropy import von_neumann_entropy
from .fock import FockOperator, FockState, ModeError, default_modes
from .jordan_wigner import demonstrate_inconsistency
from .nosignal import run_protocol
from .ptrace import ptrace
from .sampling import random_ssr_state
from .ssr import BlockKind, SSRError, classify_operator, is_ssr_pure_state, is_ssr_state, is_ssr_unitary

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SSR = 2
EXIT_VERIFY = 3
EXIT_PARSE = 64


def _fmt(x: float) -> str:
    # round first so tiny negatives print as 0.000000, not -0.000000
    return f"{round(float(x), 6) + 0.0:.6f}"


def _mode_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of mode labels, got {text!r}")


def _emit(art: io.ArtifactFile, output: str | None) -> None:
    if output:
        io.save(art, output)
    else:
        sys.stdout.write(io.dumps(art))


def _load_kind(path: str, *kinds: str) -> io.ArtifactFile:
    art = io.load(path)
    if art.kind not in kinds:
        raise io.ParseError(f"{path}: expected kind {' or '.join(kinds)}, got {art.kind}")
    return art


def _density(art: io.ArtifactFile) -> FockOperator:
    modes = default_modes(art.modes)
    if art.kind == "state":
        return FockOperator(modes, np.outer(art.data, np.conj(art.data)))
    return FockOperator(modes, art.data)


def _matrix_lines(m: np.ndarray) -> list[str]:
    out = []
    for row in m:
        cells = []
        for z in row:
            re = 0.0 if abs(z.real) < 5e-7 else z.real
            im = 0.0 if abs(z.imag) < 5e-7 else z.imag
            cells.append(f"{re:+.6f}" if im == 0 else f"{re:+.6f}{im:+.6f}j")
        out.append("  " + " ".join(cells))
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    art = io.load(args.file)
    modes = default_modes(art.modes)
    if art.kind == "state":
        verdict = is_ssr_pure_state(FockState(modes, art.data), tol=args.tol)
        if not verdict:
            code = EXIT_SSR if "SSR" in verdict.reason else EXIT_VERIFY
            return _fail(code, verdict.reason)
    elif art.kind == "operator":
        verdict = is_ssr_state(FockOperator(modes, art.data), tol=args.tol)
        if not verdict:
            code = EXIT_SSR if "SSR" in verdict.reason else EXIT_VERIFY
            return _fail(code, verdict.reason)
    elif art.kind == "channel":
        try:
            ch = KrausChannel(tuple(art.data))
        except SSRError as exc:
            return _fail(EXIT_SSR, f"parity SSR violated: {exc}")
        excess = np.linalg.eigvalsh(ch.completeness()).max() - 1
        if excess > args.tol:
            return _fail(EXIT_VERIFY, f"sum of E^dag E exceeds the identity by {excess:.3g}")
    else:
        omega, u = art.data
        env = FockState(tuple(range(art.modes + 1, art.modes + art.k + 1)), omega)
        verdict = is_ssr_pure_state(env, tol=args.tol)
        if not verdict:
            return _fail(EXIT_SSR if "SSR" in verdict.reason else EXIT_VERIFY, "environment state: " + verdict.reason)
        op = FockOperator(default_modes(art.modes + art.k), u)
        if classify_operator(op, args.tol).kind is not BlockKind.DIAGONAL:
            return _fail(EXIT_SSR, "parity SSR violated: unitary mixes parity sectors")
        if not is_ssr_unitary(op, args.tol):
            return _fail(EXIT_VERIFY, "global operator is not unitary")
    print(f"ok: valid SSR {art.kind} on {art.modes} modes")
    return EXIT_OK


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def cmd_ptrace(args) -> int:
    art = _load_kind(args.file, "state", "operator")
    rho = _density(art)
    if not args.modes:
        out = art if art.kind == "operator" else io.ArtifactFile(art.modes, "operator", rho.matrix)
        _emit(io.ArtifactFile(out.modes, "operator", out.data, comment=art.comment), args.output)
        return EXIT_OK
    red = ptrace(rho, args.modes)
    kept = ",".join(str(m) for m in red.modes) or "none"
    _emit(io.ArtifactFile(red.n_modes, "operator", red.matrix, comment=f"reduced state on modes {kept}"), args.output)
    return EXIT_OK


def cmd_schmidt(args) -> int:
    art = _load_kind(args.file, "state")
    dec = schmidt(FockState(default_modes(art.modes), art.data), args.partition, tol=args.tol)
    print(f"schmidt_number = {dec.schmidt_number}")
    for i, (p, a, b) in enumerate(zip(dec.coeffs, dec.left, dec.right)):
        pa = "even" if a.parity() == 1 else "odd"
        pb = "even" if b.parity() == 1 else "odd"
        print(f"p[{i}] = {_fmt(p)}  left={pa} right={pb}")
    ent = -sum(p * np.log2(p) for p in dec.coeffs if p > 0)
    print(f"entanglement_entropy = {_fmt(ent + 0.0)}")
    return EXIT_OK


def cmd_purify(args) -> int:
    art = _load_kind(args.file, "operator")
    omega = purify(_density(art), tol=args.tol)
    _emit(
        io.ArtifactFile(omega.n_modes, "state", omega.amps, comment=f"purification; environment is modes {art.modes + 1}..{omega.n_modes}"),
        args.output,
    )
    return EXIT_OK


def cmd_entropy(args) -> int:
    art = _load_kind(args.file, "state", "operator")
    print(f"entropy = {_fmt(von_neumann_entropy(_density(art), tol=args.tol))}")
    return EXIT_OK


def cmd_uncorrelated(args) -> int:
    art = _load_kind(args.file, "operator")
    rho = _density(art)
    trials = None if args.spanning else args.trials
    for definition in ("i", "ii", "iii"):
        v = is_uncorrelated(rho, args.partition, definition, trials=trials, seed=args.seed, tol=args.tol)
        print(f"definition {definition}: {'uncorrelated' if v else 'correlated'}  deviation = {_fmt(v.witness)}")
    return EXIT_OK


def _channel(path: str) -> KrausChannel:
    art = _load_kind(path, "channel")
    return KrausChannel(tuple(art.data))


def cmd_channel(args) -> int:
    ch = _channel(args.file)
    if args.action == "apply":
        if not args.state:
            raise io.ParseError("channel apply needs --state")
        st = _load_kind(args.state, "state", "operator")
        if st.modes != ch.n:
            raise ModeError(f"state has {st.modes} modes, channel acts on {ch.n}")
        out = apply_kraus(ch, _density(st))
        _emit(io.ArtifactFile(ch.n, "operator", out.matrix), args.output)
    elif args.action == "choi":
        sigma = choi_of_channel(ch)
        _emit(
            io.ArtifactFile(2 * ch.n, "operator", sigma.sigma, comment=f"Choi state, unit-norm alpha; reference modes {ch.n + 1}..{2 * ch.n}"),
            args.output,
        )
    elif args.action == "dilate":
        d = stinespring_from_kraus(ch, tol=args.tol)
        _emit(io.ArtifactFile(d.n, "dilation", [d.omega, d.unitary], k=d.k), args.output)
    else:
        rep = verify_axioms(ch, trials=args.trials, seed=args.seed, tol=args.tol)
        print(f"trace_preserving = {rep.trace_preserving}  deviation = {_fmt(rep.trace_deviation)}")
        print(f"convex_linear = {rep.convex_linear}  deviation = {_fmt(rep.convexity_deviation)}")
        print(f"completely_positive = {rep.completely_positive}  min_choi_eigenvalue = {_fmt(rep.min_choi_eigenvalue)}")
        if not rep.ok:
            for v in rep.violations():
                print(v, file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


def cmd_jw_check(args) -> int:
    art = _load_kind(args.file, "operator")
    rho = _density(art)
    verdict = is_ssr_state(rho, tol=args.tol)
    if not verdict:
        return _fail(EXIT_SSR if "SSR" in verdict.reason else EXIT_VERIFY, verdict.reason)
    rep = demonstrate_inconsistency(rho, args.trace)
    traced = ",".join(str(m) for m in rep.traced)
    for name, route, label in (
        ("route1", rep.route1, "fermionic partial trace, then Jordan-Wigner"),
        ("route2", rep.route2, "Jordan-Wigner, then qubit partial trace"),
    ):
        print(f"[{name}] {label} (traced modes {traced})")
        print("matrix =")
        print("\n".join(_matrix_lines(route.matrix)))
        print("spectrum = " + ", ".join(_fmt(x + 0.0) for x in route.spectrum))
        print(f"entropy = {_fmt(route.entropy)}")
    print(f"max_entry_difference = {_fmt(rep.max_difference)}")
    print("consistent" if rep.max_difference < args.tol else "inconsistent")
    return EXIT_OK


def cmd_nosignal(args) -> int:
    ua_art = _load_kind(args.ua, "operator")
    na = ua_art.modes
    ub_art = None if args.ub.lower() == "none" else _load_kind(args.ub, "operator")
    nb = ub_art.modes if ub_art is not None else args.b_modes
    modes_a = default_modes(na)
    modes_b = tuple(range(na + 1, na + nb + 1))
    all_modes = default_modes(na + nb)
    if args.state is None:
        rho = FockOperator(all_modes, np.diag(np.eye(1 << (na + nb))[0]).astype(complex))
    elif args.state == "random":
        rho = random_ssr_state(na + nb, np.random.default_rng(args.seed))
    else:
        st = _load_kind(args.state, "state", "operator")
        if st.modes != na + nb:
            raise ModeError(f"state has {st.modes} modes, protocol uses {na + nb}")
        rho = _density(st)
    verdict = is_ssr_state(rho, tol=args.tol)
    if not verdict:
        return _fail(EXIT_SSR if "SSR" in verdict.reason else EXIT_VERIFY, verdict.reason)
    ua = FockOperator(modes_a, ua_art.data)
    ub = FockOperator(modes_b, ub_art.data) if ub_art is not None else None
    res = run_protocol(rho, ua, ub)
    for name, op in (("U_A", ua), ("U_B", ub)):
        kind = "absent" if op is None else classify_operator(op, args.tol).kind.value
        print(f"{name}: {kind}")
    print("qubit =")
    print("\n".join(_matrix_lines(res.qubit)))
    print(f"signal_strength = {_fmt(res.signal_strength)}")
    drift = float(np.abs(res.fermionic.matrix - rho.matrix).max())
    print(f"fermionic_state_change = {_fmt(drift)}")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    for name in io.list_fixtures():
        print(f"{io.FIXTURE_PREFIX}{name}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fermiqit",
        description="Fermionic-mode quantum information under the parity superselection rule. "
        "Input files may be given as fixture:<name> to use a bundled fixture.",
    )
    p.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance (default 1e-10)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("validate", cmd_validate, "check a file against the parity SSR")
    sp.add_argument("file")

    sp = add("ptrace", cmd_ptrace, "fermionic partial trace")
    sp.add_argument("file")
    sp.add_argument("--modes", type=_mode_list, default=[], help="comma-separated modes to trace out")
    sp.add_argument("-o", "--output")

    sp = add("schmidt", cmd_schmidt, "Schmidt decomposition of a pure state")
    sp.add_argument("file")
    sp.add_argument("--partition", type=_mode_list, required=True, help="modes of subsystem A")

    sp = add("purify", cmd_purify, "even-parity purification of a density operator")
    sp.add_argument("file")
    sp.add_argument("-o", "--output")

    sp = add("entropy", cmd_entropy, "von Neumann entropy in bits")
    sp.add_argument("file")

    sp = add("uncorrelated", cmd_uncorrelated, "test the three uncorrelatedness definitions")
    sp.add_argument("file")
    sp.add_argument("--partition", type=_mode_list, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--spanning", action="store_true", help="iterate a Hermitian basis instead of sampling")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("channel", cmd_channel, "channel operations")
    sp.add_argument("action", choices=["apply", "choi", "dilate", "verify"])
    sp.add_argument("file", help="channel file")
    sp.add_argument("--state", help="input state for apply")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")

    sp = add("jw-check", cmd_jw_check, "compare fermionic and Jordan-Wigner partial traces")
    sp.add_argument("file")
    sp.add_argument("--trace", type=_mode_list, required=True, help="modes to trace out")

    sp = add("nosignal", cmd_nosignal, "run the signaling protocol")
    sp.add_argument("--ua", required=True, help="Alice's unitary (operator file)")
    sp.add_argument("--ub", required=True, help="Bob's unitary (operator file) or 'none'")
    sp.add_argument("--b-modes", type=int, default=1, help="Bob's mode count when --ub none")
    sp.add_argument("--state", help="initial state file, or 'random' (default: vacuum)")
    sp.add_argument("--seed", type=int, default=0)

    add("fixtures", cmd_fixtures, "list bundled fixtures")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except io.ParseError as exc:
        return _fail(EXIT_PARSE, f"parse error: {exc}")
    except SSRError as exc:
        msg = str(exc)
        return _fail(EXIT_SSR, msg if msg.startswith("parity SSR violated") else f"parity SSR violated: {msg}")
    except (ModeError, ValueError) as exc:
        return _fail(EXIT_ERROR, f"error: {exc}")


if __name__ == "__main__":
    sys.exit(main())
