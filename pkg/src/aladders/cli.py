"""Command-line front end.

Subcommands map one-to-one onto the library: zero-modes, chain, gram, lower,
uncertainty, resolution, density, selftest.  Output is deterministic: the
same argv and config file always produce byte-identical bytes.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 convergence error,
4 ill-conditioned linear system, 5 selftest failure.
"""

from __future__ import annotations

import argparse
import cmath
import contextlib
import json
import math
import sys

import numpy as np

from . import chains, fock, position, principal, resolution, zero_modes
from .errors import ConvergenceError, DomainError, IllConditionedError
from .fock import FockVector
from .operators import ModeParams, apply_commutator, apply_lowering, apply_raising

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_ILL_CONDITIONED = 4
EXIT_SELFTEST = 5

_EPILOG = """\
complex values are written as 're,im' or 'mag@phase_rad' (a bare real works too).

exit codes:
  0  success
  1  usage error (unknown flag, missing argument, bad literal)
  2  domain error (inputs outside an operation's mathematical domain)
  3  convergence error (quadrature drifted on node doubling)
  4  ill-conditioned Gram system
  5  selftest failure

environment:
  ALADDERS_THREADS   worker cap for grid evaluation (default 1)

a config file (--config PATH) holds 'key = value' lines mirroring the long
flags of the chosen subcommand; explicit flags win over the file.
"""


class _UsageError(Exception):
    def __init__(self, message: str = "", reported: bool = False):
        super().__init__(message)
        self.reported = reported


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message, reported=True)


def parse_complex(text: str) -> complex:
    """Parse 're,im', 'mag@phase_rad', or a bare real."""
    text = text.strip()
    try:
        if "@" in text:
            mag, phase = text.split("@", 1)
            return cmath.rect(float(mag), float(phase))
        if "," in text:
            re, im = text.split(",", 1)
            return complex(float(re), float(im))
        return complex(float(text), 0.0)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"cannot parse complex value {text!r}; use 're,im' or 'mag@phase_rad'"
        )


# per-destination converters used when a config file supplies the value
_CONVERTERS = {
    "n": int, "chain": int, "level": int, "nu": int, "nu_max": int,
    "row": int, "nodes": int, "nx": int, "ny": int,
    "alpha": parse_complex, "beta": parse_complex,
    "xmin": float, "xmax": float, "ymin": float, "ymax": float,
    "drop_tol": float, "format": str, "out": str, "method": str,
}


def _load_config(path: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise _UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, value = line.split("=", 1)
                pairs[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise _UsageError(f"cannot read config {path}: {exc}")
    return pairs


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not getattr(args, "config", None):
        return
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    for key, raw in _load_config(args.config).items():
        if key in ("config",):
            continue
        if key not in _CONVERTERS or not hasattr(args, key):
            raise _UsageError(f"config key {key!r} does not match a flag")
        if key in explicit:
            continue
        try:
            setattr(args, key, _CONVERTERS[key](raw))
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise _UsageError(f"config key {key!r}: {exc}")


@contextlib.contextmanager
def _out_stream(path: str | None, binary: bool = False):
    if path is None or path == "-":
        yield sys.stdout.buffer if binary else sys.stdout
    else:
        mode = "wb" if binary else "w"
        with open(path, mode) as fh:
            yield fh


def _dump_json(obj, fh) -> None:
    fh.write(json.dumps(obj, sort_keys=True, indent=2))
    fh.write("\n")


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


# flags a subcommand cannot run without; enforced only after the config file
# has been merged, so either source may supply them
_REQUIRED = {
    "zero-modes": ("n", "alpha", "beta"),
    "chain": ("chain", "level", "alpha", "beta"),
    "gram": ("row", "alpha", "beta"),
    "lower": ("chain", "level", "alpha", "beta"),
    "uncertainty": ("nu_max", "alpha", "beta"),
    "resolution": ("nu",),
    "density": ("level", "alpha", "beta"),
    "selftest": (),
}


def _check_required(args: argparse.Namespace) -> None:
    missing = [name for name in _REQUIRED[args.command]
               if getattr(args, name, None) is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise _UsageError(f"{args.command}: missing required {flags}")


def _add_params(sub, *, alpha=True):
    if alpha:
        sub.add_argument("--alpha", type=parse_complex, default=None,
                         help="mixing parameter alpha")
    sub.add_argument("--beta", type=parse_complex, default=None,
                     help="mixing parameter beta (nonzero)")


def _add_common(sub):
    sub.add_argument("--out", default=None, help="output path (default stdout)")
    sub.add_argument("--config", default=None, help="key=value defaults file")
    sub.add_argument("--drop-tol", dest="drop_tol", type=float, default=None,
                     help="sparse amplitude drop tolerance (default 1e-14)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="aladders",
        description="Coherent-state chains of the 2:1 anisotropic oscillator.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subs = parser.add_subparsers(dest="command", metavar="COMMAND")

    s = subs.add_parser("zero-modes", help="expansion coefficients of one zero mode")
    s.add_argument("--n", type=int, default=None, help="chain index (level 2n)")
    _add_params(s)
    _add_common(s)

    s = subs.add_parser("chain", help="one chain state as a sparse vector")
    s.add_argument("--chain", type=int, default=None, help="even chain index 2n")
    s.add_argument("--level", type=int, default=None, help="raising steps nu")
    s.add_argument("--method", choices=("closed", "bruteforce"), default="closed")
    _add_params(s)
    _add_common(s)

    s = subs.add_parser("gram", help="overlap matrix of the chains meeting a level")
    s.add_argument("--row", type=int, default=None, help="energy level of the row")
    _add_params(s)
    _add_common(s)

    s = subs.add_parser("lower", help="expand a lowered chain state over the row below")
    s.add_argument("--chain", type=int, default=None)
    s.add_argument("--level", type=int, default=None)
    _add_params(s)
    _add_common(s)

    s = subs.add_parser("uncertainty", help="Heisenberg products along the principal chain")
    s.add_argument("--nu-max", dest="nu_max", type=int, default=None)
    _add_params(s)
    _add_common(s)

    s = subs.add_parser("resolution", help="level-subspace identity via radial quadrature")
    s.add_argument("--nu", type=int, default=None)
    s.add_argument("--nodes", type=int, default=64, help="radial nodes per integral")
    _add_common(s)

    s = subs.add_parser("density", help="position-space density grid of a chain state")
    s.add_argument("--chain", type=int, default=0)
    s.add_argument("--level", type=int, default=None)
    _add_params(s)
    s.add_argument("--xmin", type=float, default=-8.0)
    s.add_argument("--xmax", type=float, default=8.0)
    s.add_argument("--ymin", type=float, default=-16.0)
    s.add_argument("--ymax", type=float, default=16.0)
    s.add_argument("--nx", type=int, default=600)
    s.add_argument("--ny", type=int, default=600)
    s.add_argument("--format", choices=("csv", "bin"), default="csv")
    _add_common(s)

    s = subs.add_parser("selftest", help="run the bundled oracle-equivalence checks")
    s.add_argument("--config", default=None, help=argparse.SUPPRESS)

    return parser


def _cmd_zero_modes(args) -> int:
    coeffs = zero_modes.ZeroModeCoeffs.build(args.n, ModeParams(args.alpha, args.beta))
    payload = {
        "n": coeffs.n,
        "gamma": [_pair(g) for g in coeffs.gamma],
        "norm_sq": coeffs.norm_sq,
    }
    with _out_stream(args.out) as fh:
        _dump_json(payload, fh)
    return EXIT_OK


def _cmd_chain(args) -> int:
    label = chains.ChainLabel(args.chain, args.level)
    p = ModeParams(args.alpha, args.beta)
    build = (
        chains.chain_state_closed if args.method == "closed"
        else chains.chain_state_bruteforce
    )
    state = build(label, p)
    payload = {
        "chain": label.chain,
        "level": label.level,
        "norm_sq": state.norm_sq,
        "log_norm_sq": state.log_norm_sq,
        "vector": state.vector.to_records(),
    }
    with _out_stream(args.out) as fh:
        _dump_json(payload, fh)
    return EXIT_OK


def _cmd_gram(args) -> int:
    p = ModeParams(args.alpha, args.beta)
    mat = chains.gram_matrix(args.row, p)
    payload = {
        "row": args.row,
        "labels": [[lab.chain, lab.level] for lab in chains.row_labels(args.row)],
        "condition": float(np.linalg.cond(mat)),
        "matrix": [[_pair(complex(z)) for z in line] for line in mat],
    }
    with _out_stream(args.out) as fh:
        _dump_json(payload, fh)
    return EXIT_OK


def _cmd_lower(args) -> int:
    label = chains.ChainLabel(args.chain, args.level)
    p = ModeParams(args.alpha, args.beta)
    terms = chains.lowering_decomposition(label, p)
    target = apply_lowering(p, chains.chain_state_closed(label, p).vector)
    recon = FockVector()
    for lab, coeff in terms:
        recon = recon + coeff * chains.chain_state_closed(lab, p).vector
    tnorm = target.norm()
    residual = (target - recon).norm() / tnorm if tnorm > 0 else 0.0
    payload = {
        "chain": label.chain,
        "level": label.level,
        "residual": residual,
        "terms": [
            {"chain": lab.chain, "level": lab.level, "re": c.real, "im": c.imag}
            for lab, c in terms
        ],
    }
    with _out_stream(args.out) as fh:
        _dump_json(payload, fh)
    return EXIT_OK


def _cmd_uncertainty(args) -> int:
    if args.nu_max < 0:
        raise DomainError(f"--nu-max must be >= 0, got {args.nu_max}")
    p = ModeParams(args.alpha, args.beta)
    with _out_stream(args.out) as fh:
        fh.write("nu,product_a,product_b\n")
        for nu in range(args.nu_max + 1):
            rep = principal.uncertainty_products(nu, p)
            fh.write(f"{rep.nu},{rep.product_a!r},{rep.product_b!r}\n")
    return EXIT_OK


def _cmd_resolution(args) -> int:
    quad = resolution.QuadratureSpec(args.nodes, args.nodes)
    mat = resolution.subspace_identity_matrix(args.nu, quad)
    diag = [float(z.real) for z in np.diag(mat)]
    payload = {
        "nu": args.nu,
        "nodes": [quad.radial_nodes_alpha, quad.radial_nodes_beta],
        "diagonal": diag,
        "max_deviation": max(abs(d - 1.0) for d in diag),
    }
    with _out_stream(args.out) as fh:
        _dump_json(payload, fh)
    return EXIT_OK


def _cmd_density(args) -> int:
    p = ModeParams(args.alpha, args.beta)
    if args.chain == 0:
        vec = principal.principal_state(args.level, p).to_fock()
    else:
        vec = chains.chain_state_closed(chains.ChainLabel(args.chain, args.level), p).vector
    geom = position.Grid2D(args.xmin, args.xmax, args.ymin, args.ymax, args.nx, args.ny)
    grid = position.density_grid(vec, geom)
    if args.format == "bin":
        with _out_stream(args.out, binary=True) as fh:
            position.write_grid_binary(grid, fh)
    else:
        with _out_stream(args.out) as fh:
            position.write_grid_csv(grid, fh)
    return EXIT_OK


def _random_state(rng, entries=5, n_max=10, m_max=10) -> FockVector:
    amps = {}
    for _ in range(entries):
        key = (int(rng.integers(0, n_max + 1)), int(rng.integers(0, m_max + 1)))
        amps[key] = complex(rng.standard_normal(), rng.standard_normal())
    return FockVector(amps).normalized()


def _random_params(rng) -> ModeParams:
    def draw():
        return cmath.rect(float(rng.uniform(0.4, 1.7)), float(rng.uniform(0, 2 * math.pi)))

    return ModeParams(draw(), draw())


def _selftest_checks():
    from .fock import (
        a_minus, a_plus, apply_hamiltonian, b_minus, b_plus, inner,
    )

    rng = np.random.default_rng(20240811)
    params = [_random_params(rng) for _ in range(3)]

    def check_ladder_commutators():
        worst = 0.0
        for _ in range(20):
            v = _random_state(rng)
            for minus, plus in ((a_minus, a_plus), (b_minus, b_plus)):
                diff = minus(plus(v)) - plus(minus(v)) - v
                worst = max(worst, diff.max_abs())
            cross = a_minus(b_plus(v)) - b_plus(a_minus(v))
            worst = max(worst, cross.max_abs())
        return worst <= 1e-12, f"worst deviation {worst:.2e}"

    def check_adjointness():
        worst = 0.0
        for p in params:
            for _ in range(8):
                u, v = _random_state(rng), _random_state(rng)
                lhs = inner(apply_raising(p, u), v)
                rhs = inner(u, apply_lowering(p, v))
                worst = max(worst, abs(lhs - rhs))
        return worst <= 1e-12, f"worst deviation {worst:.2e}"

    def check_level_shift():
        worst = 0.0
        for p in params:
            for _ in range(6):
                v = _random_state(rng)
                for op, sign in ((apply_raising, 1.0), (apply_lowering, -1.0)):
                    ov = op(p, v)
                    diff = apply_hamiltonian(ov) - op(p, apply_hamiltonian(v)) - sign * ov
                    worst = max(worst, diff.max_abs())
        return worst <= 1e-11, f"worst deviation {worst:.2e}"

    def check_commutator_closed_form():
        worst = 0.0
        for p in params:
            for _ in range(6):
                v = _random_state(rng)
                lit = apply_commutator(p, v)
                wanted = FockVector(
                    (
                        (k, (abs(p.alpha) ** 2 + abs(p.beta) ** 2 * (k[1] - k[0])) * a)
                        for k, a in v.items()
                    )
                )
                worst = max(worst, (lit - wanted).max_abs())
        return worst <= 1e-12, f"worst deviation {worst:.2e}"

    def check_zero_mode_annihilation():
        worst = 0.0
        for p in params:
            for n in range(13):
                z = zero_modes.zero_mode_state(n, p)
                worst = max(worst, apply_lowering(p, z).norm())
        return worst <= 1e-10, f"worst residual {worst:.2e}"

    def check_zero_mode_recursion():
        worst = 0.0
        for p in params:
            for n in (3, 10, 25):
                rec = zero_modes.zero_mode_coeffs_recursive(n, p)
                for j, want in enumerate(rec):
                    got = zero_modes.zero_mode_coeff(n, j, p)
                    worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
        return worst <= 1e-12, f"worst relative error {worst:.2e}"

    def check_null_space():
        for p in params[:2]:
            for nu in range(1, 11):
                want = 1 if nu % 2 == 0 else 0
                got = zero_modes.level_null_space_dim(nu, p)
                if got != want:
                    return False, f"level {nu}: dim {got} != {want}"
        return True, "levels 1..10"

    def check_chain_closed_vs_bruteforce():
        worst = 0.0
        for p in params[:2]:
            for two_n in (0, 2, 4, 6):
                for nu in range(7):
                    label = chains.ChainLabel(two_n, nu)
                    closed = chains.chain_state_closed(label, p)
                    brute = chains.chain_state_bruteforce(label, p)
                    diff = (closed.vector - brute.vector).max_abs()
                    worst = max(worst, diff / brute.vector.max_abs())
                    rel = abs(closed.log_norm_sq - brute.log_norm_sq)
                    worst = max(worst, rel)
        return worst <= 1e-9, f"worst relative error {worst:.2e}"

    def check_principal_norms():
        worst = 0.0
        for p in params:
            for nu in range(21):
                direct = sum(
                    abs(p.alpha) ** (2 * (nu - k)) * abs(p.beta) ** (2 * k)
                    * principal.modified_binomial(nu, k, 2)
                    for k in range(nu // 2 + 1)
                )
                prod = principal.principal_norm_sq(nu, p)
                worst = max(worst, abs(prod - direct) / direct)
            vec = FockVector.basis(0, 0)
            log_norm = 0.0
            for nu in range(1, 16):
                vec = apply_raising(p, vec)
                step = vec.norm()
                vec = (1.0 / step) * vec
                log_norm += 2.0 * math.log(step)
                want = math.lgamma(nu + 1) + principal.principal_log_norm_sq(nu, p)
                worst = max(worst, abs(log_norm - want))
        return worst <= 1e-10, f"worst relative error {worst:.2e}"

    def check_slow_mode_lowering():
        worst = 0.0
        for p in params:
            for nu in (1, 2, 7, 15):
                worst = max(worst, principal.b_lowering_residual(nu, p))
        return worst <= 1e-10, f"worst residual {worst:.2e}"

    def check_uncertainties():
        worst = 0.0
        for p in params:
            for nu in range(16):
                rep = principal.uncertainty_products(nu, p)
                da = principal.uncertainty_direct(nu, p, "a")
                db = principal.uncertainty_direct(nu, p, "b")
                worst = max(worst, abs(rep.product_a - da) / da)
                worst = max(worst, abs(rep.product_b - db) / db)
        return worst <= 1e-9, f"worst relative error {worst:.2e}"

    def check_orthogonality():
        from .fock import inner as _inner

        worst = 0.0
        for p in params:
            for nu in range(1, 9):
                z = zero_modes.zero_mode_state(nu, p)
                ps = principal.principal_state(2 * nu, p).to_fock()
                worst = max(worst, abs(_inner(z, ps)))
        return worst <= 1e-10, f"worst overlap {worst:.2e}"

    def check_lowering_decomposition():
        worst = 0.0
        for p in params[:2]:
            for two_n in (0, 2, 4):
                for nu in range(1, 9 - two_n):
                    label = chains.ChainLabel(two_n, nu)
                    terms = chains.lowering_decomposition(label, p)
                    target = apply_lowering(
                        p, chains.chain_state_closed(label, p).vector
                    )
                    recon = FockVector()
                    for lab, c in terms:
                        recon = recon + c * chains.chain_state_closed(lab, p).vector
                    worst = max(worst, (target - recon).norm() / target.norm())
        return worst <= 1e-8, f"worst relative residual {worst:.2e}"

    def check_resolution():
        worst = 0.0
        for nu in range(5):
            mat = resolution.subspace_identity_matrix(nu)
            worst = max(
                worst, float(np.max(np.abs(mat - np.eye(nu // 2 + 1, dtype=complex))))
            )
        worst = max(worst, resolution.fullspace_identity_check(4))
        return worst <= 1e-8, f"worst deviation {worst:.2e}"

    def check_density_mass():
        geom = position.Grid2D(-6.0, 6.0, -6.0, 6.0, 201, 201)
        grid = position.density_grid(FockVector.basis(0, 0), geom)
        err = abs(grid.integral() - 1.0)
        return err <= 1e-6, f"vacuum mass error {err:.2e}"

    return [
        ("ladder commutators", check_ladder_commutators),
        ("raising/lowering adjointness", check_adjointness),
        ("level shift by one", check_level_shift),
        ("commutator closed form", check_commutator_closed_form),
        ("zero-mode annihilation", check_zero_mode_annihilation),
        ("zero-mode coefficients closed vs recursion", check_zero_mode_recursion),
        ("kernel dimension per level", check_null_space),
        ("chain closed form vs operator construction", check_chain_closed_vs_bruteforce),
        ("principal norms product vs sum vs operator", check_principal_norms),
        ("slow-mode lowering step", check_slow_mode_lowering),
        ("uncertainty closed forms vs ladder algebra", check_uncertainties),
        ("zero-mode/principal orthogonality", check_orthogonality),
        ("lowering decomposition residual", check_lowering_decomposition),
        ("level identity by quadrature", check_resolution),
        ("vacuum density mass", check_density_mass),
    ]


def _cmd_selftest(args) -> int:
    passed = failed = 0
    for name, fn in _selftest_checks():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        if ok:
            passed += 1
            print(f"ok   {name} ({detail})")
        else:
            failed += 1
            print(f"FAIL {name} ({detail})")
    print(f"selftest: {passed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_SELFTEST


_HANDLERS = {
    "zero-modes": _cmd_zero_modes,
    "chain": _cmd_chain,
    "gram": _cmd_gram,
    "lower": _cmd_lower,
    "uncertainty": _cmd_uncertainty,
    "resolution": _cmd_resolution,
    "density": _cmd_density,
    "selftest": _cmd_selftest,
}


def run(argv: list[str]) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        _apply_config(args, argv)
        _check_required(args)
        if getattr(args, "drop_tol", None) is not None:
            fock.set_drop_tol(args.drop_tol)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        if not exc.reported:
            print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except IllConditionedError as exc:
        print(
            f"ill-conditioned system (condition {exc.condition:.3e}): {exc}",
            file=sys.stderr,
        )
        return EXIT_ILL_CONDITIONED


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
