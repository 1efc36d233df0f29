"""Suite orchestration, machine-readable reports, and the circle Toeplitz demo.

A report is a JSON document {version, config, checks, summary}.  Each check
record carries a stable id, a coverage anchor naming the verified piece of
theory (or "plumbing" for infrastructure checks), parameters, a metric value
and its tolerance, and a pass flag.  Runs are deterministic for a fixed
config and seed; no timestamps enter the report body.
"""

import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import core, deform, projectors, quantize, symbols
from .core import ExteriorBasis, make_standard_space
from .quantize import HermiteBasisSpec, kernel_analysis

#: Coverage anchors: one per in-scope piece of theory, plus "plumbing".
IN_SCOPE_ANCHORS = [
    "symplectic-hermitian-structures",
    "twisted-convolution-fourier",
    "polynomial-weyl-algebra",
    "weyl-pseudodifferential-quantization",
    "symbol-algebra-scaling-family",
    "bargmann-fock-representation",
    "clifford-multiplication-grading",
    "clifford-symbol-square",
    "kernel-index-quantized-clifford",
    "stereographic-bott-projector",
    "boundary-idempotent-template",
    "mehler-deformation-family",
    "toeplitz-index-circle",
]

SUITE_NAMES = ["core", "symbols", "quantize", "projectors", "deform", "toeplitz"]

DEFAULT_TOLERANCES = {
    "exact": 0.0,
    "tight": 1e-12,
    "interior": 1e-10,
    "spectral": 1e-8,
    "quadrature": 1e-6,
    "chern": 1e-3,
}


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple = ("all",)
    n_values: tuple = (1, 2)
    lambda_values: tuple = (0.25, 0.5, 1.0)
    tau_values: tuple = (1.0, 2.0, 4.0)
    N_max: int = 16
    grid_size: int = 128
    toeplitz_N: int = 256
    tolerances: tuple = tuple(sorted(DEFAULT_TOLERANCES.items()))
    report_path: str = "report/report.json"
    seed: int = 0
    jobs: int = 1
    figures: bool = True

    def tol(self, name):
        return dict(self.tolerances)[name]

    def active_suites(self):
        if "all" in self.suites:
            return list(SUITE_NAMES)
        bad = [s for s in self.suites if s not in SUITE_NAMES]
        if bad:
            raise ConfigError(f"unknown suites: {bad}")
        return [s for s in SUITE_NAMES if s in self.suites]

    def to_json(self):
        d = asdict(self)
        d["tolerances"] = dict(self.tolerances)
        return d

    @staticmethod
    def from_json(data):
        data = dict(data)
        if "tolerances" in data:
            tols = dict(DEFAULT_TOLERANCES)
            tols.update(data["tolerances"])
            data["tolerances"] = tuple(sorted(tols.items()))
        for key in ("suites", "n_values", "lambda_values", "tau_values"):
            if key in data:
                data[key] = tuple(data[key])
        bad = set(data) - set(SuiteConfig.__dataclass_fields__)
        if bad:
            raise ConfigError(f"unknown config keys: {sorted(bad)}")
        cfg = SuiteConfig(**data)
        if any(t < 0 for t in dict(cfg.tolerances).values()):
            raise ConfigError("tolerances must be nonnegative")
        return cfg


class ConfigError(ValueError):
    pass


def _jsonable(value):
    """Coerce params to plain JSON types (numpy scalars, complex, tuples)."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if value is None or isinstance(value, str):
        return value
    return str(value)


def _record(check_id, anchor, params, metric, tol):
    metric = float(metric)
    return {
        "id": check_id,
        "anchor": anchor,
        "params": _jsonable(params),
        "metric": metric,
        "tol": float(tol),
        "pass": bool(metric <= tol),
    }


def _record_bool(check_id, anchor, params, ok):
    return {
        "id": check_id,
        "anchor": anchor,
        "params": _jsonable(params),
        "metric": 0.0 if ok else 1.0,
        "tol": 0.0,
        "pass": bool(ok),
    }


# ---------------------------------------------------------------------------
# suite: core


def suite_core(config, rng):
    records = []
    for n in config.n_values:
        space = make_standard_space(n)
        basis = ExteriorBasis(n)
        eye = np.eye(2 * n)
        records.append(
            _record(
                f"core/J-squared/n={n}",
                "symplectic-hermitian-structures",
                {"n": n},
                np.max(np.abs(space.J @ space.J + eye)),
                config.tol("exact"),
            )
        )
        records.append(
            _record(
                f"core/metric-compatibility/n={n}",
                "symplectic-hermitian-structures",
                {"n": n},
                np.max(np.abs(space.g - space.omega @ space.J)),
                config.tol("exact"),
            )
        )
        v = rng.normal(size=2 * n)
        records.append(
            _record_bool(
                f"core/taming/n={n}",
                "symplectic-hermitian-structures",
                {"n": n},
                v @ space.omega @ (space.J @ v) > 0,
            )
        )
        h = core.hermitian_form(space, space.basis_e(1), space.basis_f(1))
        records.append(
            _record(
                f"core/hermitian-form/n={n}",
                "symplectic-hermitian-structures",
                {"n": n},
                abs(h - (-1j)),
                config.tol("tight"),
            )
        )
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        eps = core.eps_matrix(basis, z)
        iota = core.iota_matrix(basis, z)
        records.append(
            _record(
                f"core/eps-iota-adjoint/n={n}",
                "clifford-multiplication-grading",
                {"n": n},
                np.max(np.abs(eps.conj().T - iota)),
                config.tol("tight"),
            )
        )
        records.append(
            _record(
                f"core/eps-squared/n={n}",
                "clifford-multiplication-grading",
                {"n": n},
                np.max(np.abs(eps @ eps)),
                config.tol("tight"),
            )
        )
        c = core.clifford_c(basis, z)
        nz = float(np.vdot(z, z).real)
        records.append(
            _record(
                f"core/clifford-square/n={n}",
                "clifford-multiplication-grading",
                {"n": n},
                np.max(np.abs(c @ c - nz * np.eye(basis.dim))),
                config.tol("tight") * (1 + nz),
            )
        )
        t = float(rng.normal())
        ct = core.clifford_ct(basis, z, t)
        records.append(
            _record(
                f"core/clifford-ct-square/n={n}",
                "clifford-multiplication-grading",
                {"n": n, "t": t},
                np.max(np.abs(ct @ ct - (nz + t * t) * np.eye(basis.dim))),
                config.tol("tight") * (1 + nz + t * t),
            )
        )
        N = core.number_operator(basis)
        records.append(
            _record(
                f"core/number-operator-trace/n={n}",
                "clifford-symbol-square",
                {"n": n},
                abs(np.trace(N)),
                config.tol("exact"),
            )
        )
        U = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]
        LU = core.exterior_power_unitary(basis, U)
        records.append(
            _record(
                f"core/exterior-unitary/n={n}",
                "clifford-multiplication-grading",
                {"n": n},
                np.max(np.abs(LU.conj().T @ LU - np.eye(basis.dim))),
                config.tol("interior"),
            )
        )
        records.append(
            _record(
                f"core/clifford-intertwine/n={n}",
                "kernel-index-quantized-clifford",
                {"n": n},
                np.max(np.abs(core.clifford_c(basis, U @ z) - LU @ c @ LU.conj().T)),
                config.tol("interior"),
            )
        )
        records.append(
            _record(
                f"core/number-commutes-unitary/n={n}",
                "clifford-symbol-square",
                {"n": n},
                np.max(np.abs(N @ LU - LU @ N)),
                config.tol("interior"),
            )
        )
    return records


# ---------------------------------------------------------------------------
# suite: symbols


def suite_symbols(config, rng):
    from fractions import Fraction

    records = []
    for lam in (Fraction(1, 2), 1, 2):
        for n in (1, 2, 3):
            s = symbols.vacuum_symbol(lam, n)
            ok = symbols.moyal_gauss(s, s, lam) == s
            records.append(
                _record_bool(
                    f"symbols/vacuum-idempotent/lam={lam}/n={n}",
                    "symbol-algebra-scaling-family",
                    {"lam": str(lam), "n": n},
                    ok,
                )
            )
    # associativity over random rationals
    worst_assoc = 0
    for _ in range(20):
        nums = rng.integers(0, 8, size=4)
        dens = rng.integers(1, 8, size=4)
        al, be, ga, lam = [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]
        f = symbols.GaussianSymbol(1, al, 1)
        g = symbols.GaussianSymbol(1, be, 1)
        h = symbols.GaussianSymbol(1, ga, 1)
        lhs = symbols.moyal_gauss(symbols.moyal_gauss(f, g, lam), h, lam)
        rhs = symbols.moyal_gauss(f, symbols.moyal_gauss(g, h, lam), lam)
        worst_assoc = max(worst_assoc, 0 if lhs == rhs else 1)
    records.append(
        _record(
            "symbols/gauss-associativity",
            "polynomial-weyl-algebra",
            {"samples": 20},
            worst_assoc,
            config.tol("exact"),
        )
    )
    # Mehler semigroup over a (tau, lam) grid
    worst = 0.0
    for lam in (0.0, 0.3, 0.7, 1.0, 1.5):
        for t1 in (0.5, 1.0, 1.5, 2.0, 3.0):
            t2 = 0.8
            a = symbols.mehler(t1, lam, 1)
            b = symbols.mehler(t2, lam, 1)
            ab = symbols.moyal_gauss(a, b, lam)
            cc = symbols.mehler(t1 + t2, lam, 1)
            worst = max(
                worst,
                abs(complex(ab.coef) - complex(cc.coef)),
                abs(float(ab.alpha) - float(cc.alpha)),
            )
    records.append(
        _record(
            "symbols/mehler-semigroup",
            "mehler-deformation-family",
            {"grid": "5x5"},
            worst,
            1e-14,
        )
    )
    # coordinate commutators
    worst = 0.0
    n = 2
    for j in (1, 2):
        for k in (1, 2):
            ej = symbols.WeylPoly.coordinate(n, j, "e")
            fk = symbols.WeylPoly.coordinate(n, k, "f")
            comm = symbols.moyal_poly(ej, fk, 0.7) - symbols.moyal_poly(fk, ej, 0.7)
            expect = symbols.WeylPoly.constant(n, 0.7j if j == k else 0.0)
            worst = max(worst, comm.max_abs_diff(expect))
            comm_ee = symbols.moyal_poly(ej, ej, 0.7) - symbols.moyal_poly(ej, ej, 0.7)
            worst = max(worst, comm_ee.max_abs_diff(symbols.WeylPoly.constant(n, 0.0)))
    records.append(
        _record(
            "symbols/coordinate-commutators",
            "polynomial-weyl-algebra",
            {"lam": 0.7},
            worst,
            config.tol("exact"),
        )
    )
    # square of the Clifford symbol, coefficient-exact
    for n in (1, 2, 3):
        space = make_standard_space(n)
        basis = ExteriorBasis(n)
        A = symbols.build_A_symbol(space, basis)
        sq = symbols.moyal_poly_matrix(A, A, 1.0)
        Q = None
        for j in range(1, n + 1):
            ej = symbols.WeylPoly.coordinate(n, j, "e")
            fj = symbols.WeylPoly.coordinate(n, j, "f")
            term = symbols.moyal_poly(ej, ej, 1.0) + symbols.moyal_poly(fj, fj, 1.0)
            Q = term if Q is None else Q + term
        expect = Q.tensor(np.eye(basis.dim)) + symbols.WeylPoly.constant(n, 1.0).tensor(
            core.number_operator(basis)
        )
        records.append(
            _record(
                f"symbols/clifford-symbol-square/n={n}",
                "clifford-symbol-square",
                {"n": n, "lam": 1.0},
                sq.max_abs_diff(expect),
                config.tol("exact"),
            )
        )
    # scaling map: multiplicative without the prefactor, broken with it
    from fractions import Fraction as F

    worst = 0
    for _ in range(10):
        al = F(int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        be = F(int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        lam = F(int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        f = symbols.GaussianSymbol(1, al, 2)
        g = symbols.GaussianSymbol(1, be, 2)
        lhs = symbols.scaling_iso(symbols.moyal_gauss(f, g, 1), lam)
        rhs = symbols.moyal_gauss(
            symbols.scaling_iso(f, lam), symbols.scaling_iso(g, lam), lam
        )
        worst = max(worst, 0 if lhs == rhs else 1)
    records.append(
        _record(
            "symbols/scaling-multiplicative",
            "symbol-algebra-scaling-family",
            {"samples": 10},
            worst,
            config.tol("exact"),
        )
    )
    defect = symbols.scaling_prefactor_defect(
        symbols.GaussianSymbol(1, 1, 1), symbols.GaussianSymbol(1, 1, 1), 2.0
    )
    records.append(
        _record_bool(
            "symbols/scaling-prefactor-breaks-multiplicativity",
            "symbol-algebra-scaling-family",
            {"lam": 2.0, "defect": defect},
            defect > 1e-3,
        )
    )
    # Fourier isomorphism by quadrature (n = 1)
    cases = [
        ("lam0", symbols.GaussianSymbol(1, 1.0, 1), symbols.GaussianSymbol(1, 0.7, 1), 0.0, 1e-8),
        ("unit", symbols.GaussianSymbol(1, 1.0, 1), symbols.GaussianSymbol(1, 1.0, 1), 1.0, 1e-6),
        ("mixed", symbols.GaussianSymbol(1, 2.0, 1), symbols.GaussianSymbol(1, 0.5, 1), 1.0, 1e-6),
    ]
    for name, g1, h1, lam, tol in cases:
        res = symbols.fourier_iso_check(g1, h1, lam)
        records.append(
            _record(
                f"symbols/fourier-iso/{name}",
                "twisted-convolution-fourier",
                {"lam": lam, "alpha": float(g1.alpha), "beta": float(h1.alpha)},
                res,
                tol,
            )
        )
    return records


# ---------------------------------------------------------------------------
# suite: quantize


def _random_poly(n, degree, rng):
    terms = {}
    for _ in range(4):
        exp = tuple(int(x) for x in rng.integers(0, degree + 1, size=2 * n))
        while sum(exp) > degree:
            exp = tuple(int(x) for x in rng.integers(0, degree + 1, size=2 * n))
        terms[exp] = complex(rng.normal(), rng.normal())
    return symbols.WeylPoly(n=n, terms=terms)


def suite_quantize(config, rng):
    records = []
    for n in config.n_values:
        N_max = config.N_max if n == 1 else max(8, config.N_max // 2)
        spec = HermiteBasisSpec(n=n, lam=1.0, N_max=N_max)
        pairs = quantize.position_matrices(spec)
        mask = spec.interior_mask(1)
        sub = np.ix_(mask, mask)
        worst = 0.0
        for x, p in pairs:
            comm = x.data @ p.data - p.data @ x.data
            worst = max(worst, np.max(np.abs((comm - 1j * spec.lam * np.eye(spec.dim))[sub])))
        records.append(
            _record(
                f"quantize/position-momentum-commutator/n={n}",
                "weyl-pseudodifferential-quantization",
                {"n": n, "N_max": N_max},
                worst,
                config.tol("tight"),
            )
        )
        # oscillator spectrum
        osc = sum(
            (x.data @ x.data + p.data @ p.data for x, p in pairs),
            np.zeros((spec.dim, spec.dim), dtype=complex),
        )
        expect = quantize.oscillator_diagonal(spec)
        residual = np.max(np.abs(np.diag(osc).real[mask] - expect[mask]))
        records.append(
            _record(
                f"quantize/oscillator-spectrum/n={n}",
                "weyl-pseudodifferential-quantization",
                {"n": n},
                residual,
                config.tol("interior"),
            )
        )
        # homomorphism on random polynomials
        worst = 0.0
        for _ in range(6):
            f = _random_poly(n, 3, rng)
            g = _random_poly(n, 3, rng)
            lhs = quantize.quantize_poly(symbols.moyal_poly(f, g, 1.0), spec)
            pf = quantize.quantize_poly(f, spec)
            pg = quantize.quantize_poly(g, spec)
            m = spec.interior_mask(6)
            s6 = np.ix_(m, m)
            num = np.max(np.abs((lhs.data - pf.data @ pg.data)[s6]))
            scale = 1 + np.linalg.norm(pf.data, 2) * np.linalg.norm(pg.data, 2)
            worst = max(worst, num / scale)
        records.append(
            _record(
                f"quantize/star-homomorphism/n={n}",
                "weyl-pseudodifferential-quantization",
                {"n": n, "pairs": 6},
                worst,
                config.tol("interior"),
            )
        )
        # vacuum projection
        P0 = quantize.quantize_gaussian(symbols.vacuum_symbol(1.0, n), spec)
        records.append(
            _record(
                f"quantize/vacuum-projection/n={n}",
                "weyl-pseudodifferential-quantization",
                {"n": n},
                abs(np.trace(P0.data) - 1.0) + np.max(np.abs(P0.data @ P0.data - P0.data)),
                config.tol("tight"),
            )
        )
        # gaussian product vs closed form
        a = symbols.GaussianSymbol(1.0, 0.5, n)
        b = symbols.GaussianSymbol(1.0, 0.5, n)
        lhs = quantize.quantize_gaussian(a, spec).data @ quantize.quantize_gaussian(b, spec).data
        rhs = quantize.quantize_gaussian(symbols.moyal_gauss(a, b, 1.0), spec).data
        records.append(
            _record(
                f"quantize/gaussian-product/n={n}",
                "weyl-pseudodifferential-quantization",
                {"n": n, "alpha": 0.5},
                np.max(np.abs((lhs - rhs)[sub])),
                config.tol("spectral"),
            )
        )
        # quantized Clifford symbol squares correctly
        space = make_standard_space(n)
        basis = ExteriorBasis(n)
        A = quantize.build_A_operator(space, basis, spec)
        ideal = np.kron(
            np.eye(basis.dim), np.diag(quantize.oscillator_diagonal(spec))
        ) + spec.lam * np.kron(core.number_operator(basis), np.eye(spec.dim))
        fm = A.full_mask(2)
        subf = np.ix_(fm, fm)
        records.append(
            _record(
                f"quantize/A-square/n={n}",
                "clifford-symbol-square",
                {"n": n},
                np.max(np.abs((A.data @ A.data - ideal)[subf])),
                config.tol("tight") * spec.dim,
            )
        )
        # kernel and cokernel of the positive part
        Ap = quantize.A_plus_block(A, basis, margin=2)
        dim_ker, kb = kernel_analysis(Ap, 1e-6)
        ground = np.zeros(Ap.shape[1], dtype=complex)
        ground[0] = 1.0  # ground Hermite state (x) Lambda^0 is first in the block
        overlap = float(np.abs(ground.conj() @ kb[:, 0])) if dim_ker == 1 else 0.0
        records.append(
            _record_bool(
                f"quantize/index-kernel/n={n}",
                "kernel-index-quantized-clifford",
                {"n": n, "dim_ker": dim_ker, "overlap": overlap},
                dim_ker == 1 and overlap >= 1 - 1e-8,
            )
        )
        Am = quantize.A_minus_block(A, basis, margin=2)
        dim_coker, _ = kernel_analysis(Am, 1e-6)
        records.append(
            _record_bool(
                f"quantize/index-cokernel/n={n}",
                "kernel-index-quantized-clifford",
                {"n": n, "dim_coker": dim_coker},
                dim_coker == 0,
            )
        )
        # lam = -1 by conjugation symmetry: kernel in the top exterior degree
        res = determinant_action_residual(n, N_max, rng, samples=5)
        records.append(
            _record(
                f"quantize/negative-lam-determinant/n={n}",
                "kernel-index-quantized-clifford",
                {"n": n, "samples": 5},
                res,
                config.tol("spectral"),
            )
        )
    # Bargmann-Fock representation
    n = 2
    zs, dzs = quantize.bargmann_fock_matrices(n, 6)
    worst = 0.0
    dim = zs[0].shape[0]
    degs = np.array([sum(a) for a in quantize.bargmann_basis(n, 6)])
    low = degs < 6
    subl = np.ix_(low, low)
    for j in range(n):
        worst = max(worst, np.max(np.abs(zs[j].conj().T - dzs[j])))
        comm = dzs[j] @ zs[j] - zs[j] @ dzs[j]
        worst = max(worst, np.max(np.abs((comm - np.eye(dim))[subl])))
    records.append(
        _record(
            "quantize/bargmann-adjoint-commutator",
            "bargmann-fock-representation",
            {"n": n, "deg_max": 6},
            worst,
            config.tol("tight"),
        )
    )
    num = sum(z @ d for z, d in zip(zs, dzs))
    spec1 = HermiteBasisSpec(n=n, lam=1.0, N_max=8)
    osc_int = np.sort(quantize.oscillator_diagonal(spec1)[spec1.interior_mask(1)])
    bf_int = np.sort(np.diag(num).real[low])
    k = min(len(osc_int), len(bf_int))
    records.append(
        _record(
            "quantize/bargmann-number-spectrum",
            "bargmann-fock-representation",
            {"n": n, "modes": int(k)},
            np.max(np.abs(bf_int[:k] - (osc_int[:k] - n) / 2.0)),
            config.tol("interior"),
        )
    )
    # truncation convergence: doubling N_max leaves interior data unchanged
    spec_a = HermiteBasisSpec(n=1, lam=1.0, N_max=config.N_max)
    spec_b = HermiteBasisSpec(n=1, lam=1.0, N_max=2 * config.N_max)
    Ka = quantize.quantize_gaussian(symbols.mehler(1.0, 1.0, 1), spec_a).data
    Kb = quantize.quantize_gaussian(symbols.mehler(1.0, 1.0, 1), spec_b).data
    k = spec_a.dim
    records.append(
        _record(
            "quantize/truncation-convergence",
            "weyl-pseudodifferential-quantization",
            {"N_max": config.N_max},
            np.max(np.abs(np.diag(Ka) - np.diag(Kb)[:k])),
            config.tol("interior"),
        )
    )
    return records


def determinant_action_residual(n, N_max, rng, samples=5):
    """At lam = -1 the one-dimensional kernel of the quantized Clifford
    operator sits at ground state (x) top exterior degree, so the diagonal
    torus acts on it by the determinant character e^{i(theta_1+...+theta_n)}.

    The kernel lives in the block whose parity matches the top degree: the
    even-to-odd block for n even, the odd-to-even block for n odd.
    """
    spec = HermiteBasisSpec(n=n, lam=-1.0, N_max=N_max)
    space = make_standard_space(n)
    basis = ExteriorBasis(n)
    A = quantize.build_A_operator(space, basis, spec)
    if n % 2 == 0:
        block = quantize.A_plus_block(A, basis, margin=2)
        par_subsets = [s for s in basis.subsets if len(s) % 2 == 0]
    else:
        block = quantize.A_minus_block(A, basis, margin=2)
        par_subsets = [s for s in basis.subsets if len(s) % 2 == 1]
    dim_ker, kb = kernel_analysis(block, 1e-6)
    if dim_ker != 1:
        return 1.0
    vec = kb[:, 0]
    idx_interior = [
        (s, h)
        for s in par_subsets
        for h, keep in zip(spec.multi_indices(), spec.interior_mask(2))
        if keep
    ]
    # localization: the kernel vector must be the ground state in the top degree
    top = tuple(range(1, n + 1))
    pos = [i for i, (s, h) in enumerate(idx_interior) if s == top and sum(h) == 0][0]
    worst = abs(1.0 - abs(vec[pos]))
    for _ in range(samples):
        thetas = rng.uniform(0, 2 * np.pi, size=n)
        phases = np.array(
            [
                np.exp(
                    1j
                    * (
                        sum(thetas[j - 1] for j in s)
                        + sum(t * k for t, k in zip(thetas, h))
                    )
                )
                for s, h in idx_interior
            ]
        )
        det_phase = np.exp(1j * np.sum(thetas))
        worst = max(worst, float(np.max(np.abs(phases * vec - det_phase * vec))))
    return worst


# ---------------------------------------------------------------------------
# suite: projectors


def suite_projectors(config, rng):
    records = []
    eb = projectors.bott_projector(1)
    worst = 0.0
    for _ in range(200):
        z = rng.normal(size=2) * 2.0
        m = eb(z)
        worst = max(worst, np.max(np.abs(m @ m - m)), np.max(np.abs(m - m.conj().T)))
    records.append(
        _record(
            "projectors/bott-idempotent",
            "stereographic-bott-projector",
            {"samples": 200},
            worst,
            config.tol("tight"),
        )
    )
    worst = 0.0
    for _ in range(50):
        z = rng.normal(size=2)
        z = z / np.linalg.norm(z) * rng.uniform(10, 50)
        r = float(np.linalg.norm(z))
        bound = (1.0 + r) / (1.0 + r * r)  # off-diagonal entries scale like |z|
        dev = np.max(np.abs(eb(z) - eb.limit))
        worst = max(worst, dev - bound)
    records.append(
        _record_bool(
            "projectors/bott-limit-bound",
            "stereographic-bott-projector",
            {"samples": 50},
            worst <= 0,
        )
    )
    es = projectors.sphere_projector(1)
    worst = 0.0
    for _ in range(500):
        p = rng.normal(size=3)
        p /= np.linalg.norm(p)
        worst = max(worst, np.max(np.abs(eb(projectors.stereographic(p)) - es(p))))
    records.append(
        _record(
            "projectors/stereographic-pullback",
            "stereographic-bott-projector",
            {"samples": 500},
            worst,
            config.tol("tight"),
        )
    )
    c_bott = projectors.chern_number(eb, grid_size=config.grid_size)
    records.append(
        _record_bool(
            "projectors/bott-chern-nonzero",
            "stereographic-bott-projector",
            {"grid": config.grid_size, "value": c_bott},
            abs(round(c_bott)) == 1,
        )
    )
    # unitary invariance of the chern number
    U = np.array([[np.exp(1j * 0.8)]])
    c_conj = projectors.chern_number(
        projectors.conjugated_field(eb, U), grid_size=config.grid_size
    )
    records.append(
        _record(
            "projectors/chern-unitary-invariance",
            "plumbing",
            {"grid": config.grid_size},
            abs(c_bott - c_conj),
            config.tol("chern"),
        )
    )
    for n in config.n_values:
        ebn = projectors.bott_projector(n)
        samples = [rng.normal(size=2 * n) for _ in range(20)]
        if n == 1:
            U = np.array([[np.exp(1j * rng.uniform(0, 2 * np.pi))]])
        else:
            U = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, size=n)))
        res = projectors.equivariance_check(ebn, U, samples)
        records.append(
            _record(
                f"projectors/equivariance/n={n}",
                "kernel-index-quantized-clifford",
                {"n": n, "samples": 20},
                res,
                config.tol("interior"),
            )
        )
    return records


# ---------------------------------------------------------------------------
# suite: deform


def suite_deform(config, rng):
    records = []
    side_tables = {}
    for n in config.n_values:
        N_max = config.N_max if n == 1 else max(8, config.N_max // 2)
        for lam in config.lambda_values:
            for tau in config.tau_values:
                spec = HermiteBasisSpec(n=n, lam=lam, N_max=N_max)
                fam = deform.DeformationFamily(lam=lam, tau=tau, spec=spec)
                e = fam.idempotent()
                fm = e.full_mask(3)
                sub = np.ix_(fm, fm)
                records.append(
                    _record(
                        f"deform/idempotent/n={n}/lam={lam}/tau={tau}",
                        "mehler-deformation-family",
                        {"n": n, "lam": lam, "tau": tau, "N_max": N_max},
                        np.max(np.abs((e.data @ e.data - e.data)[sub])),
                        config.tol("spectral"),
                    )
                )
                AB = fam.A.data @ fam.B.data
                BA = fam.B.data @ fam.A.data
                RR = fam.R.data - fam.R.data @ fam.R.data
                records.append(
                    _record(
                        f"deform/interpolation-identity/n={n}/lam={lam}/tau={tau}",
                        "mehler-deformation-family",
                        {"n": n, "lam": lam, "tau": tau},
                        max(
                            np.max(np.abs((AB - RR)[sub])),
                            np.max(np.abs((AB - BA)[sub])),
                        ),
                        1e-9,
                    )
                )
                blocks = fam.block_residuals()
                records.append(
                    _record(
                        f"deform/block-relations/n={n}/lam={lam}/tau={tau}",
                        "boundary-idempotent-template",
                        {"n": n, "lam": lam, "tau": tau},
                        max(blocks.values()),
                        config.tol("interior"),
                    )
                )
    # semigroup at the spectral level
    spec = HermiteBasisSpec(n=1, lam=1.0, N_max=config.N_max)
    r1 = deform.R_operator(1.0, 1.0, spec).data
    r2 = deform.R_operator(2.0, 1.0, spec).data
    records.append(
        _record(
            "deform/heat-semigroup",
            "mehler-deformation-family",
            {"tau": 1.0},
            np.max(np.abs(r1 @ r1 - r2)),
            config.tol("tight"),
        )
    )
    # boundary idempotent template cross-check
    fam = deform.DeformationFamily(lam=1.0, tau=1.0, spec=spec)
    y = deform.family_parametrix(fam)
    e_template = deform.boundary_idempotent(fam.a, y)
    e_family = fam.idempotent()
    fm = e_family.full_mask(3)
    sub = np.ix_(fm, fm)
    records.append(
        _record(
            "deform/boundary-template-crosscheck",
            "boundary-idempotent-template",
            {"lam": 1.0, "tau": 1.0},
            np.max(np.abs((e_template - e_family.data)[sub])),
            config.tol("spectral"),
        )
    )
    # scalar sanity cases of the template
    e_inv = deform.boundary_idempotent(np.array([[1.0]]), np.array([[1.0]]))
    e_zero = deform.boundary_idempotent(np.array([[0.0]]), np.array([[0.0]]))
    records.append(
        _record_bool(
            "deform/boundary-template-endpoints",
            "boundary-idempotent-template",
            {},
            np.allclose(e_inv, np.diag([0.0, 1.0])) and np.allclose(e_zero, np.diag([1.0, 0.0])),
        )
    )
    # tau -> infinity convergence
    conv = deform.tau_convergence(np.arange(1.0, 4.01, 0.5), spec)
    side_tables["tau_convergence"] = conv
    records.append(
        _record_bool(
            "deform/tau-convergence-monotone",
            "mehler-deformation-family",
            {"slope": conv["log_slope"]},
            conv["monotone"],
        )
    )
    records.append(
        _record_bool(
            "deform/tau-convergence-rate",
            "mehler-deformation-family",
            {"slope": conv["log_slope"]},
            -2.2 <= conv["log_slope"] <= -1.8,
        )
    )
    # lambda continuity in a common basis
    grid_coarse = np.arange(0.25, 1.0001, 0.05)
    grid_fine = np.arange(0.25, 1.0001, 0.025)
    cont_c = deform.lambda_continuity(grid_coarse, spec)
    cont_f = deform.lambda_continuity(grid_fine, spec)
    side_tables["lambda_continuity"] = cont_c
    records.append(
        _record_bool(
            "deform/lambda-lipschitz-consistency",
            "mehler-deformation-family",
            {
                "coarse": cont_c["lipschitz_estimate"],
                "fine": cont_f["lipschitz_estimate"],
            },
            max(r["increment"] for r in cont_c["rows"])
            <= 10 * max(r["increment"] for r in cont_f["rows"]),
        )
    )
    # pointwise lam = 0 family
    e0 = deform.pointwise_family_e0(1.0)
    worst = 0.0
    for _ in range(200):
        z = rng.normal(size=2) * 2.0
        m = e0(z)
        worst = max(worst, np.max(np.abs(m @ m - m)))
    records.append(
        _record(
            "deform/pointwise-idempotent",
            "mehler-deformation-family",
            {"tau": 1.0, "samples": 200},
            worst,
            config.tol("tight"),
        )
    )
    c0 = projectors.chern_number(e0, grid_size=config.grid_size)
    cb = projectors.chern_number(projectors.bott_projector(1), grid_size=config.grid_size)
    side_tables["chern"] = {"e0": c0, "bott": cb}
    records.append(
        _record(
            "deform/bott-generator-class",
            "mehler-deformation-family",
            {"e0": c0, "bott": cb},
            abs(round(c0) - round(cb)) + abs(c0 - round(c0)) + abs(cb - round(cb)),
            config.tol("chern"),
        )
    )
    # equivariance of the operator idempotent under the torus action
    for n in config.n_values:
        N_max = config.N_max if n == 1 else max(8, config.N_max // 2)
        famn = deform.DeformationFamily(
            lam=1.0, tau=1.0, spec=HermiteBasisSpec(n=n, lam=1.0, N_max=N_max)
        )
        worst = 0.0
        for _ in range(20):
            worst = max(
                worst,
                deform.equivariant_conjugation(famn, rng.uniform(0, 2 * np.pi, size=n)),
            )
        records.append(
            _record(
                f"deform/equivariant-idempotent/n={n}",
                "clifford-symbol-square",
                {"n": n, "samples": 20},
                worst,
                config.tol("spectral"),
            )
        )
    return records, side_tables


# ---------------------------------------------------------------------------
# suite: toeplitz (the circle index demo)


def circle_szego(N):
    """Hardy projection on Fourier modes -N..N: diagonal 0/1 on modes >= 0."""
    if N < 8:
        raise ValueError("N must be >= 8")
    modes = np.arange(-N, N + 1)
    return np.diag((modes >= 0).astype(complex))


def multiplication_matrix(f_fourier, N):
    """Multiplication by f on Fourier modes -N..N: M[i, j] = fhat_{m_i - m_j}."""
    modes = np.arange(-N, N + 1)
    M = np.zeros((len(modes), len(modes)), dtype=complex)
    for k, c in f_fourier.items():
        for j, m in enumerate(modes):
            if -N <= m + k <= N:
                M[j + k, j] = c  # row index of mode m + k
    return M


def winding_number(f_fourier, N):
    """Winding of theta -> f(e^{i theta}) by continuous argument tracking."""
    thetas = np.linspace(0.0, 2 * np.pi, 4 * N + 1)
    vals = np.zeros(len(thetas), dtype=complex)
    for k, c in f_fourier.items():
        vals += c * np.exp(1j * k * thetas)
    if np.min(np.abs(vals)) <= 1e-6:
        raise ValueError("symbol is not invertible on the circle")
    u = np.unwrap(np.angle(vals))
    w = (u[-1] - u[0]) / (2 * np.pi)
    return int(round(w))


class IndexMismatchError(RuntimeError):
    pass


def _toeplitz_matrix(f_fourier, N):
    """Compression S M_f S on the range of S (modes 0..N)."""
    if any(abs(k) > N // 4 for k in f_fourier):
        raise ValueError("Fourier support must lie within [-N/4, N/4]")
    T = np.zeros((N + 1, N + 1), dtype=complex)
    for k, c in f_fourier.items():
        for j in range(N + 1):
            if 0 <= j + k <= N:
                T[j + k, j] = c
    return T


def toeplitz_kernel_weights(f_fourier, N, gap_threshold=1e-6):
    """Kernel and cokernel of the truncated Toeplitz operator, as lists of
    rotation weights (mode numbers).  Counting is restricted away from the
    band edge (the top N/8 modes) so truncation cannot fake kernel vectors."""
    T = _toeplitz_matrix(f_fourier, N)
    cut = N + 1 - N // 8
    dim_ker, kb = kernel_analysis(T[:, :cut], gap_threshold)
    dim_coker, cb = kernel_analysis(T.conj().T[:, :cut], gap_threshold)

    def weights(basis_mat, count):
        out = []
        for i in range(count):
            out.append(int(np.argmax(np.abs(basis_mat[:, i]))))
        return sorted(out)

    return weights(kb, dim_ker), weights(cb, dim_coker)


def toeplitz_index(f_fourier, N):
    """Fredholm index of the Toeplitz compression of f, certified against the
    independently computed winding number (disagreement is a hard failure)."""
    ker_w, coker_w = toeplitz_kernel_weights(f_fourier, N)
    index = len(ker_w) - len(coker_w)
    wind = winding_number(f_fourier, N)
    if index != -wind:
        raise IndexMismatchError(
            f"operator index {index} != -winding {-wind} for symbol {f_fourier}"
        )
    return index


def equivariant_toeplitz_demo(k, N=256):
    """Rotation-equivariant index bookkeeping for f = e^{i k theta}.

    Returns the kernel/cokernel weight multisets of T_f together with the
    mode-counting prediction (empty kernel and cokernel weights {0..k-1} for
    k > 0, mirrored for k < 0) and sampled character values of the cokernel
    representation."""
    f = {k: 1.0}
    ker_w, coker_w = toeplitz_kernel_weights(f, N) if k != 0 else ([], [])
    if k > 0:
        predicted_ker, predicted_coker = [], list(range(k))
    elif k < 0:
        predicted_ker, predicted_coker = list(range(-k)), []
    else:
        predicted_ker, predicted_coker = [], []
    phis = np.linspace(0.0, 2 * np.pi, 7)
    character = [
        complex(sum(np.exp(1j * w * phi) for w in coker_w)) for phi in phis
    ]
    predicted_character = [
        complex(sum(np.exp(1j * w * phi) for w in predicted_coker)) for phi in phis
    ]
    char_residual = max(
        (abs(a - b) for a, b in zip(character, predicted_character)), default=0.0
    )
    return {
        "k": k,
        "ker_weights": ker_w,
        "coker_weights": coker_w,
        "predicted_ker": predicted_ker,
        "predicted_coker": predicted_coker,
        "match": ker_w == predicted_ker and coker_w == predicted_coker,
        "character_residual": float(char_residual),
    }


def suite_toeplitz(config, rng):
    records = []
    N = config.toeplitz_N
    S = circle_szego(N)
    records.append(
        _record(
            "toeplitz/szego-projection",
            "toeplitz-index-circle",
            {"N": N},
            np.max(np.abs(S @ S - S)) + abs(np.trace(S).real - (N + 1)),
            config.tol("exact"),
        )
    )
    Mf = multiplication_matrix({2: 1.0}, N)
    comm = S @ Mf - Mf @ S
    records.append(
        _record_bool(
            "toeplitz/commutator-rank",
            "toeplitz-index-circle",
            {"N": N, "k": 2},
            np.linalg.matrix_rank(comm) <= 4,
        )
    )
    symbols_under_test = [({k: 1.0}, -k) for k in range(-3, 4)]
    # 2 e^{-2i theta} + 0.5 e^{2i theta}: winding -2, index +2
    symbols_under_test.append(({-2: 2.0, 2: 0.5}, 2))
    # e^{i theta} + 0.1 + 0.2 e^{-i theta}: winding +1, index -1
    symbols_under_test.append(({1: 1.0, 0: 0.1, -1: 0.2}, -1))
    for f, expected in symbols_under_test:
        try:
            idx = toeplitz_index(f, N)
            ok = idx == expected
        except IndexMismatchError:
            ok = False
            idx = None
        records.append(
            _record_bool(
                f"toeplitz/index/{sorted(f.items())}",
                "toeplitz-index-circle",
                {"N": N, "index": idx, "expected": expected},
                ok,
            )
        )
    # index stability under doubling N
    f = {-2: 2.0, 2: 0.5}
    records.append(
        _record_bool(
            "toeplitz/index-stability",
            "toeplitz-index-circle",
            {"N": N},
            toeplitz_index(f, N) == toeplitz_index(f, 2 * N),
        )
    )
    for k in (0, 1, 3):
        demo = equivariant_toeplitz_demo(k, N)
        records.append(
            _record_bool(
                f"toeplitz/equivariant/k={k}",
                "toeplitz-index-circle",
                {"k": k, "coker_weights": demo["coker_weights"]},
                demo["match"] and demo["character_residual"] <= 1e-10,
            )
        )
    thetas = np.linspace(0.0, 2 * np.pi, 4 * N + 1)
    vals = 2.0 * np.exp(-2j * thetas) + 0.5 * np.exp(2j * thetas)
    side_tables = {
        "toeplitz": {
            "thetas": thetas,
            "argument": np.unwrap(np.angle(vals)),
            "winding": winding_number(f, N),
        }
    }
    return records, side_tables


# ---------------------------------------------------------------------------
# orchestration


SUITE_RUNNERS = {
    "core": suite_core,
    "symbols": suite_symbols,
    "quantize": suite_quantize,
    "projectors": suite_projectors,
    "deform": suite_deform,
    "toeplitz": suite_toeplitz,
}


def run_suite(config):
    """Execute the configured suites; returns the report dict.

    Individual check crashes are recorded as failures and never abort the
    run.  Deterministic for a fixed config and seed.
    """
    from . import __version__

    checks = []
    side_tables = {}
    for name in config.active_suites():
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, SUITE_NAMES.index(name)]))
        runner = SUITE_RUNNERS[name]
        try:
            out = runner(config, rng)
        except Exception as exc:  # record, never abort
            checks.append(
                {
                    "id": f"{name}/suite-crash",
                    "anchor": "plumbing",
                    "params": {"error": f"{type(exc).__name__}: {exc}"},
                    "metric": 1.0,
                    "tol": 0.0,
                    "pass": False,
                }
            )
            continue
        if isinstance(out, tuple):
            records, tables = out
            side_tables.update(tables)
        else:
            records = out
        checks.extend(records)
    summary = {
        "total": len(checks),
        "passed": sum(1 for c in checks if c["pass"]),
        "failed": sum(1 for c in checks if not c["pass"]),
    }
    report = {
        "version": __version__,
        "config": config.to_json(),
        "checks": checks,
        "summary": summary,
    }
    return report, side_tables


def write_report(report, side_tables, config):
    """Write the JSON report plus CSV side tables and figures next to it."""
    import csv
    import os

    path = config.report_path
    out_dir = os.path.dirname(path) or "."
    os.makedirs(out_dir, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if "tau_convergence" in side_tables:
        with open(os.path.join(out_dir, "tau_convergence.csv"), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda", "tau", "n", "N_max", "metric_name", "value"])
            for row in side_tables["tau_convergence"]["rows"]:
                w.writerow([1.0, row["tau"], 1, config.N_max, "distance_to_limit", row["distance"]])
    if "lambda_continuity" in side_tables:
        with open(os.path.join(out_dir, "lambda_continuity.csv"), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lambda", "tau", "n", "N_max", "metric_name", "value"])
            for row in side_tables["lambda_continuity"]["rows"]:
                w.writerow(
                    [row["lam_to"], 1.0, 1, config.N_max, "increment", row["increment"]]
                )
    if config.figures:
        from . import plots

        plots.render_report_figures(side_tables, out_dir)
    return path
