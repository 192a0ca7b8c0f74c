"""Quotients of flat R⁸ and of the round cylinder over S⁷, and the Gibbons-Hawking data of the Hopf map.

All three live on coordinate algebras: the coordinates are real generators
and the radii are expressions in them, so exact mode stays available.
"""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
import sympy

from .claims import (
    CatalogEntry,
    RunContext,
    algebra_claims,
    curvature,
    lazy,
    quotient_claims,
    residual_claims,
    spin7_claims,
    value_claim,
)
from .curvature import scal_lc
from .frame_algebra import Form, FrameAlgebra, VectorField, wedge
from .g2 import g2_torsion, hypersurface_su3
from .g2 import scal_from_torsion as g2_scal_from_torsion
from .quotient import (
    QuotientData,
    commuting_residuals,
    gibbons_hawking,
    lcp_constraints,
    reduce,
    t2_quotient_identity,
    t2_reduction,
    torsion_relations,
)
from .scalars import evaluate_many
from .spin7 import LOCALLY_CONFORMALLY_PARALLEL, TORSION_FREE, Spin7Structure, spin7_torsion

logger = logging.getLogger(__name__)

HALF = sympy.Rational(1, 2)
GH_KEYS = tuple(f"d omega{i}" for i in (1, 2, 3)) + tuple(
    f"omega{i} omega{j}" for i in (1, 2, 3) for j in (1, 2, 3) if i <= j
)


def coordinate_algebra(labels: Sequence[str], coordinates: Sequence[str], name: str) -> FrameAlgebra:
    """Flat algebra whose coframe is dx of the given real coordinates (extra labels stay constant)."""
    algebra = FrameAlgebra(labels, {c: False for c in coordinates}, name=name)
    for i, c in enumerate(coordinates):
        algebra.declare_differential(c, algebra.e(i))
    return algebra.freeze()


def hyperkahler_two_forms(algebra: FrameAlgebra) -> Tuple[Form, Form, Form]:
    """dα₁, dα₂, dα₃ with the coframe standing in for dx₀..dx₇."""
    e = algebra.e
    return (
        2 * (e(0, 1) - e(2, 3) + e(4, 5) - e(6, 7)),
        2 * (e(0, 2) + e(1, 3) + e(4, 6) + e(5, 7)),
        2 * (e(0, 3) - e(1, 2) + e(4, 7) - e(5, 6)),
    )


def quaternionic_Phi(algebra: FrameAlgebra) -> Form:
    """Φ₀ = (1/8)(−dα₁² + dα₂² + dα₃²)."""
    d1, d2, d3 = hyperkahler_two_forms(algebra)
    return sympy.Rational(1, 8) * (-d1.wedge(d1) + d2.wedge(d2) + d3.wedge(d3))


def diagonal_circle(x: Sequence[sympy.Expr]) -> List[sympy.Expr]:
    """Components of X, the diagonal U(1) ⊂ Sp(2)."""
    return [-x[1], x[0], -x[3], x[2], -x[5], x[4], -x[7], x[6]]


def right_circle(x: Sequence[sympy.Expr]) -> List[sympy.Expr]:
    """Components of Y, right multiplication by a unit imaginary quaternion."""
    return [-x[1], x[0], x[3], -x[2], -x[5], x[4], x[7], -x[6]]


def cyclic(a: Sequence, b: Sequence[Form], c: Sequence[Form]) -> Form:
    """{a, b, c} = a₁b₂c₃ + a₂b₃c₁ + a₃b₁c₂; ``a`` may hold scalars or forms."""
    total = None
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        term = a[i].wedge(b[j]).wedge(c[k]) if isinstance(a[i], Form) else a[i] * b[j].wedge(c[k])
        total = term if total is None else total + term
    return total


# ------------------------------------------------------------------ round S⁷


def hopf_decomposition(euler: QuotientData, hopf: QuotientData, normal: VectorField) -> Dict[str, Form]:
    """φ_{S⁷} = ι_NΦ against η∧ω + Ω⁺ built from the Hopf quotient.

    With (ω_h, Ω⁺_h, Ω⁻_h) the SU(3) forms of the Hopf base along N,
    ω = −ω_h and Ω⁺ = −Ω⁻_h.
    """
    su3 = hypersurface_su3(hopf.horizontal, normal)
    omega, omega_plus = -su3.omega, -su3.omega_minus
    return {
        "phi_S7 = eta^omega + Omega+": euler.phi - hopf.eta.wedge(omega) - omega_plus,
        "omega horizontal": [omega.interior(hopf.fibre), omega.interior(normal)],
        "Omega+ horizontal": [omega_plus.interior(hopf.fibre), omega_plus.interior(normal)],
    }


def round_s7_ambient() -> CatalogEntry:
    """Cylinder R⁸∖0 with g = |dx|²/|x|², i.e. ℝ × round S⁷, and Φ conformal to Φ₀.

    E^i = dx_i/r is orthonormal; Φ has constant coefficients in E, so the
    structure is locally conformally parallel with T¹ = −4dr/r. Reducing along
    the Euler field gives the nearly parallel S⁷, along the Hopf field the
    quotient ℝ × CP³.
    """
    labels = tuple(f"E{i}" for i in range(8))
    names = [f"x{i}" for i in range(8)]
    algebra = FrameAlgebra(labels, {n: False for n in names}, name="round_s7_ambient")
    x = algebra.symbols(*names)
    r = sympy.sqrt(sympy.Add(*(xi ** 2 for xi in x)))
    for i, n in enumerate(names):
        algebra.declare_differential(n, r * algebra.e(i))
    for i in range(8):
        form = algebra.zero(2)
        for j in range(8):
            form = form - (x[j] / r) * algebra.e(j, i)
        algebra.declare_structure(i, form)
    algebra.freeze()

    Phi = Spin7Structure(algebra, quaternionic_Phi(algebra), name="round_s7_ambient")
    dr_over_r = algebra.one_form([xi / r for xi in x])
    N = algebra.vector([xi / r for xi in x])
    X = algebra.vector([c / r for c in diagonal_circle(x)])
    euler = reduce(Phi, N, s=1, name="round_s7_ambient/euler")
    hopf = reduce(Phi, X, s=1, name="round_s7_ambient/hopf")

    entry = CatalogEntry("round_s7_ambient", "ℝ × round S⁷ reduced along the Euler and Hopf fields", algebra)
    entry.structures["Phi"] = Phi
    entry.vectors.update(euler=N, hopf=X)
    entry.quotients.update(euler=euler, hopf=hopf)
    entry.forms["dr_over_r"] = dr_over_r
    suites = ("lcp-quotient",)

    entry.add(*algebra_claims(entry.id, "cylinder", algebra))
    entry.add(*spin7_claims(entry.id, "Phi", Phi, LOCALLY_CONFORMALLY_PARALLEL, suites))
    torsion = lazy(lambda: spin7_torsion(Phi))
    entry.add(
        *residual_claims(
            f"{entry.id}/Phi",
            lambda: {"T5": torsion().T5, "T1 is -4dr/r": torsion().T1 + 4 * dr_over_r},
            ("T5", "T1 is -4dr/r"),
            suites,
            algebra,
            "locally conformally parallel: T⁵ = 0, T¹ = −4dr/r",
        ),
        value_claim(
            f"{entry.id}/cylinder/scalar curvature",
            "Scal(ℝ × S⁷) = 42",
            ("ricci-oracle",),
            lambda ctx: scal_lc(curvature(algebra)) - 42,
            algebra,
        ),
    )

    for name, q in (("euler", euler), ("hopf", hopf)):
        entry.add(*quotient_claims(entry.id, name, q))
        report = lazy(lambda q=q: torsion_relations(q))
        entry.add(
            value_claim(
                f"{entry.id}/{name}/lcp constraints",
                "τ₃ = 0, f constant, and τ₀ = 0, dτ₁ = 0 or dη = −(1/f)dT¹₇",
                suites,
                lambda ctx, q=q, report=report: list(lcp_constraints(q, report(), ctx.checker).values()),
                algebra,
            )
        )

    euler_report = lazy(lambda: torsion_relations(euler))
    hopf_report = lazy(lambda: torsion_relations(hopf))
    entry.add(
        *residual_claims(
            f"{entry.id}/euler",
            lambda: {"f is -4": euler_report().f + 4, "tau0 is 4": euler_report().base.tau0 - 4},
            ("f is -4", "tau0 is 4"),
            suites,
            algebra,
            "nearly parallel S⁷: τ₀ = 4",
        )
    )
    entry.add(
        *residual_claims(
            f"{entry.id}/hopf",
            lambda: {
                "f vanishes": hopf_report().f,
                "tau1": hopf_report().base.tau1 + sympy.Rational(4, 3) * dr_over_r,
                "tau2": hopf_report().base.tau2
                + sympy.Rational(2, 3) * Phi.Phi.interior(N).interior(X)
                + hopf.curvature,
            },
            ("f vanishes", "tau1", "tau2"),
            suites,
            algebra,
            "ℝ × CP³: τ₁ = −(4/3)dr/r, τ₂ = −(⅔ι_Xι_NΦ + dη)",
        )
    )
    entry.add(
        *residual_claims(
            f"{entry.id}/hopf",
            lazy(lambda: hopf_decomposition(euler, hopf, N)),
            ("phi_S7 = eta^omega + Omega+", "omega horizontal", "Omega+ horizontal"),
            suites,
            algebra,
            "φ_{S⁷} = η∧ω + Ω⁺ with (ω, Ω⁺) from the Hopf reduction",
        )
    )
    entry.add(
        *residual_claims(
            f"{entry.id}/hopf",
            lambda: {
                "base scalar curvature": g2_scal_from_torsion(hopf.horizontal, hopf_report().base) - 48,
                "curvature norm": hopf.horizontal.norm_sq(hopf.curvature) - 12,
            },
            ("base scalar curvature", "curvature norm"),
            ("ricci-oracle", "lcp-quotient"),
            algebra,
            "Scal(ℝ × CP³) = 48 and ‖dη‖² = 12",
        )
    )
    return entry


# ------------------------------------------------------------------ flat R⁸ and its T² quotient


def flat_r8_quotient() -> CatalogEntry:
    names = [f"x{i}" for i in range(8)]
    algebra = coordinate_algebra(tuple(f"e{i}" for i in range(8)), names, "flat_r8_quotient")
    x = algebra.symbols(*names)
    Phi = Spin7Structure(algebra, quaternionic_Phi(algebra), name="flat_r8_quotient")
    X = algebra.vector(diagonal_circle(x))
    Y = algebra.vector(right_circle(x))

    x0, x1, x2, x3, x4, x5, x6, x7 = x
    u = x0 ** 2 + x1 ** 2 + x4 ** 2 + x5 ** 2
    v = x2 ** 2 + x3 ** 2 + x6 ** 2 + x7 ** 2
    R = sympy.sqrt(u + v)
    uu = (x0 ** 2 + x1 ** 2 - x4 ** 2 - x5 ** 2, 2 * (x0 * x4 + x1 * x5), 2 * (x0 * x5 - x1 * x4))
    vv = (x2 ** 2 + x3 ** 2 - x6 ** 2 - x7 ** 2, 2 * (x2 * x6 + x3 * x7), 2 * (x2 * x7 - x3 * x6))
    du = [algebra.d_scalar(c) for c in uu]
    dv = [algebra.d_scalar(c) for c in vv]
    du123, dv123 = wedge(*du), wedge(*dv)

    q = reduce(Phi, X, s=1 / R, name="flat_r8_quotient/X")
    t2 = lazy(lambda: t2_reduction(q, Y))
    tau2 = lazy(lambda: g2_torsion(q.horizontal).tau2)

    entry = CatalogEntry("flat_r8_quotient", "flat R⁸ reduced along the diagonal circle, then along Y", algebra)
    entry.structures["Phi"] = Phi
    entry.vectors.update(X=X, Y=Y)
    entry.quotients["X"] = q
    entry.forms.update(zip(("du1", "du2", "du3", "dv1", "dv2", "dv3"), du + dv))
    suites = ("flat-r8",)
    anchor = "closed G2 quotient of flat R⁸ and its SU(3) reduction"

    entry.add(*algebra_claims(entry.id, "R8", algebra))
    entry.add(*spin7_claims(entry.id, "Phi", Phi, TORSION_FREE, suites))
    entry.add(*quotient_claims(entry.id, "X", q))

    def displayed() -> Dict[str, object]:
        red = t2()
        two_thirds = sympy.Rational(2, 3)
        pairing = HALF * sum((dv[i].wedge(du[i]) for i in range(3)), algebra.zero(2))
        phi = red.xi.wedge(pairing) + sympy.Rational(1, 8) * (
            (du123 - cyclic(dv, du, du)) / u + (dv123 - cyclic(dv, dv, du)) / v
        )
        omega_minus = (cyclic(dv, dv, du) - cyclic(du, du, dv) + (u / v) * dv123 - (v / u) * du123) / (
            4 * R ** two_thirds
        )
        curvature_form = -cyclic(vv, dv, dv) / (4 * v ** 3) + cyclic(uu, du, du) / (4 * u ** 3)
        dw = du + dv
        scale = q.s ** two_thirds * red.H
        diagonal = [2 * sympy.sqrt(u / v)] * 3 + [2 * sympy.sqrt(v / u)] * 3
        metric = [
            scale * dw[a].inner(dw[b]) - (diagonal[a] if a == b else 0) for a in range(6) for b in range(a, 6)
        ]
        return {
            "phi": q.phi - phi,
            "H": red.H - R ** two_thirds / (2 * sympy.sqrt(u * v)),
            "sqrt H Omega minus": red.sqrt_H_omega_minus - omega_minus,
            "curvature": red.xi.d() - curvature_form,
            "metric": metric,
        }

    entry.add(
        *residual_claims(
            f"{entry.id}/display",
            lazy(displayed),
            ("phi", "H", "sqrt H Omega minus", "curvature", "metric"),
            suites,
            algebra,
            anchor,
        )
    )
    tau_v = lazy(lambda: tau2().interior(Y))
    entry.add(
        value_claim(
            f"{entry.id}/torsion/tau_v",
            "τ_v = ι_Yτ₂",
            suites,
            lambda ctx: sympy.Rational(3, 2) * R ** sympy.Rational(8, 3) * tau_v()
            - (
                sum((uu[i] * dv[i] - vv[i] * du[i] for i in range(3)), algebra.zero(1))
                - 3 * (u * algebra.d_scalar(v) - v * algebra.d_scalar(u))
            ),
            algebra,
        ),
        value_claim(
            f"{entry.id}/torsion/tau_h",
            "τ_h = τ₂ − ξ∧τ_v as displayed",
            suites,
            lambda ctx: _tau_h_residual(tau2(), t2().xi, tau_v(), u, v, R, uu, vv, du, dv),
            algebra,
            gating=False,
        ),
        value_claim(
            f"{entry.id}/complex structure",
            "J(u^{1/2}∂_{u_i}) = ±v^{1/2}∂_{v_i}",
            suites,
            lambda ctx: _complex_structure_residual(ctx, algebra, t2().omega, du + dv, u, v),
            algebra,
        ),
        value_claim(
            f"{entry.id}/T2 identity",
            "Φ = η∧ξ∧ω + H^{3/2}η∧Ω⁺ + ½s^{4/3}H²ω² − s^{4/3}H^{1/2}ξ∧Ω⁻",
            suites,
            lambda ctx: t2_quotient_identity(q, t2(), Phi.Phi),
            algebra,
        ),
    )
    entry.add(
        *residual_claims(
            f"{entry.id}/symmetry",
            lambda: {
                **commuting_residuals(q, Y, Phi.Phi),
                "X preserves Phi": Phi.Phi.lie(X),
                "closed contractions": [
                    d.interior(X).wedge(d).d() for d in hyperkahler_two_forms(algebra)
                ],
            },
            ("Y preserves Phi", "X and Y commute", "X preserves Phi", "closed contractions"),
            suites,
            algebra,
            "ℒ_XΦ₀ = ℒ_YΦ₀ = 0 and [X, Y] = 0",
        )
    )
    return entry


def _tau_h_residual(tau2, xi, tau_v, u, v, R, uu, vv, du, dv) -> Form:
    tau_h = tau2 - xi.wedge(tau_v)
    expected = (
        -u * (HALF * (cyclic(uu, dv, dv) + cyclic(vv, dv, dv)) + (3 * u / (2 * v)) * cyclic(vv, dv, dv))
        - v * (HALF * (cyclic(vv, du, du) + cyclic(uu, du, du)) + (3 * v / (2 * u)) * cyclic(uu, du, du))
        - HALF * (u * cyclic(vv, dv, du) + v * cyclic(uu, dv, du))
        - HALF * (v * cyclic(uu, du, dv) + u * cyclic(vv, du, dv))
    )
    return 3 * u * v * R ** sympy.Rational(8, 3) * tau_h - expected


def _complex_structure_residual(
    ctx: RunContext, algebra: FrameAlgebra, omega: Form, dw: List[Form], u, v
) -> float:
    """Fit ω = Σ W_ab dw_a∧dw_b pointwise and compare J = −G⁻¹W with the displayed map.

    G is the metric in the basis ∂_{u_i}, ∂_{v_i}. Returns the worst of the
    fit residual, |J² + 1| and the deviation from J∂_{u_i} = ε√(v/u)∂_{v_i}
    with one sign ε for every point.
    """
    pairs = [(a, b) for a in range(6) for b in range(a + 1, 6)]
    basis = [dw[a].wedge(dw[b]) for a, b in pairs]
    indices = sorted({idx for form in basis + [omega] for idx in form.terms})
    worst, sign = 0.0, None
    for point in ctx.checker.points_for(algebra):
        A = np.array([[form.evaluate(point).get(idx, 0.0) for form in basis] for idx in indices])
        w = np.array([omega.evaluate(point).get(idx, 0.0) for idx in indices])
        coefficients, *_ = np.linalg.lstsq(A, w, rcond=None)
        fit = float(np.max(np.abs(A @ coefficients - w))) if len(w) else 0.0
        W = np.zeros((6, 6))
        for (a, b), c in zip(pairs, coefficients):
            W[a, b], W[b, a] = c, -c
        u_val, v_val = evaluate_many([u, v], point.values)
        G_inv = np.diag([2 * np.sqrt(u_val / v_val)] * 3 + [2 * np.sqrt(v_val / u_val)] * 3)
        J = -G_inv @ W
        if sign is None:
            sign = 1.0 if J[3, 0] >= 0 else -1.0
            logger.info("complex structure sign %+d", int(sign))
        target = np.zeros((6, 3))
        for i in range(3):
            target[3 + i, i] = sign * np.sqrt(v_val / u_val)
        worst = max(
            worst,
            fit,
            float(np.max(np.abs(J @ J + np.eye(6)))),
            float(np.max(np.abs(J[:, :3] - target))),
        )
    return worst


# ------------------------------------------------------------------ Hopf map and Gibbons-Hawking


def hopf_fibration(algebra: FrameAlgebra, x: Sequence[sympy.Expr]):
    """μ, η, f and γ of the U(1) action x₂∂₁ − x₁∂₂ − x₄∂₃ + x₃∂₄ on the first four coordinates."""
    x1, x2, x3, x4 = x
    r2 = x1 ** 2 + x2 ** 2 + x3 ** 2 + x4 ** 2
    mu = (HALF * (x1 ** 2 + x2 ** 2 - x3 ** 2 - x4 ** 2), x1 * x4 + x2 * x3, x1 * x3 - x2 * x4)
    e = algebra.e
    eta = (x2 * e(0) - x1 * e(1) - x4 * e(2) + x3 * e(3)) / r2
    gammas = (e(0, 1) + e(2, 3), e(0, 2) - e(1, 3), e(2, 1) + e(3, 0))
    components = [x2, -x1, -x4, x3] + [0] * (algebra.dim - 4)
    return r2, mu, eta, 1 / r2, gammas, algebra.vector(components)


def monopole_base(name: str, flat: bool) -> Tuple[FrameAlgebra, sympy.Expr, Form]:
    """R³ with coordinates μ₁..μ₃ and the monopole f = 1/(2|μ|), or f = 1 when ``flat``."""
    names = ["mu1", "mu2", "mu3"]
    base = coordinate_algebra(("m1", "m2", "m3"), names, name)
    if flat:
        return base, sympy.Integer(1), base.zero(2)
    mu = base.symbols(*names)
    radius = sympy.sqrt(sympy.Add(*(m ** 2 for m in mu)))
    deta = -(mu[0] * base.e(1, 2) + mu[1] * base.e(2, 0) + mu[2] * base.e(0, 1)) / (2 * radius ** 3)
    return base, 1 / (2 * radius), deta


def fibrewise_reduction() -> Tuple[FrameAlgebra, Dict[str, object], Dict[str, object]]:
    """Pointwise Hopf reduction of the conical Bryant-Salamon 4-form on one R⁴ fibre.

    Returns the algebra and the (gating, informational) residuals. ι_Xγᵢ
    equals dμᵢ, so the fibre term of X⌟Φ carries −R^{-9/5}dμ₁₂₃.
    """
    names = ["x1", "x2", "x3", "x4"]
    algebra = coordinate_algebra(("dx1", "dx2", "dx3", "dx4", "s1", "s2", "s3", "s4"), names, "fibrewise_bs")
    x = algebra.symbols(*names)
    r2, mu, _, _, gammas, X = hopf_fibration(algebra, x)
    r = sympy.sqrt(r2)
    R = r2 / 2
    e = algebra.e
    eps = (e(4, 5) - e(6, 7), e(4, 6) - e(7, 5), e(4, 7) - e(5, 6))
    fibre_volume = e(0, 1, 2, 3)
    Phi = (
        16 * r ** sympy.Rational(-8, 5) * fibre_volume
        + 20 * r ** sympy.Rational(2, 5) * sum((g.wedge(p) for g, p in zip(gammas, eps)), algebra.zero(4))
        + 25 * r ** sympy.Rational(12, 5) * e(4, 5, 6, 7)
    )
    dmu = [algebra.d_scalar(m) for m in mu]
    dnu = [g.interior(X) for g in gammas]
    dmu123 = wedge(*dmu)
    contraction = 2 ** sympy.Rational(11, 5) * (
        -R ** sympy.Rational(-9, 5) * dmu123
        + 5 * R ** sympy.Rational(1, 5) * sum((d.wedge(p) for d, p in zip(dmu, eps)), algebra.zero(3))
    )
    norm = sum(
        (c ** 2 * (4 * r ** sympy.Rational(-4, 5) if i < 4 else 5 * r ** sympy.Rational(6, 5)))
        for i, c in enumerate(X.components)
    )
    gating = {
        "fibre volume contraction": fibre_volume.interior(X) + dmu123 / r2,
        "contractions of gamma": [n - d for n, d in zip(dnu, dmu)],
        "contraction of Phi": Phi.interior(X) - contraction,
        "fibre norm": norm - 4 * r ** sympy.Rational(6, 5),
    }
    informational = {"printed orientation of the contractions": wedge(*dnu) + dmu123}
    return algebra, gating, informational


def gh_hopf() -> CatalogEntry:
    names = ["x1", "x2", "x3", "x4"]
    algebra = coordinate_algebra(("dx1", "dx2", "dx3", "dx4"), names, "gh_hopf")
    x = algebra.symbols(*names)
    r2, mu, eta, f, gammas, X = hopf_fibration(algebra, x)
    dmu = [algebra.d_scalar(m) for m in mu]

    entry = CatalogEntry("gh_hopf", "Gibbons-Hawking description of R⁴ through the Hopf map", algebra)
    entry.vectors["X"] = X
    entry.forms.update(eta=eta, gamma1=gammas[0], gamma2=gammas[1], gamma3=gammas[2])
    suites = ("gibbons-hawking",)
    entry.add(*algebra_claims(entry.id, "R4", algebra))

    def hopf_residuals() -> Dict[str, object]:
        out: Dict[str, object] = {}
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            out[f"gamma{i + 1}"] = gammas[i] - (eta.wedge(dmu[i]) - f * dmu[j].wedge(dmu[k]))
            out[f"gamma{i + 1} closed"] = gammas[i].d()
            out[f"moment map {i + 1}"] = X.apply(mu[i])
        out["eta of X"] = eta.interior(X).scalar_value() - 1
        out["radius"] = sum(m ** 2 for m in mu) - r2 ** 2 / 4
        return out

    keys = [f"gamma{i}" for i in (1, 2, 3)] + [f"gamma{i} closed" for i in (1, 2, 3)]
    keys += [f"moment map {i}" for i in (1, 2, 3)] + ["eta of X", "radius"]
    entry.add(
        *residual_claims(
            f"{entry.id}/hopf", lazy(hopf_residuals), keys, suites, algebra, "γᵢ = η∧dμᵢ − f dμⱼ∧dμₖ"
        )
    )

    for name, flat in (("monopole", False), ("flat", True)):
        base, monopole, deta = monopole_base(f"gh_hopf/{name}", flat)
        gh = gibbons_hawking(base, monopole, deta, name=f"gh_hopf/{name}/GH")
        entry.algebras[name] = gh.algebra
        entry.add(*algebra_claims(entry.id, f"{name} GH", gh.algebra))
        entry.add(
            value_claim(
                f"{entry.id}/{name}/monopole equation",
                "∗df = dη",
                suites,
                lambda ctx, base=base, monopole=monopole, deta=deta: base.d_scalar(monopole).hodge() - deta,
                base,
            ),
            *residual_claims(
                f"{entry.id}/{name}",
                lazy(gh.residuals),
                GH_KEYS,
                suites,
                gh.algebra,
                "hyperkähler triple of the Gibbons-Hawking metric",
            ),
        )

    fibre_algebra, gating, informational = fibrewise_reduction()
    entry.algebras["fibrewise"] = fibre_algebra
    entry.add(
        *residual_claims(
            f"{entry.id}/fibrewise",
            lambda: gating,
            sorted(gating),
            ("gibbons-hawking", "bryant-salamon"),
            fibre_algebra,
            "X⌟Φ for the conical Bryant-Salamon form on one fibre",
        ),
        *residual_claims(
            f"{entry.id}/fibrewise",
            lambda: informational,
            sorted(informational),
            ("gibbons-hawking", "bryant-salamon"),
            fibre_algebra,
            "dν₁₂₃ = −dμ₁₂₃ as printed",
            gating=False,
        ),
    )
    return entry
