"""Command-line driver: verification pipeline, mesh export, exact
multiplier checks, completeness probes, coefficient dumps.

Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
2 = configuration invalid.  A mesh is never written on a nonzero exit.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import construction, immersion, meshing, multiplier, punctured_sphere
from .config import RunConfig
from .errors import (
    ConfigError,
    MobiusminError,
    NoValidRootError,
    ParameterError,
)
from .multiplier import _exact_sqrt
from .report import RunReport
from .weierstrass import WeierstrassTriple, conformality_defect

# Fixed thresholds of structural self-checks (not user-tunable: they state
# how well two independent evaluation routes of the same quantity agree).
ORACLE_AGREEMENT_TOL = 1e-10  # DFT vs partial-fraction coefficients
INVOLUTION_TOL = 1e-12  # pointwise involution identities of the base data
METRIC_MATCH_TOL = 1e-9  # density ratio vs direct |f|
PERIOD_TOL = 1e-10  # closed-loop quadrature of exact forms
HARMONIC_H = 2e-3  # coarse step of the Laplacian refinement pair
HARMONIC_RATIO = (3.0, 5.0)  # admissible defect ratio for h -> h/2
HARMONIC_RESIDUAL_FRACTION = 0.1  # extrapolated residual / stencil defect
GAUSS_EPS = 1e-9  # slack for image containment and clearances


@dataclass
class PipelineArtifacts:
    sphere: punctured_sphere.PuncturedSphereData
    base: tuple
    multiplier_params: multiplier.MultiplierParams
    construction_params: construction.ConstructionParams
    psi: tuple
    imm: immersion.ImmersionData
    gauss: immersion.GaussReport


def _exact_str(value) -> str:
    return f"{value} (exact)"


def execute_verify(config: RunConfig) -> tuple[RunReport, PipelineArtifacts]:
    """Run the full pipeline and certify every checkable hypothesis.

    Raises ConfigError for invalid configurations; check failures are
    recorded in the report, never raised.
    """
    config.validate()
    report = RunReport(title="verify", config_hash=config.digest())
    report.add_param("config", config.canonical_bytes().decode("utf-8"))
    tol = config.tolerances

    sphere = punctured_sphere.PuncturedSphereData(
        punctured_sphere.validate_punctures(config.alpha, config.beta)
    )
    base = punctured_sphere.restrict_to_annulus(
        sphere, config.R, config.band, config.samples
    )
    analytic = punctured_sphere.analytic_coefficients(sphere, config.band)
    coeff_diff = max(
        float(np.max(np.abs(form.phi.coeffs - series.coeffs)))
        for form, series in zip(base, analytic)
    )
    report.add_check(
        "coefficient_oracles",
        "Laurent coefficients of phi_j: boundary DFT = partial fractions",
        coeff_diff,
        ORACLE_AGREEMENT_TOL,
        coeff_diff <= ORACLE_AGREEMENT_TOL,
    )

    inv_samples = construction.certification_samples(
        1.0 / config.R, config.R, n_r=5, n_theta=20, depth=0.5
    )
    inv_defect = punctured_sphere.involution_defect(sphere, inv_samples)
    report.add_check(
        "base_involution",
        "g(-1/conj(z)) = -1/conj(g(z)); I*(eta) = -conj(eta g^2)",
        inv_defect,
        INVOLUTION_TOL,
        inv_defect <= INVOLUTION_TOL,
    )

    base_sym = max(form.symmetry_defect() for form in base)
    report.add_check(
        "base_form_symmetry",
        "I*(Phi_j) = conj(Phi_j): a_{-n} = (-1)^(n+1) conj(a_n)",
        base_sym,
        tol.symmetry,
        base_sym <= tol.symmetry,
    )

    base_samples = construction.certification_samples(1.0 / config.R, config.R)
    base_conf = conformality_defect(WeierstrassTriple.from_forms(base), base_samples)
    report.add_check(
        "base_conformality",
        "Phi_1^2 + Phi_2^2 + Phi_3^2 = 0",
        base_conf,
        tol.conformality,
        base_conf <= tol.conformality,
    )

    root_plus, _ = multiplier.solve_m2(config.m1)
    params = multiplier.coefficients(config.m1, root_plus)
    report.add_param("m1", str(params.m1))
    report.add_param("m2", str(params.m2))
    report.add_check(
        "multiplier_poles",
        "f is a Laurent polynomial with poles only at 0 and infinity",
        _exact_str(f"b_2 = b_-2 = {params.coefficient(2)}"),
        "b_2 != 0",
        params.coefficient(2) != 0 and params.coefficient(-2) != 0,
    )
    sym_exact = all(
        params.coefficient(-n) == (-1) ** n * params.coefficient(n) for n in (0, 1, 2)
    )
    report.add_check(
        "multiplier_symmetry",
        "f(-1/conj(z)) = conj(f(z)): b_{-n} = (-1)^n conj(b_n)",
        _exact_str("holds" if sym_exact else "violated"),
        "exact",
        sym_exact,
    )
    circle_free = params.unit_circle_zero_free()
    report.add_check(
        "multiplier_unit_circle",
        "f(z) != 0 on |z| = 1 (no zero equals +-1)",
        _exact_str("zero-free" if circle_free else "zero on circle"),
        "exact",
        circle_free,
    )
    report.add_check(
        "multiplier_residue",
        "Residue(f(z) dz/z, 0) = (1 - m1^2)(1 - m2^2) - 2 m1 m2 = 0",
        _exact_str(params.residue),
        "exact",
        params.residue == 0,
    )

    k = config.k
    if k is None:
        k = construction.choose_k(params.degree, config.R, params.zero_moduli, config.margin)
    rho = config.R ** (1.0 / k)
    report.add_param("k", k)
    report.add_param("R", config.R)
    report.add_param("rho", rho)
    clear_ok = construction.zero_clearance_ok(rho, params.zero_moduli, config.margin)
    report.add_check(
        "cover_exponent",
        "k odd, k > deg f, zeros of f clear the closed annulus A(R^(1/k))",
        f"k = {k}",
        f"margin {config.margin}",
        (k % 2 == 1) and k > params.degree and clear_ok,
    )

    c = multiplier.annulus_bounds(params, rho)
    report.add_param("c", c)
    report.add_check(
        "multiplier_bounds",
        "1/c < |f(z)| < c on the closed annulus A(R^(1/k))",
        c,
        "c > 1",
        c > 1.0,
    )

    psi = construction.build_psi(base, params, k)
    verification = construction.verify_psi(
        psi,
        res_rtol=tol.res,
        symmetry_tol=tol.symmetry,
        conformality_tol=tol.conformality,
    )
    report.add_check(
        "psi_exactness",
        "Residue(Psi_j, 0) = 0, j = 1, 2, 3: each Psi_j is exact",
        max(verification.residues_rel),
        tol.res,
        verification.residue_ok,
    )
    report.add_check(
        "psi_form_symmetry",
        "I*(Psi_j) = conj(Psi_j) (k odd preserves the coefficient symmetry)",
        max(verification.symmetry_defects),
        tol.symmetry,
        verification.symmetry_ok,
    )
    report.add_check(
        "psi_conformality",
        "Psi_1^2 + Psi_2^2 + Psi_3^2 = 0",
        verification.conformality,
        tol.conformality,
        verification.conformality_ok,
    )
    report.add_check(
        "psi_regularity",
        "|Psi_1|^2 + |Psi_2|^2 + |Psi_3|^2 != 0",
        verification.regularity,
        "> 0",
        verification.regularity_ok,
    )

    psi_samples = construction.certification_samples(1.0 / rho, rho)
    metric = construction.metric_comparison(psi, base, k, psi_samples, c, params=params)
    report.add_check(
        "metric_ratio_bounds",
        "ds_Psi = |f| T_k*(ds_Phi): all density ratios lie in (1/c, c)",
        f"[{metric.min_ratio:.6e}, {metric.max_ratio:.6e}]",
        f"(1/{c:.6e}, {c:.6e})",
        metric.within_bounds,
    )
    report.add_check(
        "metric_ratio_multiplier",
        "lambda_Psi(z) = |f(z)| k |z|^(k-1) lambda_Phi(z^k)",
        metric.max_multiplier_deviation,
        METRIC_MATCH_TOL,
        metric.max_multiplier_deviation <= METRIC_MATCH_TOL,
    )

    periods = immersion.unit_circle_periods(psi)
    worst_period = float(np.max(np.abs(periods)))
    report.add_check(
        "periods",
        "closed-loop integral of Psi_j around |z| = 1 vanishes (no real periods)",
        worst_period,
        PERIOD_TOL,
        worst_period <= PERIOD_TOL,
    )

    imm = immersion.integrate(psi, res_rtol=tol.res)
    base_norm = float(np.linalg.norm(imm.position(1.0 + 0j)))
    report.add_check(
        "base_point",
        "X(z) = Re integral_1^z (Psi_1, Psi_2, Psi_3); X(1) = 0",
        base_norm,
        "0 (exact)",
        base_norm == 0.0,
    )

    pairs = immersion.paired_samples(1.0 / rho, rho)
    compat = immersion.involution_compat_defect(imm, pairs)
    report.add_check(
        "quotient_compat",
        "X(-1/conj(z)) = X(z): the immersion descends to A(rho)/<I>",
        compat,
        tol.compat,
        compat <= tol.compat,
    )

    # the stencil arms must fit inside the annulus even for thin covers;
    # much smaller steps would push the h^2 signal below the series-
    # evaluation rounding floor
    h = min(HARMONIC_H, (rho - 1.0 / rho) / 10.0)
    grid = immersion.harmonicity_grid(1.0 / rho, rho, h)
    defect_h = immersion.harmonicity_defect(imm, h, grid)
    defect_h2 = immersion.harmonicity_defect(imm, h / 2.0, grid)
    ratio = defect_h / defect_h2 if defect_h2 > 0 else float("inf")
    report.add_check(
        "harmonicity_order",
        "five-point Laplacian of X shrinks at second order when h halves",
        ratio,
        f"[{HARMONIC_RATIO[0]}, {HARMONIC_RATIO[1]}]",
        HARMONIC_RATIO[0] <= ratio <= HARMONIC_RATIO[1],
    )
    # the plain defect magnitude tracks the configuration's quartic
    # derivative scale; the extrapolated residual cancels that term, so
    # its fraction of the defect certifies harmonicity itself, uniformly
    # across configurations and data amplitudes
    residual = immersion.harmonicity_residual(imm, h, grid)
    if defect_h2 > 0:
        fraction = residual / defect_h2
    else:
        fraction = 0.0 if residual == 0 else float("inf")
    report.add_check(
        "harmonicity_size",
        "components of X are harmonic: the Richardson-extrapolated Laplacian "
        "residual is a vanishing fraction of the stencil defect",
        fraction,
        HARMONIC_RESIDUAL_FRACTION,
        fraction <= HARMONIC_RESIDUAL_FRACTION,
    )

    gauss = immersion.gauss_report(sphere.config, k, config.R, psi=psi)
    report.add_check(
        "gauss_classes",
        "omitted set {alpha, beta, -1/conj(alpha), -1/conj(beta)} pairs into "
        "2 antipodal classes",
        gauss.n_projective_classes,
        2,
        gauss.n_projective_classes == 2,
    )
    lo, hi = gauss.image_modulus_range
    report.add_check(
        "gauss_containment",
        "image of the Gauss map z -> z^k on A(rho) lies in the closed A(R)",
        f"|g| in [{lo:.9f}, {hi:.9f}]",
        f"[1/R - {GAUSS_EPS}, R + {GAUSS_EPS}]",
        gauss.image_in_closed_annulus,
    )
    clear_strs = ", ".join(
        f"{p.point}: {p.clearance:.6g}" for p in gauss.omitted
    )
    report.add_check(
        "gauss_clearance",
        "sampled Gauss values keep the analytic clearance to every omitted point",
        clear_strs,
        f"clearance - {GAUSS_EPS}",
        gauss.clearances_respected,
    )

    artifacts = PipelineArtifacts(
        sphere=sphere,
        base=base,
        multiplier_params=params,
        construction_params=construction.ConstructionParams(
            k=k, R=config.R, rho=rho, c=c, margin=config.margin
        ),
        psi=psi,
        imm=imm,
        gauss=gauss,
    )
    return report, artifacts


def run_lemma2(m1_text: str, d: Optional[int]) -> tuple[RunReport, bool]:
    """Exact verification of the four multiplier identities.

    Returns (report, solvable); ``solvable`` is False when the quadratic
    for m2 has no usable root (reported, exit 1).
    """
    try:
        m1 = Fraction(m1_text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"m1 is not a rational: {exc}") from exc
    report = RunReport(title="lemma2", config_hash="-")
    report.add_param("m1", str(m1))
    try:
        plus, minus = multiplier.solve_m2(m1)
    except NoValidRootError as exc:
        report.add_check(
            "m2_roots",
            "roots of (m1^2 - 1) m2^2 - 2 m1 m2 + (1 - m1^2) = 0",
            f"no-valid-root: {exc}",
            "two exact roots",
            False,
        )
        return report, False
    if d is not None:
        lead = m1 * m1 - 1
        _, d_expected = _exact_sqrt(m1 * m1 + lead * lead)
        if d != d_expected:
            raise ConfigError(
                f"D = {d} does not match the square-free discriminant part {d_expected}"
            )
    report.add_param("m2_plus", str(plus))
    report.add_param("m2_minus", str(minus))
    both_zero = all(
        multiplier.residue_invariant(m1, root) == 0 for root in (plus, minus)
    )
    report.add_check(
        "m2_roots",
        "residue invariant vanishes at both exact roots",
        _exact_str("both roots"),
        "exact",
        both_zero,
    )
    params = multiplier.coefficients(m1, plus)
    report.add_param(
        "f_coefficients",
        "; ".join(f"b_{n} = {params.coefficient(n)}" for n in range(-2, 3)),
    )
    report.add_check(
        "poles_only_0_inf",
        "f is a Laurent polynomial with poles only at 0 and infinity",
        _exact_str(f"b_2 = b_-2 = {params.coefficient(2)}"),
        "b_2 != 0",
        params.coefficient(2) != 0,
    )
    sym = all(
        params.coefficient(-n) == (-1) ** n * params.coefficient(n) for n in (0, 1, 2)
    )
    report.add_check(
        "conjugation_symmetry",
        "f(-1/conj(z)) = conj(f(z)): b_{-n} = (-1)^n conj(b_n)",
        _exact_str("holds" if sym else "violated"),
        "exact",
        sym,
    )
    circle = params.unit_circle_zero_free()
    report.add_check(
        "unit_circle_zero_free",
        "f(z) != 0 on |z| = 1: zeros {m1, m2, -1/m1, -1/m2} avoid +-1",
        _exact_str(", ".join(str(z) for z in params.zeros)),
        "exact",
        circle,
    )
    report.add_check(
        "residue_zero",
        "Residue(f(z) dz/z, 0) = (1 - m1^2)(1 - m2^2) - 2 m1 m2 = 0",
        _exact_str(params.residue),
        "exact",
        params.residue == 0,
    )
    return report, True


def run_mesh(config: RunConfig) -> tuple[RunReport, Optional[meshing.Mesh]]:
    """Verify first; on success build (and certify) the requested mesh."""
    report, artifacts = execute_verify(config)
    if not report.overall:
        return report, None
    report.title = "mesh"
    cparams = artifacts.construction_params
    metadata = {
        "config_hash": config.digest(),
        "k": str(cparams.k),
        "R": repr(cparams.R),
        "rho": repr(cparams.rho),
        "n_r": str(config.mesh_n_r),
        "n_theta": str(config.mesh_n_theta),
        "boundary_inset": repr(config.boundary_inset),
        "quotient": str(config.quotient).lower(),
        "tol_res": repr(config.tolerances.res),
        "tol_symmetry": repr(config.tolerances.symmetry),
        "tol_conformality": repr(config.tolerances.conformality),
        "tol_compat": repr(config.tolerances.compat),
    }
    mesh = meshing.build_mesh(
        artifacts.imm,
        config.mesh_n_r,
        config.mesh_n_theta,
        boundary_inset=config.boundary_inset,
        quotient=config.quotient,
        metadata=metadata,
    )
    orientable = meshing.is_orientable(mesh.faces)
    if config.quotient:
        gap = mesh.max_quotient_gap()
        report.add_check(
            "mesh_gluing",
            "identified boundary vertices X(e^(i theta)) = X(-e^(i theta))",
            gap,
            config.tolerances.compat,
            gap <= config.tolerances.compat,
        )
        report.add_check(
            "mesh_orientability",
            "the quotient A(rho)/<I> is one-sided: orientation propagation fails",
            "nonorientable" if not orientable else "orientable",
            "nonorientable",
            not orientable,
        )
    else:
        report.add_check(
            "mesh_orientability",
            "the full annulus mesh is two-sided: orientation propagation succeeds",
            "orientable" if orientable else "nonorientable",
            "orientable",
            orientable,
        )
    if not report.overall:
        return report, None
    return report, mesh


def run_probe(
    config: RunConfig, target: complex, epsilons: list[float]
) -> tuple[str, str]:
    """Completeness probe toward a target point; returns (text, verdict)."""
    sphere = punctured_sphere.PuncturedSphereData(
        punctured_sphere.validate_punctures(config.alpha, config.beta)
    )
    lengths = punctured_sphere.completeness_probe(sphere, target, epsilons)
    diffs = [b - a for a, b in zip(lengths, lengths[1:])]
    lines = [f"probe target: {target}"]
    for e, L in zip(epsilons, lengths):
        lines.append(f"L({e:.0e}) = {L:.9f}")
    for i, d in enumerate(diffs):
        lines.append(f"decade_difference {i + 1}: {d:.9f}")
    if diffs and min(diffs) > 0 and max(diffs) / min(diffs) <= 1.10:
        verdict = "log-divergent"
    elif diffs and diffs[-1] <= 0.5 * max(diffs[0], 1e-300):
        verdict = "converges"
    else:
        verdict = "inconclusive"
    lines.append(f"verdict: {verdict}")
    return "\n".join(lines) + "\n", verdict


def run_coeffs(config: RunConfig) -> str:
    """Dump the restricted Laurent coefficients and the multiplier band."""
    config.validate()
    sphere = punctured_sphere.PuncturedSphereData(
        punctured_sphere.validate_punctures(config.alpha, config.beta)
    )
    base = punctured_sphere.restrict_to_annulus(
        sphere, config.R, config.band, config.samples
    )
    root_plus, _ = multiplier.solve_m2(config.m1)
    params = multiplier.coefficients(config.m1, root_plus)
    lines = [
        "mobiusmin coefficients",
        f"config_hash: {config.digest()}",
        f"param R: {config.R!r}",
        f"param N: {config.band}",
        f"param samples: {config.samples}",
    ]
    for j, form in enumerate(base, start=1):
        series = form.phi
        for n in range(-series.band, series.band + 1):
            a = series.coeff(n)
            lines.append(f"series phi{j} n={n} re={a.real:.17g} im={a.imag:.17g}")
    for n in range(-params.degree, params.degree + 1):
        lines.append(f"series f n={n} exact={params.coefficient(n)}")
    return "\n".join(lines) + "\n"


def _load_config(args) -> RunConfig:
    if getattr(args, "config", None):
        config = RunConfig.from_file(args.config)
    else:
        config = RunConfig.standard()
    k = getattr(args, "k", None)
    quotient = None
    if getattr(args, "quotient", None) is not None:
        text = args.quotient.lower()
        if text not in ("true", "false"):
            raise ConfigError("--quotient takes true or false")
        quotient = text == "true"
    return config.with_overrides(k=k, quotient=quotient)


def _parse_target(config: RunConfig, text: str) -> complex:
    named = {
        "alpha": config.alpha,
        "beta": config.beta,
        "alpha_star": -1.0 / config.alpha.conjugate(),
        "beta_star": -1.0 / config.beta.conjugate(),
    }
    if text in named:
        return named[text]
    try:
        re_text, im_text = text.split(",")
        return complex(float(re_text), float(im_text))
    except ValueError as exc:
        raise ConfigError(
            f"target must be alpha|beta|alpha_star|beta_star or 're,im': {text!r}"
        ) from exc


def cmd_lemma2(args) -> int:
    report, solvable = run_lemma2(args.m1, args.d)
    sys.stdout.write(report.render())
    if args.out:
        report.write(args.out)
    return 0 if (solvable and report.overall) else 1


def cmd_verify(args) -> int:
    config = _load_config(args)
    report, _ = execute_verify(config)
    sys.stdout.write(report.render())
    out = args.out or config.report_path
    if out:
        report.write(out)
    return 0 if report.overall else 1


def cmd_mesh(args) -> int:
    config = _load_config(args)
    report, mesh = run_mesh(config)
    sys.stdout.write(report.render())
    if config.report_path:
        report.write(config.report_path)
    if mesh is None:
        sys.stderr.write("verification failed; mesh not written\n")
        return 1
    out = args.out or config.mesh_path or "surface.obj"
    meshing.export_obj(mesh, out)
    sys.stdout.write(f"mesh written: {out}\n")
    return 0


def cmd_probe(args) -> int:
    config = _load_config(args)
    config.validate()
    target = _parse_target(config, args.target)
    epsilons = [float(t) for t in args.epsilons.split(",")]
    try:
        text, _ = run_probe(config, target, epsilons)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    sys.stdout.write(text)
    return 0


def cmd_coeffs(args) -> int:
    config = _load_config(args)
    text = run_coeffs(config)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobiusmin",
        description=(
            "Construct and certify minimal Moebius strips whose Gauss map "
            "omits two points of the projective plane."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "lemma2", help="exact checks of the degree-two multiplier identities"
    )
    p.add_argument("--m1", default="2", help="rational first parameter (default 2)")
    p.add_argument("--d", type=int, default=None, help="expected radicand (optional)")
    p.add_argument("--out", default=None, help="also write the report here")
    p.set_defaults(func=cmd_lemma2)

    p = sub.add_parser("verify", help="run the full verification pipeline")
    p.add_argument("--config", default=None, help="JSON config (default: built-in)")
    p.add_argument("--out", default=None, help="also write the report here")
    p.add_argument("--k", type=int, default=None, help="override the cover exponent")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mesh", help="verify, then export the surface mesh as OBJ")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="OBJ output path")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--quotient", default=None, help="true|false override")
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("probe", help="metric length probe toward a puncture")
    p.add_argument("--config", default=None)
    p.add_argument(
        "--target",
        required=True,
        help="alpha|beta|alpha_star|beta_star or 're,im'",
    )
    p.add_argument(
        "--epsilons",
        default="1e-2,1e-3,1e-4,1e-5",
        help="comma-separated decreasing stop distances",
    )
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("coeffs", help="dump Laurent coefficients as text")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_coeffs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except MobiusminError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
