"""Run configuration: schema, validation, canonical hashing.

A run is described by a single JSON document:

    {
      "punctures":   {"alpha": [re, im], "beta": [re, im]},
      "annulus":     {"R": 1.5},
      "truncation":  {"N": 48, "samples": 4096},
      "construction":{"k": "auto" | odd int, "margin": 0.05},
      "multiplier":  {"m1": "2", "D": 13},
      "mesh":        {"n_r": 64, "n_theta": 256,
                      "boundary_inset": 0.02, "quotient": true},
      "tolerances":  {"res": 1e-12, "symmetry": 1e-10,
                      "conformality": 1e-10, "compat": 1e-8},
      "output":      {"report_path": null, "mesh_path": null}
    }

Every cross-constraint (puncture validity, R below the puncture moduli,
parity and degree of k, zero clearance of the multiplier) is validated
before any computation; violations are configuration errors, not check
failures.  The configuration hash is the SHA-256 of the canonical JSON
serialization, so any file with the same content hashes identically.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

import math

from .construction import CERTIFICATION_DEPTH, choose_k, zero_clearance_ok
from .errors import (
    ConfigError,
    InvalidPunctureError,
    MobiusminError,
    NoValidRootError,
    ParameterError,
    UnitAnnulusError,
)
from .multiplier import _exact_sqrt, coefficients, solve_m2
from .punctured_sphere import validate_punctures


@dataclass(frozen=True)
class Tolerances:
    res: float = 1e-12
    symmetry: float = 1e-10
    conformality: float = 1e-10
    compat: float = 1e-8


_STANDARD = {
    "punctures": {"alpha": [2.0, 0.0], "beta": [0.0, 3.0]},
    "annulus": {"R": 1.5},
    "truncation": {"N": 48, "samples": 4096},
    "construction": {"k": "auto", "margin": 0.05},
    "multiplier": {"m1": "2", "D": 13},
    "mesh": {"n_r": 64, "n_theta": 256, "boundary_inset": 0.02, "quotient": True},
    "tolerances": {
        "res": 1e-12,
        "symmetry": 1e-10,
        "conformality": 1e-10,
        "compat": 1e-8,
    },
    "output": {"report_path": None, "mesh_path": None},
}


@dataclass(frozen=True)
class RunConfig:
    alpha: complex
    beta: complex
    R: float
    band: int
    samples: int
    k: int | None  # None = auto
    margin: float
    m1: Fraction
    D: int | None
    mesh_n_r: int
    mesh_n_theta: int
    boundary_inset: float
    quotient: bool
    tolerances: Tolerances = field(default_factory=Tolerances)
    report_path: str | None = None
    mesh_path: str | None = None

    @classmethod
    def standard(cls) -> "RunConfig":
        return cls.from_dict(_STANDARD)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = set(_STANDARD)
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")

        def section(name: str) -> dict:
            base = dict(_STANDARD[name])
            override = doc.get(name, {})
            if not isinstance(override, dict):
                raise ConfigError(f"section {name!r} must be an object")
            bad = set(override) - set(base)
            if bad:
                raise ConfigError(f"unknown keys in {name!r}: {sorted(bad)}")
            base.update(override)
            return base

        pun = section("punctures")
        try:
            alpha = complex(*map(float, pun["alpha"]))
            beta = complex(*map(float, pun["beta"]))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"punctures must be [re, im] pairs: {exc}") from exc
        ann = section("annulus")
        tru = section("truncation")
        con = section("construction")
        mul = section("multiplier")
        mesh = section("mesh")
        tol = section("tolerances")
        out = section("output")
        k_raw = con["k"]
        if k_raw == "auto" or k_raw is None:
            k = None
        elif isinstance(k_raw, int) and not isinstance(k_raw, bool):
            k = k_raw
        else:
            raise ConfigError('construction.k must be "auto" or an integer')
        try:
            m1 = Fraction(str(mul["m1"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"multiplier.m1 is not a rational: {exc}") from exc
        d_raw = mul["D"]
        if d_raw is not None and (not isinstance(d_raw, int) or isinstance(d_raw, bool)):
            raise ConfigError("multiplier.D must be an integer or null")
        return cls(
            alpha=alpha,
            beta=beta,
            R=float(ann["R"]),
            band=int(tru["N"]),
            samples=int(tru["samples"]),
            k=k,
            margin=float(con["margin"]),
            m1=m1,
            D=d_raw,
            mesh_n_r=int(mesh["n_r"]),
            mesh_n_theta=int(mesh["n_theta"]),
            boundary_inset=float(mesh["boundary_inset"]),
            quotient=bool(mesh["quotient"]),
            tolerances=Tolerances(
                res=float(tol["res"]),
                symmetry=float(tol["symmetry"]),
                conformality=float(tol["conformality"]),
                compat=float(tol["compat"]),
            ),
            report_path=out["report_path"],
            mesh_path=out["mesh_path"],
        )

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")
        return cls.from_dict(doc)

    def with_overrides(self, k=None, quotient=None, report_path=None, mesh_path=None):
        cfg = self
        if k is not None:
            cfg = replace(cfg, k=k)
        if quotient is not None:
            cfg = replace(cfg, quotient=quotient)
        if report_path is not None:
            cfg = replace(cfg, report_path=report_path)
        if mesh_path is not None:
            cfg = replace(cfg, mesh_path=mesh_path)
        return cfg

    def to_dict(self) -> dict:
        return {
            "punctures": {
                "alpha": [self.alpha.real, self.alpha.imag],
                "beta": [self.beta.real, self.beta.imag],
            },
            "annulus": {"R": self.R},
            "truncation": {"N": self.band, "samples": self.samples},
            "construction": {
                "k": "auto" if self.k is None else self.k,
                "margin": self.margin,
            },
            "multiplier": {"m1": str(self.m1), "D": self.D},
            "mesh": {
                "n_r": self.mesh_n_r,
                "n_theta": self.mesh_n_theta,
                "boundary_inset": self.boundary_inset,
                "quotient": self.quotient,
            },
            "tolerances": {
                "res": self.tolerances.res,
                "symmetry": self.tolerances.symmetry,
                "conformality": self.tolerances.conformality,
                "compat": self.tolerances.compat,
            },
            "output": {"report_path": self.report_path, "mesh_path": self.mesh_path},
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode(
            "utf-8"
        )

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()

    def validate(self) -> None:
        """Raise ConfigError on any violated cross-constraint."""
        problems: list[str] = []
        try:
            validate_punctures(self.alpha, self.beta)
        except (InvalidPunctureError, UnitAnnulusError) as exc:
            problems.append(f"punctures: {exc}")
        else:
            if not 1.0 < self.R < min(abs(self.alpha), abs(self.beta)):
                problems.append(
                    "annulus.R must satisfy 1 < R < min(|alpha|, |beta|)"
                )
            elif self.band >= 1:
                # the truncated band must resolve the forms on the
                # certification region: coefficients decay like q^n with
                # q set by the nearest puncture, so the tail at band N
                # must sit below the conformality tolerance
                q_core = self.R**CERTIFICATION_DEPTH * max(
                    1.0 / abs(self.alpha), 1.0 / abs(self.beta)
                )
                if q_core**self.band > self.tolerances.conformality:
                    needed = math.ceil(
                        math.log(self.tolerances.conformality) / math.log(q_core)
                    )
                    problems.append(
                        f"truncation.N = {self.band} cannot resolve the forms "
                        f"to tolerance {self.tolerances.conformality:g} for "
                        f"these punctures; need N >= {needed}"
                    )
        if self.band < 1:
            problems.append("truncation.N must be >= 1")
        if self.samples < 4 * self.band or self.samples & (self.samples - 1):
            problems.append("truncation.samples must be a power of two >= 4*N")
        if not 0.0 < self.margin < 1.0:
            problems.append("construction.margin must lie in (0, 1)")
        if self.k is not None:
            if self.k % 2 == 0:
                problems.append(f"construction.k = {self.k} must be odd")
            elif self.k <= 2:
                problems.append(
                    f"construction.k = {self.k} must exceed the multiplier degree 2"
                )
        if self.mesh_n_r < 2:
            problems.append("mesh.n_r must be >= 2")
        if self.mesh_n_theta < 8 or self.mesh_n_theta % 2:
            problems.append("mesh.n_theta must be an even integer >= 8")
        if not 0.0 < self.boundary_inset < 0.5:
            problems.append("mesh.boundary_inset must lie in (0, 0.5)")
        for name in ("res", "symmetry", "conformality", "compat"):
            if getattr(self.tolerances, name) <= 0:
                problems.append(f"tolerances.{name} must be positive")

        # multiplier parameters and zero clearance
        try:
            root_plus, _ = solve_m2(self.m1)
        except NoValidRootError as exc:
            problems.append(f"multiplier: {exc}")
            root_plus = None
        if root_plus is not None:
            if self.D is not None:
                lead = self.m1 * self.m1 - 1
                _, d_expected = _exact_sqrt(self.m1 * self.m1 + lead * lead)
                if self.D != d_expected:
                    problems.append(
                        f"multiplier.D = {self.D} does not match the "
                        f"square-free discriminant part {d_expected}"
                    )
            try:
                params = coefficients(self.m1, root_plus)
            except MobiusminError as exc:
                problems.append(f"multiplier: {exc}")
                params = None
            if params is not None and not problems:
                try:
                    if self.k is None:
                        k = choose_k(
                            params.degree, self.R, params.zero_moduli, self.margin
                        )
                    else:
                        k = self.k
                except ParameterError as exc:
                    problems.append(f"construction: {exc}")
                else:
                    rho = self.R ** (1.0 / k)
                    if not zero_clearance_ok(rho, params.zero_moduli, self.margin):
                        problems.append(
                            f"multiplier zeros do not clear A({rho:.6g}) with "
                            f"margin {self.margin}"
                        )
                    if rho * (1.0 - self.boundary_inset) <= 1.0:
                        problems.append(
                            f"mesh.boundary_inset = {self.boundary_inset} leaves "
                            f"no mesh domain in A({rho:.6g}); need inset < "
                            f"{1.0 - 1.0 / rho:.3g}"
                        )
        if problems:
            raise ConfigError("; ".join(problems))
