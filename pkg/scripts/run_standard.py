#!/usr/bin/env python3
"""Run the full pipeline on the standard configuration and export both
meshes plus the verification report into out/."""

import pathlib
import sys

from mobiusmin import meshing
from mobiusmin.cli import execute_verify, run_mesh
from mobiusmin.config import RunConfig


def main() -> int:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "out"
    out_dir.mkdir(exist_ok=True)
    config = RunConfig.standard()

    report, artifacts = execute_verify(config)
    (out_dir / "verify_report.txt").write_text(report.render())
    print(report.render())
    if not report.overall:
        print("verification failed; no meshes written", file=sys.stderr)
        return 1

    for quotient, name in ((True, "moebius_strip.obj"), (False, "annulus.obj")):
        mesh_report, mesh = run_mesh(config.with_overrides(quotient=(quotient)))
        assert mesh is not None
        meshing.export_obj(mesh, out_dir / name)
        orientable = meshing.is_orientable(mesh.faces)
        print(
            f"{name}: {len(mesh.vertices)} vertices, {len(mesh.faces)} faces, "
            f"{'orientable' if orientable else 'nonorientable'}"
        )
    print(f"outputs in {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
