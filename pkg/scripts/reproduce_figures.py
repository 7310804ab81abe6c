#!/usr/bin/env python3
"""Reproduce the headline data sets as plot-ready CSV files.

Writes three files into --out-dir:

    populations.csv   joint probabilities of (marker outcome, path)
                      versus marker angle, ideal and noisy
    duality.csv       V, D and E versus marker angle, ideal sweep
    duality_noisy.csv the same sweep with the seeded noise model

With --plot, also renders PNG figures next to the CSV files
(requires matplotlib).
"""
import argparse
import math
from pathlib import Path

from whichway.cli import SweepConfig, run_sweep, sweep_angles
from whichway.interferometer import MarkerPair
from whichway.measurement import NoiseModel, joint_probabilities, subseed


def write_populations(out_dir, phis, phi_plus, noise):
    rows = ["phi,p_bp_0,p_bm_0,p_bp_1,p_bm_1,p_bp_0_noisy,p_bm_0_noisy,p_bp_1_noisy,p_bm_1_noisy"]
    for i, phi in enumerate(phis):
        markers = MarkerPair(phi_plus, phi_plus + phi)
        ideal = joint_probabilities(markers)
        point_noise = NoiseModel(
            miscalibration_fraction=noise.miscalibration_fraction,
            t2_a=noise.t2_a,
            t2_b=noise.t2_b,
            j_coupling=noise.j_coupling,
            rng_seed=subseed(noise.rng_seed, i, 2),
            shots=noise.shots,
        )
        noisy = joint_probabilities(markers, point_noise)
        values = (
            phi,
            ideal.p_bp_0, ideal.p_bm_0, ideal.p_bp_1, ideal.p_bm_1,
            noisy.p_bp_0, noisy.p_bm_0, noisy.p_bp_1, noisy.p_bm_1,
        )
        rows.append(",".join(f"{v:.9g}" for v in values))
    path = out_dir / "populations.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


def maybe_plot(out_dir, ideal, noisy):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    phis = [r.phi for r in ideal]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 8), sharex=True)
    ax1.plot(phis, [r.V for r in ideal], "b-", label="V (ideal)")
    ax1.plot(phis, [r.D_geo for r in ideal], "r-", label="D (ideal)")
    ax1.plot(phis, [r.E for r in ideal], "k--", label="E")
    ax1.plot(phis, [r.V for r in noisy], "bo", mfc="none", label="V (noisy)")
    ax1.plot(phis, [r.D_geo for r in noisy], "r*", label="D (noisy)")
    ax1.set_ylabel("V, D, E")
    ax1.legend(loc="center right", fontsize=8)
    ax2.axhline(1.0, color="k", lw=1)
    ax2.plot(phis, [r.duality_sum for r in noisy], "g^", label="noisy")
    ax2.set_ylim(0.75, 1.25)
    ax2.set_xlabel("marker angle (rad)")
    ax2.set_ylabel("D^2 + V^2")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_dir / "duality.png", dpi=150)
    print(f"wrote {out_dir / 'duality.png'}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="figures")
    parser.add_argument("--noise-miscal", type=float, default=0.05)
    parser.add_argument("--seed", type=int, default=22)
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    noise = NoiseModel(miscalibration_fraction=args.noise_miscal, rng_seed=args.seed)

    ideal = run_sweep(SweepConfig(output_path=str(out_dir / "duality.csv")))
    noisy = run_sweep(SweepConfig(noise=noise, output_path=str(out_dir / "duality_noisy.csv")))
    pop_path = write_populations(out_dir, sweep_angles(SweepConfig()), math.pi / 2, noise)

    worst = max(abs(r.duality_sum - 1.0) for r in noisy)
    print(f"wrote {out_dir / 'duality.csv'} ({len(ideal)} rows)")
    print(f"wrote {out_dir / 'duality_noisy.csv'} (worst |D^2+V^2-1| = {worst:.4f})")
    print(f"wrote {pop_path}")
    if args.plot:
        maybe_plot(out_dir, ideal, noisy)


if __name__ == "__main__":
    main()
