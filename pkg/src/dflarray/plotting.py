"""Matplotlib figures written next to the CSV outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "savefig.dpi": 150,
}


def _figure(width=4.5, height=None, nrows=1):
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    height = height or width * golden * nrows
    return plt.subplots(nrows=nrows, figsize=(width, height))


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    # No timestamps or version strings in the file.
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_power_curve(path, curve, estimate=None, label=None):
    """Power ratio vs angle, maximum circled."""
    with plt.rc_context(RC):
        fig, ax = _figure()
        deg = np.degrees(curve.gammas)
        ax.plot(deg, curve.ratios, label=label)
        if estimate is not None:
            ax.plot(estimate.gamma_hat_deg, curve.ratios[estimate.index], "o", mfc="none", ms=7)
        ax.set_xlim(0, 180)
        ax.set_xlabel(r"$\gamma$ [deg]")
        ax.set_ylabel(r"$P_y(\mathcal{S}=1)/P_0(\mathcal{S}=0)$")
        if label:
            ax.legend()
        return _save(fig, path)


def plot_sweep(path, axis_label, rows):
    """Estimated angle and excess attenuation against the swept value."""
    ok = [r for r in rows if not r.error]
    x = np.array([r.value for r in ok])
    with plt.rc_context(RC):
        fig, (ax1, ax2) = _figure(nrows=2)
        ax1.plot(x, [r.gamma_hat_deg for r in ok], ".-")
        ax1.axhline(90.0, color="0.5", lw=0.8, ls="--")
        ax1.set_ylabel(r"$\hat\gamma$ [deg]")
        ax2.plot(x, [r.attenuation_db for r in ok], ".-")
        ax2.set_ylabel(r"$A_{T,dB}$ [dB]")
        ax2.set_xlabel(axis_label)
        return _save(fig, path)


def plot_array_factor(path, gammas, planar, nonplanar):
    with plt.rc_context(RC):
        fig, ax = _figure()
        deg = np.degrees(gammas)
        ax.plot(deg, np.abs(planar), label="planar")
        ax.plot(deg, np.abs(nonplanar), "--", label="non-planar")
        ax.set_xlim(0, 180)
        ax.set_xlabel(r"$\gamma$ [deg]")
        ax.set_ylabel(r"$|F_a|$")
        ax.legend()
        return _save(fig, path)
