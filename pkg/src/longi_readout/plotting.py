"""Figure rendering for the CLI report path.

Every report renders one PNG next to its delimited output. Rendering is
headless (Agg) and deterministic apart from the matplotlib version string
embedded in the PNG header.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def waveform_figure(path, t, curves: dict, ylabel="coupling (rad/s)", title=""):
    """Overlay of named waveforms vs time."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, y in curves.items():
        ax.plot(t / t[-1], y, label=label)
    ax.set_xlabel("t / t_f")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def trajectory_figure(path, t, alpha_e, alpha_g, separation, title=""):
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    axes[0].plot(alpha_e.real, alpha_e.imag, label="excited branch")
    axes[0].plot(alpha_g.real, alpha_g.imag, label="ground branch")
    axes[0].set_xlabel("Re <a>")
    axes[0].set_ylabel("Im <a>")
    axes[0].legend(fontsize=8)
    axes[0].grid(alpha=0.3)
    axes[1].plot(t / t[-1], separation)
    axes[1].set_xlabel("t / t_f")
    axes[1].set_ylabel("pointer separation d")
    axes[1].grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    return _finish(fig, path)


def snr_figure(path, taus, curves: dict, t_f, title=""):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, y in curves.items():
        ax.plot(taus / t_f, y, label=label)
    ax.set_xlabel("tau / t_f")
    ax.set_ylabel("SNR")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def sweep_figure(path, t, columns: dict, xlabel="t / t_f", ylabel="", title=""):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, y in columns.items():
        ax.plot(t, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def ga_figure(path, stats, t, waveform, title=""):
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    axes[0].plot(stats[:, 0], stats[:, 1], label="best")
    axes[0].plot(stats[:, 0], stats[:, 2], label="mean", alpha=0.6)
    axes[0].set_xlabel("generation")
    axes[0].set_ylabel("penalized fitness")
    axes[0].legend(fontsize=8)
    axes[0].grid(alpha=0.3)
    axes[1].plot(t / t[-1], waveform)
    axes[1].set_xlabel("t / t_f")
    axes[1].set_ylabel("optimized coupling (rad/s)")
    axes[1].grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    return _finish(fig, path)


def circuit_figure(path, phis, spectrum, alphas, title=""):
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for k in range(spectrum.shape[1]):
        axes[0].plot(phis, spectrum[:, k] - spectrum[:, 0], label=f"level {k}")
    axes[0].set_xlabel("SQUID flux (rad)")
    axes[0].set_ylabel("E - E0 (rad/s)")
    axes[0].legend(fontsize=8)
    axes[0].grid(alpha=0.3)
    for k, lab in enumerate(["alpha_x", "alpha_y", "alpha_z", "alpha_I"]):
        axes[1].plot(phis, alphas[:, k], label=lab)
    axes[1].set_xlabel("SQUID flux (rad)")
    axes[1].set_ylabel("Pauli coefficient")
    axes[1].legend(fontsize=8)
    axes[1].grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    return _finish(fig, path)


def phase_plane_figure(path, g, gd, omega_r, u_max, title=""):
    fig, ax = plt.subplots(figsize=(5.2, 4.6))
    ax.plot(g, gd / omega_r)
    ax.scatter([0.0], [0.0], marker="o", color="k", zorder=3)
    ax.scatter([u_max], [0.0], marker="+", color="r", zorder=3)
    ax.set_xlabel("g")
    ax.set_ylabel("g' / omega_r")
    ax.set_aspect("equal")
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    return _finish(fig, path)
