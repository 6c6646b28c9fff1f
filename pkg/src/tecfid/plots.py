"""Figure rendering for the report commands (headless, file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
}


def render_sweep(rows, n: int, path) -> str:
    """Fidelity and cost panels of a depolarizing sweep; returns the path."""
    q = [r["q"] for r in rows]
    with plt.rc_context(_RC):
        fig, (ax_f, ax_c) = plt.subplots(2, 1, sharex=True, figsize=(6.0, 6.0))
        ax_f.plot(q, [r["fmin_closed"] for r in rows], "-", color="C0", label="closed form")
        ax_f.plot(q, [r["fmin_solver"] for r in rows], "x", color="C1", label="solver")
        ax_f.plot(
            q,
            [r["no_entanglement_fidelity"] for r in rows],
            "--",
            color="C2",
            label="no-ancilla fidelity",
        )
        ax_f.set_ylabel("worst-case fidelity")
        ax_f.legend()
        ax_c.plot(q, [r["cost_closed"] for r in rows], "-", color="C0", label="closed form")
        ax_c.plot(q, [r["cost_solver"] for r in rows], "x", color="C1", label="solver")
        ax_c.set_xlabel("q")
        ax_c.set_ylabel("cost angle")
        ax_c.legend()
        fig.suptitle(f"depolarizing channel, n = {n}")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return str(path)


def render_suite(records, tol: float, path) -> str:
    """Identity-gap scatter and histogram for a random-channel suite."""
    gaps = [max(r["abs_gap"], 1e-18) for r in records]
    idx = list(range(len(records)))
    ok = [r["passed"] for r in records]
    with plt.rc_context(_RC):
        fig, (ax_s, ax_h) = plt.subplots(2, 1, figsize=(6.0, 6.0))
        ax_s.semilogy(
            [i for i, o in zip(idx, ok) if o],
            [g for g, o in zip(gaps, ok) if o],
            ".",
            color="C0",
            label="pass",
        )
        bad_i = [i for i, o in zip(idx, ok) if not o]
        if bad_i:
            ax_s.semilogy(
                bad_i, [g for g, o in zip(gaps, ok) if not o], "x", color="C3", label="fail"
            )
        ax_s.axhline(tol, color="C3", linestyle="--", linewidth=1, label="tolerance")
        ax_s.set_xlabel("trial index")
        ax_s.set_ylabel("|fmin - clamped cos|")
        ax_s.legend()
        ax_h.hist([float(f"{g:.6g}") for g in gaps], bins=40, color="C0")
        ax_h.set_xscale("log")
        ax_h.set_xlabel("identity gap")
        ax_h.set_ylabel("count")
        fig.suptitle("worst-case fidelity vs clamped cosine of the cost")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return str(path)
