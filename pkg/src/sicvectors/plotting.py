"""Figures for the generate report: a waveform of the vector sequence and the traversal histogram."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .vectors import CoverageReport, TestVectorSequence, initial_configuration  # noqa: E402


def plot_run(seq: TestVectorSequence, cov: CoverageReport, path, max_steps=200):
    """Render a two-panel PNG/PDF/SVG (by extension) and return the path."""
    init = initial_configuration(seq)
    names = list(seq.input_names) + [f"{s} (expected)" for s in seq.state_names]
    traces = [[init.current_inputs[i]] + [v.stimulus[i] for v in seq.vectors]
              for i in range(len(seq.input_names))]
    traces += [[init.current_states[j]] + [v.expected[j] for v in seq.vectors]
               for j in range(len(seq.state_names))]
    traces = [t[:max_steps + 1] for t in traces]

    fig, (ax_w, ax_h) = plt.subplots(
        2, 1, figsize=(10, 1.0 + 0.6 * len(names) + 2.5),
        gridspec_kw={"height_ratios": [max(len(names), 1), 3]})
    for row, (name, trace) in enumerate(zip(names, traces)):
        base = (len(names) - 1 - row) * 1.5
        ax_w.step(range(len(trace) + 1), [base + 0.8 * y for y in trace + [trace[-1]]], where="post",
                  color="C1" if "(expected)" in name else "C0", lw=1.2)
    ax_w.set_yticks([(len(names) - 1 - r) * 1.5 + 0.4 for r in range(len(names))])
    ax_w.set_yticklabels(names)
    ax_w.set_xlabel("step")
    shown = min(len(seq), max_steps)
    ax_w.set_title(f"{seq.cell_name}: {len(seq)} vectors" + (f" (first {shown} shown)" if shown < len(seq) else ""))
    ax_w.set_xlim(0, shown + 1)

    hist = cov.histogram
    counts = sorted(set(hist))
    ax_h.bar([str(c) for c in counts], [hist.count(c) for c in counts], color="C2")
    ax_h.set_xlabel("traversals per edge")
    ax_h.set_ylabel("edges")
    ax_h.set_title(f"{cov.edge_count} edges, walk length {cov.walk_length}, {cov.repetitions} repeated")

    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
    return path
