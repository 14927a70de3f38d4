"""Serialisation of analysis results to JSON, CSV and plain text.

Reports carry no timing or host information, keys have a fixed order and
floats use Python's shortest round-trip repr, so identical runs produce
identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .numerics import ball_volume, paper_ball_volume


def _num(x):
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else None


def _check(c):
    return {"subject": list(c.subject), "value": _num(c.value), "bound": _num(c.bound),
            "stderr": _num(c.stderr), "margin": _num(c.margin), "passed": bool(c.passed)}


def _summary(checks):
    fails = [c for c in checks if not c.passed]
    worst = min(checks, key=lambda c: c.margin, default=None)
    return {
        "checked": len(checks),
        "failed": len(fails),
        "passed": not fails,
        "min_margin": _num(min((c.margin for c in checks), default=None)),
        "worst": _check(worst) if worst is not None else None,
        "failures": [_check(c) for c in fails],
    }


def _record(r):
    return {
        "j": r.iteration, "size": len(r.frontier), "vol_Ij": _num(r.vol_Ij),
        "vol_Ij_stderr": _num(r.vol_Ij_stderr), "vol_neighborhood": _num(r.vol_neighborhood),
        "vol_neighborhood_stderr": _num(r.vol_neighborhood_stderr),
        "lemma3_rhs": _num(r.lemma3_rhs), "growth_factor": _num(r.growth_factor),
        "growth_bound": _num(r.growth_bound), "growth_stderr": _num(r.growth_stderr),
        "below_half_ball": r.below_half_ball, "growth_pass": r.growth_pass,
    }


def trace_dict(t) -> dict:
    return {
        "from": t.start, "to": t.target, "distance": t.distance,
        "meet_iteration": t.meet_iteration, "meet_bound": 2 * t.meet_iteration,
        "meet_bound_holds": t.meet_bound_holds, "growth_holds": t.growth_holds,
        "from_start": [_record(r) for r in t.from_start],
        "from_target": [_record(r) for r in t.from_target],
    }


_LEMMA_OF = {"lemma1": 1, "lemma2": 2, "facet_height": 2, "lemma3": 3}


def build_report(est) -> dict:
    H, G, cond, bound = est.hrep_, est.graph_, est.condition_, est.bound_
    n = H.n
    rep = {
        "n": n,
        "m": H.m,
        "vertices": len(G),
        "edges": len(G.edges()),
        "exact_arithmetic": cond.exact,
        "perturb_sigma": _num(est.perturb) if est.perturb else None,
        "delta": _num(cond.delta),
        "det_star": _num(cond.det_star),
        "det_star_all_minors": _num(cond.det_star_all_minors),
        "expansion_constant": _num(bound.expansion),
        "j_max_paper": bound.j_max_paper,
        "diameter_bound_paper": bound.diameter_bound_paper,
        "j_max_standard": bound.j_max_standard,
        "diameter_bound_standard": bound.diameter_bound_standard,
        "exact_diameter": est.diameter_,
        "diameter_witness": list(est.diameter_witness_),
        "hirsch_quantity": H.m - n,
        "paper_ball_volume": _num(paper_ball_volume(n)),
        "standard_ball_volume": _num(ball_volume(n).volume),
    }
    cv = est.cone_volumes_
    if cv is not None:
        rep["samples"] = est.samples
        rep["facet_samples"] = est.facet_samples
        rep["seed"] = est.seed
        rep["accepted_samples"] = cv.accepted
        rep["ties"] = cv.ties
        rep["lemma_results"] = {k: _summary(v) for k, v in est.verification_.groups().items()
                                if _LEMMA_OF[k] in est.lemmas}
        rep["trace"] = trace_dict(est.trace_)
        rep["all_passed"] = est.lemmas_hold()
    rep["cones"] = [
        {
            "id": v.id,
            "point": [_num(x) for x in v.point],
            "tight_rows": list(v.tight_rows),
            "basis_det": _num(v.basis_det),
            "neighbors": list(G.adjacency[v.id]),
        }
        for v in G.vertices
    ]
    for entry, st in zip(rep["cones"], est.cone_stats_):
        entry.update({
            "volume": _num(st.volume),
            "volume_stderr": _num(st.volume_stderr),
            "simplex_volume": _num(st.simplex_volume),
            "dockable_surface": _num(st.dockable_surface),
            "dockable_stderr": _num(st.dockable_stderr),
            "facet_rows": list(st.facet_rows),
            "facet_heights": [_num(h) for h in st.facet_heights],
            "facet_areas": [_num(a) for a in st.facet_areas],
        })
    return rep


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def flatten(obj, prefix=""):
    """``(dotted.key, value)`` pairs for every scalar leaf."""
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}.{i}")
    else:
        yield prefix, obj


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in flatten(report):
        w.writerow([k, _csv_value(v)])
    return buf.getvalue()


def _compact(d: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in d.items())


def to_text(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if k in ("cones", "lemma_results"):
            continue
        if k == "trace" and isinstance(v, dict):
            lines.append(f"{'frontier meet':26s} j={v['meet_iteration']} "
                         f"(2j={v['meet_bound']} >= distance {v['distance']})")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(k)
            lines.extend(f"  {_compact(r)}" for r in v)
        else:
            lines.append(f"{k:26s} {v}")
    for name, s in report.get("lemma_results", {}).items():
        lines.append(f"{name:26s} {'pass' if s['passed'] else 'FAIL'} "
                     f"({s['checked']} checked, {s['failed']} failed, "
                     f"min margin {s['min_margin']})")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    return {"json": to_json, "csv": to_csv, "text": to_text}[fmt](report)
