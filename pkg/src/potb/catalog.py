"""The balanced-POTB catalog: computable rows regenerated and certified, literature
rows carried as metadata, and the PERGOLA sweep over every two-factor restriction."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .algebra import odd_prime_powers
from .constructions import ROW7_PARAMS, thm31_plan, thm33a_plan, thm34_plan
from .plan import Plan, incidence_factor_factor
from .verify import check_balanced_potb, check_pergola, check_potb

DEFAULT_MAX_V = 49

LITERATURE_ROWS = (
    ("1", "(v+1) x v", "2", "2v", "f = (v-1)/2", "J", "Seberry (1979)"),
    ("2", "(v+1)^2", "2", "2v", "f+1 = (v+1)/2", "J", "Street (1981)"),
    ("3(a)", "v^m", "m", "mv", "f", "J-I", "Morgan and Uddin (1996)"),
    ("3(b)", "v^t", "tg", "mv", "hf, h <= g", "h(J-I)", "Morgan and Uddin (1996)"),
    ("4", "v^f", "m", "mv", "1+hf, h <= m", "(m-h)I+hJ", "Morgan and Uddin (1996)"),
)


@dataclass
class CatalogRow:
    number: str
    experiment: str
    factors: str
    blocks: str
    block_size: str
    structure: str
    source: str
    metadata_only: bool = False
    params: dict = field(default_factory=dict)
    certification: dict = field(default_factory=dict)


def structure_tag(m: np.ndarray) -> str:
    """Name the shape of a square factor-vs-factor incidence matrix."""
    s = m.shape[0]
    eye = np.eye(s, dtype=m.dtype)
    ones = np.ones_like(m)
    if (m == ones).all():
        return "J"
    h = int(m[0, 1]) if s > 1 else 0
    if h > 0 and (m == h * (ones - eye)).all():
        return "J-I" if h == 1 else f"{h}(J-I)"
    if s > 1:
        b = int(m[0, 1])
        a = int(m[0, 0]) - b
        if (m == a * eye + b * ones).all():
            return f"{a}I+{b}J"
    return "irregular"


def _certify_row(plan: Plan) -> tuple[str, dict]:
    tags = sorted(
        {structure_tag(incidence_factor_factor(plan, i, j).counts) for i, j in combinations(range(plan.m), 2)}
    )
    pergola = {}
    for i, j in combinations(range(plan.m), 2):
        rep = check_pergola(plan, i, j)
        pergola[f"{plan.factor_names[i]},{plan.factor_names[j]}"] = rep.params if rep.passed else False
    cert = {
        "potb": check_potb(plan).passed,
        "balanced": check_balanced_potb(plan).passed,
        "pergola": pergola,
    }
    return (tags[0] if len(tags) == 1 else "mixed: " + ", ".join(tags)), cert


def _row(number, experiment, source, params, plan: Plan) -> CatalogRow:
    tag, cert = _certify_row(plan)
    return CatalogRow(
        number=number,
        experiment=experiment,
        factors=str(plan.m),
        blocks=str(plan.b),
        block_size=str(plan.k),
        structure=tag,
        source=source,
        params=params,
        certification=cert,
    )


def computable_designs(max_v: int = DEFAULT_MAX_V):
    """Yield ``(row number, experiment, source, params, plan)`` for every regenerated design."""
    for v in odd_prime_powers(max_v, start=5):
        yield "5", f"{v + 1}^2", "thm34", {"v": v}, thm34_plan(v)
    if max_v >= 5:
        yield "6", "6^3", "thm31", {"n": 5}, thm31_plan(5)
    if max_v >= ROW7_PARAMS["n"]:
        params = dict(ROW7_PARAMS)
        yield "7", "9^4", "thm33a", params, thm33a_plan(**params)


def pergola_sweep(designs) -> dict:
    """Restrict every balanced design to each factor pair and test the PERGOLA identity."""
    entries = []
    for number, _exp, source, params, plan in designs:
        for i, j in combinations(range(plan.m), 2):
            pair = plan.restrict((i, j))
            balanced = check_balanced_potb(pair).passed
            rep = check_pergola(pair, 0, 1)
            entries.append(
                {
                    "row": number,
                    "source": source,
                    "params": params,
                    "pair": [plan.factor_names[i], plan.factor_names[j]],
                    "balanced": balanced,
                    "pergola": rep.passed,
                    "fg": [rep.params["f"], rep.params["g"]] if rep.passed else None,
                }
            )
    flagged = []
    for e in entries:
        if e["balanced"] and not e["pergola"]:
            key = {"row": e["row"], "source": e["source"], "params": e["params"]}
            if key not in flagged:
                flagged.append(key)
    return {"entries": entries, "non_pergola": flagged}


def build_catalog(max_v: int = DEFAULT_MAX_V) -> dict:
    designs = list(computable_designs(max_v))
    rows = [CatalogRow(*r, metadata_only=True) for r in LITERATURE_ROWS]
    rows += [_row(*d) for d in designs]
    return {"max_v": max_v, "rows": [asdict(r) for r in rows], "sweep": pergola_sweep(designs)}


def render_catalog(catalog: dict) -> str:
    out = [f"balanced POTB catalog (v <= {catalog['max_v']})", ""]
    head = ("no.", "experiment", "m", "blocks", "size", "M_ij", "source", "status")
    table = [head]
    for r in catalog["rows"]:
        if r["metadata_only"]:
            status = "metadata-only"
        else:
            c = r["certification"]
            pergola = all(v is not False for v in c["pergola"].values())
            status = (
                f"potb={'yes' if c['potb'] else 'no'} balanced={'yes' if c['balanced'] else 'no'} "
                f"pergola={'yes' if pergola else 'no'}"
            )
        src = r["source"] + "".join(f" {k}={v}" for k, v in r["params"].items())
        table.append((r["number"], r["experiment"], r["factors"], r["blocks"], r["block_size"], r["structure"], src, status))
    widths = [max(len(str(row[c])) for row in table) for c in range(len(head))]
    for row in table:
        out.append("  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip())
    sweep = catalog["sweep"]
    total = len(sweep["entries"])
    ok = sum(1 for e in sweep["entries"] if e["balanced"] and e["pergola"])
    out += ["", f"pergola sweep: {ok}/{total} two-factor restrictions are balanced PERGOLAs"]
    for flag in sweep["non_pergola"]:
        params = " ".join(f"{k}={v}" for k, v in flag["params"].items())
        out.append(f"  balanced, NOT pergola: row {flag['row']} ({flag['source']} {params})")
    return "\n".join(out) + "\n"
