"""Random request texts for the CLI round-trip checks."""

import random

from doubling_gamma.cli import CliError, parse

CLASSES = ["1", "u", "pi", "upi"]
COEFFS = ["2", "-1", "1/3", "i", "sqrt(q)", "2 + i", "-1/2*sqrt(q)"]


def _char(rng, allow_quad=True):
    parts = []
    if allow_quad and rng.random() < 0.5:
        parts.append(rng.choice([f"chi({c})" for c in CLASSES] + ["u", "pi", "upi"]))
    if rng.random() < 0.4:
        parts.append("t^{s0=%s}" % rng.choice(["1/2", "-1/2", "1", "3/2", "0"]))
    if rng.random() < 0.4:
        parts.append("z^{%s}" % rng.choice(COEFFS))
    return " * ".join(parts) or "1"


def _space(rng):
    case = rng.choice(["GL", "SO", "Sp", "qGL", "U", "QGL", "Q1", "Q-1"])
    n = rng.randint(0, 4)
    opts = []
    if case == "Sp":
        n = 2 * rng.randint(0, 2)
    if case in ("U", "qGL"):
        opts.append("E=" + rng.choice(["u", "pi", "upi", "split"]))
    if case in ("QGL", "Q1", "Q-1"):
        opts.append("quat=" + rng.choice(["(u,pi)", "(pi,u)", "(u,upi)", "split"]))
    if case in ("SO", "Q-1") and n:
        opts.append("disc=" + rng.choice(CLASSES))
    if case == "SO" and n and rng.random() < 0.5:
        opts.append("hasse=" + rng.choice(["1", "-1"]))
    if case == "U" and n and rng.random() < 0.3:
        opts.append("eps=" + rng.choice(["1", "-1"]))
    return case, n, "%s(%s)" % (case, ", ".join([f"n={n}"] + opts))


def _pi(rng, case, n, ext_field):
    leaf = "trivial" if case in ("GL", "qGL", "QGL") else rng.choice(["minimal", "minimal", "trivial"])
    blocks = []
    budget = n // 2 if case in ("SO", "Sp", "U", "Q1", "Q-1") else n
    if case == "Sp":
        budget = n // 2
    while budget and rng.random() < 0.7:
        m = rng.randint(1, budget)
        budget -= m
        if rng.random() < 0.8:
            blocks.append(f"gl({m}, chi={_char(rng, allow_quad=not ext_field)})")
        else:
            blocks.append(f"gj({m}, gamma={rng.choice(['gamma(s, 1)', 'T/(1-T)', 'L(1-s, u)/L(s, u)'])}, "
                          f"dual={rng.choice(['gamma(s, 1)', '(1-T)/T', '-1'])})")
    body = leaf
    for b in reversed(blocks):
        body = f"ind({b}, {body})"
    return body


def request_text(rng) -> str:
    q = rng.choice([3, 5, 7, 9])
    action = rng.choice(["gamma", "L", "eps", "check-fe", "check-psi", "gamma", "verify-minimal"])
    clauses = [f"field q={q}"]
    if action != "verify-minimal" or rng.random() < 0.3:
        case, n, sp = _space(rng)
        clauses.append("space " + sp)
        ext_field = case in ("U", "qGL") and "E=split" not in sp
        clauses.append("pi = " + _pi(rng, case, n, ext_field))
        paired = case in ("GL", "QGL") or (case in ("U", "qGL") and "E=split" in sp)
        if rng.random() < 0.7:
            om = f"({_char(rng)}, {_char(rng)})" if paired else _char(rng)
            clauses.append("omega = " + om)
    if rng.random() < 0.7:
        psi = f"psi level {rng.randint(-1, 2)}"
        if rng.random() < 0.5:
            psi += " seed " + rng.choice(["1", "u"])
        clauses.append(psi)
    tail = action
    if rng.random() < 0.4:
        tail += " --format " + rng.choice(["text", "latex", "json"])
    if rng.random() < 0.3:
        tail += " --eval s=" + rng.choice(["1/2", "2", "-3/4"])
    if rng.random() < 0.2:
        tail += " --trace"
    clauses.append(tail)
    sep = rng.choice(["; ", ";", " ;\n"])
    return sep.join(clauses)


def generate(n: int, seed: int = 2024):
    """``n`` request texts that parse."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        text = request_text(rng)
        try:
            parse(text)
        except CliError:
            continue
        out.append(text)
    return out
