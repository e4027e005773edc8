"""Command-line interface: queries, reductions, plots and a selftest."""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .approximants import decide_weak
from .belts import StrongEngine, compute_belt
from .families import pump_drain_net
from .fileformat import ParseError, parse_net, serialize_net
from .geometry import direction
from .nets import Config, NetError, normalize_pair, product_graph
from .oracle import (
    OPTIMISTIC_MODE,
    PESSIMISTIC_MODE,
    bounded_game_verdict,
    sandwich_decide,
)
from .slopegame import SlopeGameSolver
from .verdicts import Budget, NOT_SIMULATED, SIMULATED, UNKNOWN

__all__ = ["run_command", "main", "emit_plot"]

USAGE_ERROR = 3


class CliError(Exception):
    pass


def _load_net(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_net(fh.read())
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}")
    except (ParseError, NetError) as e:
        raise CliError(f"{path}: {e}")


def _parse_config(spec):
    if ":" not in spec:
        raise CliError(f"expected STATE:COUNTER, got {spec!r}")
    state, _, counter = spec.rpartition(":")
    try:
        value = int(counter)
    except ValueError:
        raise CliError(f"bad counter {counter!r}")
    if value < 0 or value >= 1 << 63:
        raise CliError("counter out of range")
    return state, value


def _parse_pair(spec):
    if "," not in spec:
        raise CliError(f"expected P,Q got {spec!r}")
    p, _, q = spec.partition(",")
    return p.strip(), q.strip()


def _record(args, command, payload):
    rec = {"tool": {"name": "ocnsim", "version": __version__},
           "command": command}
    if args.seed is not None:
        rec["seed"] = args.seed
    rec.update(payload)
    return rec


def _emit(args, record, human):
    if args.json:
        return json.dumps(record, sort_keys=True, indent=2,
                          default=str) + "\n"
    return human


def _verdict_payload(verdict):
    payload = {"verdict": verdict.kind, "stats": verdict.stats}
    if verdict.certificate is not None:
        payload["certificate"] = verdict.certificate.to_json() \
            if hasattr(verdict.certificate, "to_json") else str(
                verdict.certificate)
    if verdict.witness is not None:
        payload["witness"] = verdict.witness
    if verdict.budget_report is not None:
        payload["budget"] = verdict.budget_report
    return payload


def _budget(args):
    if args.budget is not None:
        return Budget.from_units(args.budget)
    return Budget()


# -- commands ----------------------------------------------------------------


def _cmd_strong(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    ls, ln = _parse_config(args.lconf)
    rs, rn = _parse_config(args.rconf)
    engine = StrongEngine(lhs_net, rhs_net, _budget(args))
    verdict = engine.decide(Config(ls, ln), Config(rs, rn))
    rec = _record(args, "strong", {
        "query": {"lhs": [ls, ln], "rhs": [rs, rn],
                  "nets": [lhs_net.name, rhs_net.name]},
        **_verdict_payload(verdict)})
    human = f"{ls}{ln} vs {rs}{rn}: {verdict.kind}\n"
    return verdict.exit_code, _emit(args, rec, human)


def _cmd_weak(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    ls, ln = _parse_config(args.lconf)
    rs, rn = _parse_config(args.rconf)
    verdict = decide_weak(lhs_net, rhs_net, Config(ls, ln), Config(rs, rn),
                          _budget(args))
    rec = _record(args, "weak", {
        "query": {"lhs": [ls, ln], "rhs": [rs, rn],
                  "nets": [lhs_net.name, rhs_net.name]},
        **_verdict_payload(verdict)})
    human = f"{ls}{ln} vs {rs}{rn} (weak): {verdict.kind}\n"
    return verdict.exit_code, _emit(args, rec, human)


def _belts_of(args, lhs_net, rhs_net, only_pair=None):
    engine = StrongEngine(lhs_net, rhs_net, _budget(args))
    if not engine.use_belts:
        raise CliError("product too large for belt computation")
    pairs = [only_pair] if only_pair else \
        [(q, q2) for q in engine.left.states for q2 in engine.right.states]
    return engine, pairs


def _cmd_belts(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    pair = _parse_pair(args.pair) if args.pair else None
    engine, pairs = _belts_of(args, lhs_net, rhs_net, pair)
    rows = []
    for pq in pairs:
        try:
            b = engine.belt(pq)
        except NetError as e:
            raise CliError(str(e))
        rows.append({"pair": list(pq),
                     "gamma_up": None if b.gamma_up is None
                     else [b.gamma_up.x, b.gamma_up.y],
                     "beta_down": None if b.beta_down is None
                     else [b.beta_down.x, b.beta_down.y],
                     "width": b.width, "vertical": b.vertical})
    rec = _record(args, "belts", {"belts": rows})
    human = "".join(
        f"({r['pair'][0]},{r['pair'][1]}): up={r['gamma_up']} "
        f"down={r['beta_down']} width={r['width']}"
        + (" vertical\n" if r["vertical"] else "\n") for r in rows)
    return 0, _emit(args, rec, human)


def _cmd_suff(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    engine = StrongEngine(lhs_net, rhs_net, _budget(args))
    from .nets import OMEGA
    rows = []
    for q in lhs_net.states:
        for q2 in rhs_net.states:
            value = engine.compute_suff((q, q2))
            rows.append({"pair": [q, q2],
                         "suff": "w" if value is OMEGA else int(value)})
    rec = _record(args, "suff", {"suff": rows})
    human = "".join(f"({r['pair'][0]},{r['pair'][1]}): {r['suff']}\n"
                    for r in rows)
    return 0, _emit(args, rec, human)


def _cmd_slope(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    pair = _parse_pair(args.pair)
    if "/" not in args.slope:
        raise CliError("slope must be RHO/RHO2")
    x, _, y = args.slope.partition("/")
    try:
        slope = direction(int(x), int(y))
    except ValueError as e:
        raise CliError(str(e))
    left, right = normalize_pair(lhs_net, rhs_net)
    product = product_graph(left, right)
    solver = SlopeGameSolver(product)
    result = solver.solve(pair, slope)
    rec = _record(args, "slope", {
        "pair": list(pair), "slope": [slope.x, slope.y],
        "winner": result.winner, "phases": result.phases_used})
    human = f"slope {slope} from {pair}: {result.winner} " \
            f"({result.phases_used} phases)\n"
    return 0, _emit(args, rec, human)


def _cmd_oracle(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    ls, ln = _parse_config(args.lconf)
    rs, rn = _parse_config(args.rconf)
    mode = {"opt": OPTIMISTIC_MODE, "pess": PESSIMISTIC_MODE}[args.mode]
    gv = bounded_game_verdict(lhs_net, rhs_net, Config(ls, ln),
                              Config(rs, rn), args.rounds, args.grid, mode,
                              weak=args.flavor == "weak")
    verdict_name = {"spoiler-wins": NOT_SIMULATED,
                    "duplicator-survives": SIMULATED,
                    "inconclusive": UNKNOWN}[gv.kind]
    rec = _record(args, "oracle", {
        "query": {"lhs": [ls, ln], "rhs": [rs, rn]},
        "game": gv.kind, "rounds": gv.rounds, "mode": gv.mode,
        "verdict": verdict_name})
    human = f"{ls}{ln} vs {rs}{rn} ({args.flavor}, {args.mode}, " \
            f"k={args.rounds}, grid={args.grid}): {gv.kind}\n"
    code = {NOT_SIMULATED: 1, SIMULATED: 0, UNKNOWN: 2}[verdict_name]
    return code, _emit(args, rec, human)


def _cmd_reduce_weak(args):
    from .reduction import reduce_weak
    import os
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    left, right = reduce_weak(lhs_net, rhs_net)
    os.makedirs(args.outdir, exist_ok=True)
    paths = {}
    for net, tag in ((left, "spoiler"), (right, "duplicator")):
        path = os.path.join(args.outdir, f"{tag}.net")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(serialize_net(net))
        paths[tag] = path
    rec = _record(args, "reduce-weak", {
        "outputs": paths,
        "sizes": {"spoiler_states": len(left.states),
                  "duplicator_states": len(right.states)}})
    human = f"wrote {paths['spoiler']} and {paths['duplicator']}\n"
    return 0, _emit(args, rec, human)


def _cmd_normalize(args):
    import os
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    left, right = normalize_pair(lhs_net, rhs_net)
    os.makedirs(args.outdir, exist_ok=True)
    paths = {}
    for net, tag in ((left, "spoiler"), (right, "duplicator")):
        path = os.path.join(args.outdir, f"{tag}.net")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(serialize_net(net))
        paths[tag] = path
    rec = _record(args, "normalize", {"outputs": paths})
    return 0, _emit(args, rec, f"wrote {paths['spoiler']} and "
                               f"{paths['duplicator']}\n")


def emit_plot(engine, pair, max_n, max_n2, path):
    """Portable graymap of decide_strong over [0..max_n] x [0..max_n2].

    Pixel values: 255 simulated, 0 not simulated, 128 unknown, 64 belt
    boundary.  Row 0 is the top of the plane (n2 = max_n2).
    """
    from .belts import SIM, NOTSIM
    width, height = max_n + 1, max_n2 + 1
    grid = []
    for n2 in range(max_n2, -1, -1):
        row = []
        for n in range(width):
            hit = engine.classify_point(pair, n, n2)
            row.append({SIM: 255, NOTSIM: 0}.get(hit, 128))
        grid.append(row)
    if engine.use_belts:
        belt = engine.belt(pair)
        for y, n2 in enumerate(range(max_n2, -1, -1)):
            for n in range(width):
                if belt.classify(n, n2) is not None:
                    continue
                near = [(n + dn, n2 + dm) for dn in (-1, 0, 1)
                        for dm in (-1, 0, 1)]
                if any(belt.classify(a, b) is not None
                       for (a, b) in near if a >= 0 and b >= 0):
                    grid[y][n] = 64
    lines = ["P2", f"{width} {height}", "255"]
    for row in grid:
        lines.append(" ".join(str(v) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_plot(args):
    lhs_net = _load_net(args.lhs)
    rhs_net = _load_net(args.rhs)
    pair = _parse_pair(args.pair)
    engine = StrongEngine(lhs_net, rhs_net, _budget(args))
    if not engine.left.has_state(pair[0]) or \
            not engine.right.has_state(pair[1]):
        raise CliError(f"unknown pair {pair}")
    try:
        emit_plot(engine, pair, args.max, args.max, args.outfile)
    except OSError as e:
        raise CliError(f"cannot write {args.outfile}: {e}")
    rec = _record(args, "plot", {"outfile": args.outfile, "max": args.max,
                                 "pair": list(pair)})
    return 0, _emit(args, rec, f"wrote {args.outfile}\n")


def _cmd_selftest(args):
    from .randomnets import random_pair
    seed = args.seed if args.seed is not None else 0
    rng = random.Random(seed)
    pairs_checked = 0
    slope_games = 0
    agreements = 0
    conclusive = 0
    for i in range(args.count):
        lhs, rhs = random_pair(rng, i)
        engine = StrongEngine(lhs, rhs, _budget(args))
        solver = engine.solver
        for q in engine.left.states[:2]:
            for q2 in engine.right.states[:2]:
                belt = engine.belt((q, q2))
                slope_games = solver.games_solved
                n = rng.randint(0, 4)
                n2 = rng.randint(0, 4)
                got = engine.classify_point((q, q2), n, n2)
                oracle = sandwich_decide(
                    engine.left, engine.right, Config(q, n), Config(q2, n2),
                    [(16, 24)],
                    resolver=lambda pq, a, b: belt_classify(engine, pq, a, b))
                if oracle.kind != UNKNOWN and got is not None:
                    conclusive += 1
                    want = SIMULATED if got == "sim" else NOT_SIMULATED
                    if oracle.kind == want:
                        agreements += 1
                pairs_checked += 1
    ok = agreements == conclusive
    rec = _record(args, "selftest", {
        "pairs": pairs_checked, "slope_games": slope_games,
        "conclusive": conclusive, "agreements": agreements,
        "verdict": "pass" if ok else "fail"})
    human = f"selftest: {pairs_checked} pairs, {conclusive} conclusive, " \
            f"{agreements} agree -> {'PASS' if ok else 'FAIL'}\n"
    return (0 if ok else 1), _emit(args, rec, human)


def belt_classify(engine, pair, n, n2):
    hit = engine.belt(pair).classify(n, n2)
    return hit


# -- wiring --------------------------------------------------------------------


def _build_parser():
    top = argparse.ArgumentParser(
        prog="ocnsim",
        description="Strong and weak simulation preorder on one-counter nets")
    top.add_argument("--json", action="store_true",
                     help="machine-readable output")
    top.add_argument("--budget", type=int, default=None, metavar="N",
                     help="effort scale for the deciding engines")
    top.add_argument("--seed", type=int, default=None, metavar="S",
                     help="seed for randomized subcommands")
    sub = top.add_subparsers(dest="command", required=True)

    def query(p):
        p.add_argument("lhs")
        p.add_argument("lconf", metavar="LSTATE:N")
        p.add_argument("rhs")
        p.add_argument("rconf", metavar="RSTATE:M")

    query(sub.add_parser("strong", help="strong simulation point query"))
    query(sub.add_parser("weak", help="weak simulation point query"))

    p = sub.add_parser("belts", help="belt boundaries per state pair")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--pair", metavar="P,Q")

    p = sub.add_parser("suff", help="minimal sufficient Spoiler values")
    p.add_argument("lhs")
    p.add_argument("rhs")

    p = sub.add_parser("slope", help="solve one slope game")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--pair", metavar="P,Q", required=True)
    p.add_argument("--slope", metavar="RHO/RHO2", required=True)

    p = sub.add_parser("oracle", help="bounded-game oracle query")
    p.add_argument("flavor", choices=("strong", "weak"))
    query(p)
    p.add_argument("--rounds", type=int, default=16)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--mode", choices=("opt", "pess"), default="pess")

    p = sub.add_parser("reduce-weak",
                       help="compile a weak problem to a strong one")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("-o", "--outdir", required=True)

    p = sub.add_parser("normalize", help="normal-form construction")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("-o", "--outdir", required=True)

    p = sub.add_parser("plot", help="plane-coloring graymap for one pair")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--pair", metavar="P,Q", required=True)
    p.add_argument("--max", type=int, default=20)
    p.add_argument("-o", "--outfile", required=True)

    p = sub.add_parser("selftest", help="randomized engine cross-checks")
    p.add_argument("--count", type=int, default=10)
    return top


_COMMANDS = {
    "strong": _cmd_strong,
    "weak": _cmd_weak,
    "belts": _cmd_belts,
    "suff": _cmd_suff,
    "slope": _cmd_slope,
    "oracle": _cmd_oracle,
    "reduce-weak": _cmd_reduce_weak,
    "normalize": _cmd_normalize,
    "plot": _cmd_plot,
    "selftest": _cmd_selftest,
}


def run_command(argv):
    """Run one CLI invocation; returns (exit_code, output string)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (USAGE_ERROR if e.code else 0), ""
    try:
        return _COMMANDS[args.command](args)
    except CliError as e:
        return USAGE_ERROR, f"error: {e}\n"
    except (NetError, ParseError) as e:
        return USAGE_ERROR, f"error: {e}\n"


def main(argv=None):
    code, output = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
