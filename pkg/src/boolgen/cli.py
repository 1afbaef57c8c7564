"""Command line entry point: ``boolgen <command> [<subcommand>] [options]``.

Results go to stdout as ``key=value`` lines or the module text formats;
diagnostics go to stderr. Exit status is 0 on success, 1 for domain
errors and 2 for capacity errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path
from typing import List, Optional

from .errors import BoolgenError, CapacityError
from .genset import construct_genset, is_generating, min_genset_size_bruteforce, sample_generating_vectors
from .lattice import LatticeElement, lasp, sp
from .protocol import (
    Bank,
    Channel,
    Kati,
    MasterKey,
    ProtocolParams,
    decode_message,
    encode_message,
    tamper_test,
)
from .reduction import (
    EquationSystem,
    Graph,
    decode_coloring,
    encode_3coloring,
    is_3colorable_oracle,
    solve_system,
)
from .terms import SizeParams, evaluate, parse_term, random_term_vector

logger = logging.getLogger("boolgen")


def _elements(text: str, n: int) -> List[LatticeElement]:
    return [LatticeElement.from_hex(part, n) for part in text.split(",") if part.strip()]


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise BoolgenError(f"cannot read {path}: {exc.strerror}") from None


def cmd_sp(args):
    print(sp(args.k))


def cmd_lasp(args):
    print(lasp(args.n))


def cmd_genset_check(args):
    print(f"generating={_flag(is_generating(_elements(args.elems, args.n), args.n))}")


def cmd_genset_construct(args):
    h = construct_genset(args.n)
    print(f"n={args.n} k={h.k} elems={','.join(h.to_hex())}")


def cmd_genset_minsearch(args):
    print(f"n={args.n} min_size={min_genset_size_bruteforce(args.n)} lasp={lasp(args.n)}")


def cmd_genset_sample(args):
    report = sample_generating_vectors(args.n, args.k, args.trials, args.seed, args.workers)
    print(report.to_line())


def cmd_term_eval(args):
    t = parse_term(args.term)
    print(evaluate(t, _elements(args.h, args.n)).to_hex())


def cmd_term_random(args):
    h = _elements(args.h, args.n) if args.h else None
    size = SizeParams(args.min_nodes, args.max_nodes, args.join_bias)
    sys.stdout.write(random_term_vector(args.b, args.k, size, args.seed, h).to_text())


def _protocol_params(args) -> ProtocolParams:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        params = ProtocolParams(args.n, args.k, args.b)
    for w in caught:
        logger.warning("%s", w.message)
    return params


def _kind(msg) -> str:
    return type(msg).__name__


def cmd_protocol_demo(args):
    params = _protocol_params(args)
    key = MasterKey.random(params.n, params.k, args.seed)
    bank = Bank(key, params, seed=args.seed)
    kati = Kati(key, params, seed=args.seed)
    channel = Channel()
    request = decode_message(channel.send(encode_message(kati.request())))
    reply = decode_message(channel.send(encode_message(bank.issue(request))))
    bundle = decode_message(channel.send(encode_message(kati.send(reply, args.message.encode("ascii")))))
    y = bank.receive(bundle)
    for i, frame in enumerate(channel.transcript):
        msg = decode_message(frame)
        print(f"frame={i} kind={_kind(msg)} session={msg.session_id:016x} bytes={len(frame)}")
    print(f"ciphertext_bytes={len(bundle.ciphertext)} key_bits={params.n * params.b}")
    print(f"delivered={_flag(y == args.message.encode('ascii'))} plaintext={y.decode('ascii')!r}")


def cmd_protocol_tamper(args):
    params = _protocol_params(args)
    print(tamper_test(args.trials, args.seed, params).to_line())


def cmd_protocol_authenticate(args):
    params = _protocol_params(args)
    key = MasterKey.random(params.n, params.k, args.seed)
    bank = Bank(key, params, seed=args.seed)
    prover_key = MasterKey.random(params.n, params.k, args.seed + 1) if args.impostor else key
    prover = Kati(prover_key, params, seed=args.seed)
    reply = bank.issue()
    accepted = bank.verify(reply.session_id, prover.authenticate(reply))
    print(f"impostor={_flag(args.impostor)} accepted={_flag(accepted)}")


def cmd_reduce_encode(args):
    system = encode_3coloring(Graph.from_text(_read(args.graph)), args.n)
    text = system.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_reduce_solve(args):
    system = EquationSystem.from_text(_read(args.system))
    x = solve_system(system)
    if x is None:
        print("solvable=false")
    else:
        print(f"solvable=true solution={','.join(e.to_hex() for e in x)}")


def cmd_reduce_roundtrip(args):
    g = Graph.from_text(_read(args.graph))
    system = encode_3coloring(g, args.n)
    x = solve_system(system)
    oracle, _ = is_3colorable_oracle(g)
    fields = [f"t={g.t}", f"edges={len(g.edges)}", f"solvable={_flag(x is not None)}", f"oracle={_flag(oracle)}"]
    fields.append(f"agree={_flag((x is not None) == oracle)}")
    if x is not None:
        coloring = decode_coloring(system, x, g)
        fields.append("coloring=" + ",".join("".join(sorted(c, key="rwg".index)) for c in coloring))
    print(" ".join(fields))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolgen", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("sp", help="central binomial C(k, floor(k/2)); needs k >= 1")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_sp)

    p = commands.add_parser("lasp", help="least k with n <= sp(k); needs n >= 1")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_lasp)

    genset = commands.add_parser("genset", help="generating sets of B_n (n >= 2)").add_subparsers(
        dest="sub", required=True
    )
    p = genset.add_parser("check", help="test whether hex elements generate B_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--elems", required=True, help="comma-separated hex elements")
    p.set_defaults(func=cmd_genset_check)
    p = genset.add_parser("construct", help="a minimum generating vector of B_n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_genset_construct)
    p = genset.add_parser("minsearch", help="exhaustive minimum generating-set size, 2 <= n <= 8")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_genset_minsearch)
    p = genset.add_parser("sample", help="count generating vectors among random draws from B_n^k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_genset_sample)

    term = commands.add_parser("term", help="lattice terms").add_subparsers(dest="sub", required=True)
    p = term.add_parser("eval", help="evaluate a term on hex elements of B_n")
    p.add_argument("--term", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", required=True, help="comma-separated hex values of x1, x2, ...")
    p.set_defaults(func=cmd_term_eval)
    p = term.add_parser("random", help="a seeded random term vector")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--min-nodes", type=int, default=SizeParams.min_nodes)
    p.add_argument("--max-nodes", type=int, default=SizeParams.max_nodes)
    p.add_argument("--join-bias", type=float, default=SizeParams.join_bias)
    p.add_argument("--n", type=int, default=None, help="width of --h elements")
    p.add_argument("--h", default=None, help="master key; terms evaluating to a key component are redrawn")
    p.set_defaults(func=cmd_term_random)

    proto = commands.add_parser("protocol", help="session-key exchange simulation").add_subparsers(
        dest="sub", required=True
    )
    for name, func, text in [
        ("demo", cmd_protocol_demo, "run one exchange and print its transcript"),
        ("tamper-test", cmd_protocol_tamper, "flip bits of p in transit and report detection"),
        ("authenticate", cmd_protocol_authenticate, "authentication-only variant"),
    ]:
        p = proto.add_parser(name, help=text)
        p.add_argument("--n", type=int, default=1000)
        p.add_argument("--k", type=int, default=50)
        p.add_argument("--b", type=int, default=100)
        p.add_argument("--seed", type=int, required=True)
        p.set_defaults(func=func)
        if name == "demo":
            p.add_argument("--message", required=True, help="printable ASCII text")
        elif name == "tamper-test":
            p.add_argument("--trials", type=int, required=True)
        else:
            p.add_argument("--impostor", action="store_true", help="prove with a different master key")

    red = commands.add_parser("reduce", help="3-coloring to lattice equations").add_subparsers(
        dest="sub", required=True
    )
    p = red.add_parser("encode", help="encode a graph file as an equation system")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduce_encode)
    p = red.add_parser("solve", help="exhaustively solve a system file (n*k <= 24)")
    p.add_argument("--system", required=True)
    p.set_defaults(func=cmd_reduce_solve)
    p = red.add_parser("roundtrip", help="encode, solve, decode and compare with the 3^t oracle")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_reduce_roundtrip)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except (BoolgenError, UnicodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
