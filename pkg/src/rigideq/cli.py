"""Command-line front end.

Exit-code protocol: 0 success, 1 not certified, 2 no annihilator in the
searched degree range, 3 resource refusal, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .annihilator import (
    AnnihilatorCertificate,
    ResourceLimitError,
    SampledVerificationError,
    SolverConfig,
    find_annihilator,
)
from .certify import (
    certify_circuit_lower_bound,
    certify_rigid,
    verify_pit,
    verify_symbolic,
    UnverifiedCertificateError,
)
from .field import PrimeField
from .generators import parse_map_spec
from .oracle import (
    OracleCostError,
    is_rigid_bruteforce,
    parse_matrix,
    parse_tensor,
    tensor_rank_bruteforce,
)
from .poly import PolyMap

EXIT_OK = 0
EXIT_NOT_CERTIFIED = 1
EXIT_NONE_IN_RANGE = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4


def _load_map(args) -> PolyMap:
    if args.map:
        if not args.prime:
            raise ValueError("--map needs --prime")
        return parse_map_spec(PrimeField(args.prime), args.map)
    if args.infile:
        with open(args.infile) as fh:
            pmap = PolyMap.from_json_dict(json.load(fh))
        if args.prime and pmap.field.p != args.prime:
            raise ValueError(f"map file has p={pmap.field.p}, --prime says {args.prime}")
        return pmap
    raise ValueError("need --map SPEC or --in MAPFILE")


def cmd_genmap(args) -> int:
    pmap = _load_map(args)
    doc = json.dumps(pmap.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    deg = pmap.degree()
    print(f"map {pmap.label}: {pmap.in_arity} -> {pmap.out_arity}, degree {deg}, p={pmap.field.p}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    pmap = _load_map(args)
    cfg = SolverConfig(mode=args.mode, d_min=args.dmin, d_max=args.dmax, seed=args.seed)
    cert = find_annihilator(pmap, cfg)
    if cert is None:
        print(f"no annihilator of degree <= {args.dmax} for {pmap.label}", file=sys.stderr)
        return EXIT_NONE_IN_RANGE
    doc = cert.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    print(f"annihilator for {pmap.label}: D={cert.degree}, {len(cert.q)} terms, mode={cert.mode}", file=sys.stderr)
    return EXIT_OK


def _load_cert(path: str) -> AnnihilatorCertificate:
    with open(path) as fh:
        return AnnihilatorCertificate.from_json(fh.read())


def cmd_certify(args) -> int:
    cert = _load_cert(args.cert)
    with open(args.infile) as fh:
        matrix = parse_matrix(fh.read())
    if not verify_symbolic(cert.q, cert.pmap) or cert.q.is_zero():
        print("certificate failed verification", file=sys.stderr)
        return EXIT_VERIFICATION
    if cert.label.startswith("rigidity("):
        result = certify_rigid(matrix, cert)
        kind = "rigidity"
    elif cert.label.startswith("universal("):
        result = certify_circuit_lower_bound(matrix, cert)
        kind = "circuit lower bound"
    else:
        print(f"cannot certify with a {cert.label} annihilator", file=sys.stderr)
        return EXIT_VERIFICATION
    if result is None:
        print(f"not certified: Q(M) = 0 (no {kind} conclusion)", file=sys.stderr)
        return EXIT_NOT_CERTIFIED
    doc = result.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    print(f"certified ({kind}): Q(M) = {result.value} != 0", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert = _load_cert(args.cert)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"unreadable certificate: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    if cert.q.is_zero():
        print("verification failed: Q is zero", file=sys.stderr)
        return EXIT_VERIFICATION
    if not verify_symbolic(cert.q, cert.pmap):
        print("verification failed: Q o P != 0", file=sys.stderr)
        return EXIT_VERIFICATION
    ok = True
    if args.trials:
        ok, report = verify_pit(cert.q, cert.pmap, args.trials, args.seed)
        print(report.display(), file=sys.stderr)
    if not ok:
        print("verification failed: nonzero PIT evaluation", file=sys.stderr)
        return EXIT_VERIFICATION
    print(f"certificate for {cert.label} verified (D={cert.degree})", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    with open(args.infile) as fh:
        text = fh.read()
    if args.rigid:
        r, s = map(int, args.rigid.split(","))
        matrix = parse_matrix(text)
        verdict = is_rigid_bruteforce(matrix, r, s)
        print(f"matrix is {'({},{})-rigid'.format(r, s) if verdict else 'not ({},{})-rigid'.format(r, s)} over F_{matrix.field.p}")
        return EXIT_OK if verdict else EXIT_NOT_CERTIFIED
    if args.tensor_rank is not None:
        tensor = parse_tensor(text)
        result = tensor_rank_bruteforce(tensor, args.tensor_rank)
        if result is None:
            print(f"tensor rank > {args.tensor_rank} over F_{tensor.field.p}")
            return EXIT_NOT_CERTIFIED
        print(f"tensor rank = {result} over F_{tensor.field.p}")
        return EXIT_OK
    print("oracle: need --rigid r,s or --tensor-rank RMAX", file=sys.stderr)
    return EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigideq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_map_args(sp):
        sp.add_argument("--prime", "-p", type=int, default=None, help="field modulus")
        sp.add_argument("--map", help="map spec: rank(n,r) | rigidity(n,r,k) | support(n,r,S-file) | tensor(n,d,r) | sv(N,k)")
        sp.add_argument("--in", dest="infile", help="serialized map JSON file")

    sp = sub.add_parser("genmap", help="construct a universal map and serialize it")
    add_map_args(sp)
    sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("solve", help="find an annihilating polynomial")
    add_map_args(sp)
    sp.add_argument("--dmin", type=int, default=1)
    sp.add_argument("--dmax", type=int, default=3)
    sp.add_argument("--mode", choices=["symbolic", "sampled"], default="symbolic")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="certificate output path (default: stdout)")

    sp = sub.add_parser("certify", help="certify a matrix rigid / circuit-hard via an annihilator")
    sp.add_argument("--in", dest="infile", required=True, help="matrix file: 'p rows cols' then entries")
    sp.add_argument("--cert", required=True, help="annihilator certificate JSON")
    sp.add_argument("--out", help="output certificate path (default: stdout)")

    sp = sub.add_parser("verify", help="re-check a certificate end-to-end")
    sp.add_argument("--cert", required=True)
    sp.add_argument("--trials", type=int, default=0, help="extra randomized PIT trials")
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("oracle", help="brute-force rigidity / tensor-rank verdicts")
    sp.add_argument("--in", dest="infile", required=True, help="matrix ('p rows cols') or tensor ('p n d') file")
    sp.add_argument("--rigid", help="check (r,s)-rigidity, e.g. --rigid 1,1")
    sp.add_argument("--tensor-rank", type=int, default=None, help="search tensor rank up to RMAX")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "genmap": cmd_genmap,
        "solve": cmd_solve,
        "certify": cmd_certify,
        "verify": cmd_verify,
        "oracle": cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except ResourceLimitError as exc:
        print(f"resource refusal: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OracleCostError as exc:
        print(f"resource refusal: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SampledVerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except UnverifiedCertificateError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 64


if __name__ == "__main__":
    sys.exit(main())
