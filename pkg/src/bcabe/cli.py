"""Command-line interface: state export, invariant verification, cut reports, certificates.

Commands write JSON files.  A state file holds one matrix or vector as
row-major [re, im] pairs; JSON's shortest-round-trip float encoding makes the
write/read cycle lossless.  A report file has a "header" object (generation
timestamp, excluded from reproducibility comparisons) next to a deterministic
payload: command, parameters, results, and a checks list where every asserted
quantity carries its measured value and threshold.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from .cuts import (
    analyze_cut,
    cost_certificate,
    enumerate_cuts,
)
from .states import (
    BellLabel,
    FamilyLabel,
    bell_state,
    build_family,
    ghz_basis,
    pauli_connection_search,
    permutation_invariance_check,
    verify_recursion,
)
from .tensor import (
    OPERATOR_ATOL,
    STATE_ATOL,
    DensityMatrix,
    PureState,
    tensor_product,
    trace_distance,
)

SIZES = (4, 6, 8)
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _complex_pairs(flat: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in flat]


def write_state_file(path: str, obj: DensityMatrix | PureState) -> None:
    if isinstance(obj, DensityMatrix):
        kind, flat = "density", obj.entries.reshape(-1)
    elif isinstance(obj, PureState):
        kind, flat = "pure", obj.amplitudes
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    payload = {"qubits": obj.num_qubits, "kind": kind, "data": _complex_pairs(flat)}
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_state_file(path: str) -> DensityMatrix | PureState:
    with open(path) as fh:
        payload = json.load(fh)
    qubits = int(payload["qubits"])
    data = np.array([complex(re, im) for re, im in payload["data"]])
    if payload["kind"] == "density":
        dim = 2 ** qubits
        if data.size != dim * dim:
            raise ValueError(f"density file needs {dim * dim} entries, found {data.size}")
        return DensityMatrix(qubits, data.reshape(dim, dim))
    if payload["kind"] == "pure":
        if data.size != 2 ** qubits:
            raise ValueError(f"pure file needs {2 ** qubits} entries, found {data.size}")
        return PureState(qubits, data)
    raise ValueError(f"unknown state kind {payload['kind']!r}")


def _write_report(path: str | None, payload: dict) -> None:
    report = {"header": {"generated_at": datetime.now(timezone.utc).isoformat()}, **payload}
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _check(name: str, measured: float, threshold: float, upper: bool = True) -> dict:
    ok = measured < threshold if upper else measured >= threshold
    return {"check": name, "measured": float(measured), "threshold": float(threshold),
            "comparison": "<" if upper else ">=", "passed": bool(ok)}


def _family(value: str) -> FamilyLabel:
    try:
        return FamilyLabel(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"family must be one of {[f.value for f in FamilyLabel]}, got {value!r}")


def _smolin_reference() -> DensityMatrix:
    """Four-qubit family as an equal mixture of doubled Bell pairs."""
    total = np.zeros((16, 16), dtype=complex)
    for label in BellLabel:
        pair = bell_state(label).to_density()
        total += tensor_product(pair, pair).entries
    return DensityMatrix(4, total / 4)


def cmd_state(args) -> int:
    rho = build_family(args.size, args.family)
    try:
        write_state_file(args.out, rho)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.family.value} at {args.size} qubits to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = args.tolerance
    checks = []

    worst = max(check.distance for check in verify_recursion(args.size))
    checks.append(_check("recursion-max-distance", worst, tol))

    basis = ghz_basis(args.size)
    vectors = np.array([b.state.amplitudes for b in basis])
    gram_residual = float(np.abs(vectors.conj() @ vectors.T - np.eye(len(basis))).max())
    checks.append(_check("ghz-basis-gram-residual", gram_residual, tol))

    connections = {}
    missing = 0
    for a in FamilyLabel:
        for b in FamilyLabel:
            if a is b:
                continue
            found = pauli_connection_search(a, b, args.size)
            if found is None:
                missing += 1
            else:
                connections[f"{a.value}->{b.value}"] = {"qubit": found[0], "pauli": found[1]}
    checks.append(_check("pauli-connections-missing", float(missing), 0.5))

    for label in FamilyLabel:
        drift = permutation_invariance_check(args.size, label)
        checks.append(_check(f"permutation-invariance-{label.value}", drift, tol))

    results = {"pauli_connections": connections}
    if args.size == 4:
        equivalence = trace_distance(build_family(4, FamilyLabel.RHO_PLUS), _smolin_reference())
        checks.append(_check("doubled-bell-mixture-distance", equivalence, tol))

    passed = all(c["passed"] for c in checks)
    _write_report(args.out, {
        "command": "verify",
        "parameters": {"size": args.size, "tolerance": tol},
        "results": results,
        "checks": checks,
        "passed": passed,
    })
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_cuts(args) -> int:
    rho = build_family(args.size, args.family)
    rows = []
    failures = 0
    for cut in enumerate_cuts(args.size):
        report = analyze_cut(rho, cut)
        small = min(len(cut.side_a), len(cut.side_b))
        expected = {1: "NPT", 2: "PPT"}.get(small)
        ok = expected is None or report.classification == expected
        failures += 0 if ok else 1
        rows.append({
            "cut": cut.label(),
            "min_pt_eigenvalue": report.min_eigenvalue,
            "negativity": report.negativity,
            "classification": report.classification,
            "asserted": expected,
            "passed": ok,
        })
    _write_report(args.out, {
        "command": "cuts",
        "parameters": {"size": args.size, "family": args.family.value,
                       "npt_threshold": -OPERATOR_ATOL},
        "results": {"cuts": rows},
        "checks": [_check("cut-assertion-failures", float(failures), 0.5)],
        "passed": failures == 0,
    })
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def cmd_certify(args) -> int:
    if args.mode == "exact" and args.size > 6:
        print("exact mode supports sizes 4 and 6 only; use --mode sampled", file=sys.stderr)
        return EXIT_USAGE
    certificate, ensemble, transcript = cost_certificate(
        args.size, args.family, mode=args.mode, seed=args.seed, samples=args.samples)
    distance = trace_distance(ensemble.mixed, build_family(args.size, args.family))
    state_tol = STATE_ATOL if args.mode == "exact" else args.tolerance
    checks = [
        _check("lower-bound-equals-achieved",
               abs(certificate.lower_bound - certificate.achieved), 1e-9),
        _check("prepared-state-distance", distance, state_tol),
    ]
    transcript_path = None
    if args.out is not None:
        transcript_path = args.out + ".transcript"
        try:
            transcript.write(transcript_path)
        except OSError as exc:
            print(f"cannot write {transcript_path}: {exc}", file=sys.stderr)
            return EXIT_IO
    passed = certificate.exact and all(c["passed"] for c in checks)
    _write_report(args.out, {
        "command": "certify",
        "parameters": {"size": args.size, "family": args.family.value, "mode": args.mode,
                       "seed": args.seed, "samples": args.samples},
        "results": {
            "lower_bound": certificate.lower_bound,
            "achieved": certificate.achieved,
            "exact": certificate.exact,
            "witness_weights": {f"{i},{j}": w
                                for (i, j), w in sorted(certificate.witness_weights.weights.items())},
            "transcript_id": certificate.protocol_transcript_id,
            "transcript_path": transcript_path,
            "prepared_state_distance": distance,
            "singlets_used": ensemble.singlets_used,
        },
        "checks": checks,
        "passed": passed,
    })
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcabe",
        description="Construct, verify, and certify the 2N-qubit activable bound entangled families.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True, out_required=False):
        p.add_argument("--size", type=int, choices=SIZES, required=True,
                       help="total qubit count 2N")
        if family:
            p.add_argument("--family", type=_family, default=FamilyLabel.RHO_PLUS,
                           help="rho+, rho-, sigma+ or sigma- (default rho+)")
        if out_required:
            p.add_argument("--out", required=True, help="output file path")
        else:
            p.add_argument("--out", default=None,
                           help="report file path (default: print to stdout)")

    p_state = sub.add_parser("state", help="write a family density matrix to a state file")
    common(p_state, out_required=True)
    p_state.set_defaults(func=cmd_state)

    p_verify = sub.add_parser("verify", help="run the structural invariant suite")
    common(p_verify, family=False)
    p_verify.add_argument("--tolerance", type=float, default=1e-12,
                          help="distance threshold for exact identities (default 1e-12)")
    p_verify.set_defaults(func=cmd_verify)

    p_cuts = sub.add_parser("cuts", help="classify every bipartite cut of a family state")
    common(p_cuts)
    p_cuts.set_defaults(func=cmd_cuts)

    p_cert = sub.add_parser("certify", help="certify the N-ebit preparation cost")
    common(p_cert)
    p_cert.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p_cert.add_argument("--seed", type=int, default=0, help="sampled-mode seed (default 0)")
    p_cert.add_argument("--samples", type=int, default=10000,
                        help="sampled-mode run count (default 10000)")
    p_cert.add_argument("--tolerance", type=float, default=0.05,
                        help="sampled-mode distance threshold (default 0.05)")
    p_cert.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
