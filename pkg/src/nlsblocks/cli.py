"""Command line entry point: nlsblocks <subcommand> ...

Every JSON output embeds a run manifest and is written with sorted keys, so
identical inputs give byte-identical files.  Exit codes: 0 success, 1 a
certification failure, 2 bad input.  NLSBLOCKS_WORKERS sets the size of the
process pool used by certify (default 1).
"""

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .blocks import build_CA
from .certificate import FAIL, INCONCLUSIVE, Certificate
from .certify import (irreducible, real_root_region, region_at, region_certificate,
                      replay, separation)
from .errors import CertificateError, InconclusiveDimension, NlsBlocksError
from .genericity import (CONSTRAINT_2_BOUND, ConstraintReport, check_battery,
                         generate_generic, replay_report, resonance_list)
from .graphs import ColoredMarkedGraph, canonical_key, enumerate_blocks, ensure_embedded
from .melnikov import PlacedBlock, first_melnikov, second_melnikov
from .polycore import T, Polynomial, bezoutiante, char_poly
from .realization import SiteList, solve_realization

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --- manifest and IO ---------------------------------------------------------------------

def _input_hash(arg):
    if arg.lstrip().startswith("{"):
        return hashlib.sha256(arg.encode()).hexdigest()
    with open(arg, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def manifest(args, inputs=(), resonance_hash=None, started=None):
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "out", "timing", "command") and v is not None}
    out = {"command": args.command, "parameters": params,
           "inputs": {name: _input_hash(getattr(args, name)) for name in inputs},
           "resonance_list": resonance_hash, "version": __version__}
    if getattr(args, "timing", False) and started is not None:
        out["wall_time"] = round(time.perf_counter() - started, 3)
    return out


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(args, payload):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _graph_json(arg):
    """--graph value: a JSON file, or inline JSON when it starts with '{'."""
    if arg.lstrip().startswith("{"):
        try:
            return json.loads(arg)
        except json.JSONDecodeError as exc:
            raise InputError(f"--graph is not valid JSON: {exc}") from exc
    return _load_json(arg)


def load_graph(data):
    """A graph from its JSON form or from {"points": [...]}."""
    if "points" in data:
        return ColoredMarkedGraph.from_points([tuple(p) for p in data["points"]])
    return ColoredMarkedGraph.from_dict(data)


def load_sites(path):
    """A site list, bare or wrapped as the "sites" entry of a gen-generic output."""
    data = _load_json(path)
    if isinstance(data, dict) and isinstance(data.get("sites"), dict):
        data = data["sites"]
    try:
        return SiteList.from_dict(data)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_catalog(path):
    data = _load_json(path)
    try:
        return [ensure_embedded(load_graph(b["graph"])) for b in data["blocks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed catalog {path}: {exc}") from exc


def parse_int_list(text):
    try:
        return tuple(int(c) for c in text.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"expected a list of integers, got {text!r}") from exc


# --- subcommands -------------------------------------------------------------------------

def cmd_enumerate(args, started):
    blocks = enumerate_blocks(args.n, args.m, max_vertices=args.max_vertices)
    entries = []
    for idx, g in enumerate(blocks):
        entries.append({"index": idx, "key": repr(canonical_key(g.vertices)),
                        "graph": g.to_dict(), "chi": str(char_poly(build_CA(g).mat))})
    _emit(args, {"manifest": manifest(args, started=started), "n": args.n, "m": args.m,
                 "blocks": entries})
    return EXIT_OK


def cmd_charpoly(args, started):
    g = ensure_embedded(load_graph(_graph_json(args.graph)))
    B = build_CA(g)
    _emit(args, {"manifest": manifest(args, ["graph"], started=started),
                 "matrix": B.mat.to_json(), "chi": str(char_poly(B.mat))})
    return EXIT_OK


def _block_certificates(g):
    chi = char_poly(build_CA(g).mat)
    return {"chi": str(chi), "irreducible": irreducible(chi, graph=g).to_dict(),
            "real_roots": region_certificate(chi).to_dict() if chi.degree(T) > 1 else None}


def _workers():
    try:
        return max(1, int(os.environ.get("NLSBLOCKS_WORKERS", "1")))
    except ValueError as exc:
        raise InputError("NLSBLOCKS_WORKERS must be an integer") from exc


def _map(fn, items):
    workers = _workers()
    if workers == 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def cmd_certify(args, started):
    graphs = load_catalog(args.catalog)
    battery = set(args.battery.split(","))
    unknown = battery - {"irreducible", "separation", "real-roots"}
    if unknown:
        raise InputError(f"unknown battery entries: {sorted(unknown)}")
    per_block = _map(_block_certificates, graphs)
    entries = []
    failed = False
    for idx, (g, certs) in enumerate(zip(graphs, per_block)):
        entry = {"index": idx, "chi": certs["chi"]}
        if "irreducible" in battery:
            entry["irreducible"] = certs["irreducible"]
            failed |= certs["irreducible"]["verdict"] == FAIL
        if "real-roots" in battery:
            entry["real_roots"] = certs["real_roots"]
        entries.append(entry)
    out = {"manifest": manifest(args, ["catalog"], started=started), "blocks": entries}
    if "separation" in battery:
        sep = separation(graphs)
        out["separation"] = sep.to_dict()
        failed |= sep.failed
    _emit(args, out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_separate(args, started):
    graphs = load_catalog(args.catalog)
    cert = separation(graphs, with_conjugates=not args.no_conjugates)
    _emit(args, {"manifest": manifest(args, ["catalog"], started=started),
                 "certificate": cert.to_dict()})
    return EXIT_FAIL if cert.failed else EXIT_OK


def cmd_realize(args, started):
    g = load_graph(_graph_json(args.graph))
    sites = load_sites(args.sites)
    root = tuple(parse_int_list(args.root)) if args.root else None
    if root is not None and root not in g.vertices:
        raise InputError(f"root {list(root)} is not a vertex")
    result = solve_realization(g, sites, root)
    _emit(args, {"manifest": manifest(args, ["graph", "sites"], started=started),
                 "kind": type(result).__name__, "result": result.to_dict()})
    return EXIT_OK


def cmd_check_generic(args, started):
    sites = load_sites(args.sites)
    n = args.n or sites.n
    reports = check_battery(sites, n, args.bound)
    digest = resonance_list(n).digest()
    _emit(args, {"manifest": manifest(args, ["sites"], digest, started), "n": n,
                 "bound": args.bound, "sites": sites.to_dict(),
                 "reports": [r.to_dict() for r in reports]})
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_gen_generic(args, started):
    sites = generate_generic(args.n, args.m, args.C, args.D, args.bound, verify=not args.no_verify)
    digest = resonance_list(args.n).digest()
    _emit(args, {"manifest": manifest(args, [], digest, started), "sites": sites.to_dict()})
    return EXIT_OK


def _placed_blocks(data):
    items = data["blocks"] if isinstance(data, dict) and "blocks" in data else data
    if isinstance(items, dict):
        items = [items]
    out = []
    for item in items:
        g = ensure_embedded(load_graph(item["graph"] if "graph" in item else item))
        root = item.get("root") if "graph" in item else None
        out.append(PlacedBlock(g, tuple(root) if root is not None else None))
    return out


def cmd_melnikov(args, started):
    sites = load_sites(args.sites) if args.sites else None
    blocks = _placed_blocks(_load_json(args.blocks)) if args.blocks else []
    nu = parse_int_list(args.nu)
    if sites is not None and len(nu) != sites.m:
        raise InputError(f"nu has {len(nu)} entries for {sites.m} sites")
    inputs = [k for k in ("sites", "blocks") if getattr(args, k)]
    try:
        if args.order == 0:
            cert = first_melnikov(None, nu, sites)
        elif args.order == 1:
            if len(blocks) < 1:
                raise InputError("order 1 needs one block")
            cert = first_melnikov(blocks[0], nu, sites, args.sigma)
        else:
            if len(blocks) < 2:
                raise InputError("order 2 needs two blocks")
            cert = second_melnikov(blocks[0], blocks[1], nu, args.sigma, sites, n=args.n)
    except InconclusiveDimension as exc:
        cert = Certificate(INCONCLUSIVE, "WeakSeparation", exc.report, {"nu": list(nu)})
    _emit(args, {"manifest": manifest(args, inputs, started=started),
                 "certificate": cert.to_dict()})
    return EXIT_FAIL if cert.failed else EXIT_OK


def cmd_real_roots(args, started):
    if args.graph:
        chi = char_poly(build_CA(ensure_embedded(load_graph(_graph_json(args.graph)))).mat)
    else:
        try:
            chi = Polynomial.parse(args.chi)
        except NlsBlocksError as exc:
            raise InputError(str(exc)) from exc
    minors = real_root_region(chi)
    bez = bezoutiante(chi)
    variables = sorted(v for v in chi.variables() if v != T)
    rng = random.Random(args.seed)
    disagreements = []
    for _ in range(args.points):
        point = {v: Fraction(rng.randint(1, 40), rng.randint(1, 9)) for v in variables}
        inside, sig, sturm = region_at(chi, point, minors, bez)
        if sig != sturm or inside != (sturm == chi.degree(T)):
            disagreements.append({str(v): str(c) for v, c in point.items()})
    cert = region_certificate(chi)
    _emit(args, {"manifest": manifest(args, [k for k in ("graph",) if args.graph], started=started),
                 "certificate": cert.to_dict(), "points": args.points,
                 "disagreements": disagreements})
    return EXIT_FAIL if disagreements else EXIT_OK


def _replay_one(cert_dict):
    cert = Certificate.from_dict(cert_dict)
    got = replay(cert)
    return got == cert.verdict, cert.verdict, got


def cmd_replay(args, started):
    data = _load_json(args.certificate)
    results = []
    try:
        if "reports" in data:
            sites = SiteList.from_dict(data["sites"])
            n = data["n"]
            fresh = check_battery(sites, n, data.get("bound", CONSTRAINT_2_BOUND))
            for old, new in zip(data["reports"], fresh):
                report = ConstraintReport(old["constraint"], old["verdict"], old["witness"],
                                          old.get("detail", {}))
                ok = new.verdict == report.verdict
                if report.verdict == FAIL:
                    ok &= replay_report(report, sites, n)
                results.append({"item": old["constraint"], "stored": old["verdict"],
                                "replayed": new.verdict, "match": ok})
            if len(data["reports"]) != len(fresh):
                results.append({"item": "reports", "match": False})
        else:
            certs = []
            if "verdict" in data:
                certs.append(("certificate", data))
            if "certificate" in data:
                certs.append(("certificate", data["certificate"]))
            if "separation" in data:
                certs.append(("separation", data["separation"]))
            for entry in data.get("blocks", []):
                for key in ("irreducible", "real_roots"):
                    if entry.get(key):
                        certs.append((f"block {entry['index']} {key}", entry[key]))
            if not certs:
                raise InputError("no certificates found in the file")
            for name, c in certs:
                ok, stored, got = _replay_one(c)
                results.append({"item": name, "stored": stored, "replayed": got, "match": ok})
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"schema error in {args.certificate}: {exc}") from exc
    corrupt = [r for r in results if not r["match"]]
    _emit(args, {"manifest": manifest(args, ["certificate"], started=started),
                 "results": results, "corrupt": len(corrupt)})
    if corrupt:
        print(f"replay mismatch: {len(corrupt)} item(s) do not reproduce", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="nlsblocks",
                                description="Block spectra, genericity and Melnikov certificates.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--timing", action="store_true",
                        help="record wall time in the manifest (breaks byte-identical reruns)")
        return sp

    sp = add("enumerate", cmd_enumerate, "write the block catalog")
    sp.add_argument("--n", type=int, required=True, help="dimension")
    sp.add_argument("--m", type=int, required=True, help="number of site indices")
    sp.add_argument("--max-vertices", type=int, help="default: n + 1")

    sp = add("charpoly", cmd_charpoly, "C_A and its characteristic polynomial")
    sp.add_argument("--graph", required=True,
                    help="graph JSON (file or inline), or {\"points\": [...]}")

    sp = add("certify", cmd_certify, "irreducibility, separation and real-root region")
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--battery", default="irreducible,separation,real-roots",
                    help="comma separated (default: %(default)s)")

    sp = add("separate", cmd_separate, "pairwise separation of characteristic polynomials")
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--no-conjugates", action="store_true")

    sp = add("realize", cmd_realize, "solve the realization system of a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--sites", required=True)
    sp.add_argument("--root", help="root vertex as integers (default: graph root)")

    sp = add("check-generic", cmd_check_generic, "constraints and resonance list on a site list")
    sp.add_argument("--sites", required=True)
    sp.add_argument("--n", "--dim", dest="n", type=int, help="default: dimension of the sites")
    sp.add_argument("--bound", type=int, default=CONSTRAINT_2_BOUND,
                    help="constraint 2 bound (default: %(default)s)")

    sp = add("gen-generic", cmd_gen_generic, "generate a generic site list")
    sp.add_argument("--n", "--dim", dest="n", type=int, required=True, help="dimension")
    sp.add_argument("--m", "--count", dest="m", type=int, required=True, help="number of sites")
    sp.add_argument("--C", type=int, help="base (default: from the resonance list)")
    sp.add_argument("--D", type=int, help="exponent base (default: from the resonance list)")
    sp.add_argument("--bound", type=int, default=CONSTRAINT_2_BOUND)
    sp.add_argument("--no-verify", action="store_true")

    sp = add("melnikov", cmd_melnikov, "first or second Melnikov condition")
    sp.add_argument("--sites", help="site list JSON (omit for the site-free worst case)")
    sp.add_argument("--blocks", help="block JSON: {\"blocks\": [{\"graph\": ..., \"root\": [...]}]}")
    sp.add_argument("--nu", required=True, help="integers, comma or space separated")
    sp.add_argument("--order", type=int, choices=(0, 1, 2), default=1)
    sp.add_argument("--sigma", type=int, choices=(1, -1), default=1)
    sp.add_argument("--n", type=int, help="dimension when no sites or roots are given")

    sp = add("real-roots", cmd_real_roots, "Bezoutiante region and Sturm cross-check")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph")
    g.add_argument("--chi", help="polynomial in t and x1, x2, ...")
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("replay", cmd_replay, "re-verify a certificate or report file")
    sp.add_argument("certificate")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NlsBlocksError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
