"""Command line front end: stripe files across simulated node directories,
rebuild or decode lost nodes, scrub for corruption, verify MDS, report ratios.

Exit codes: 0 ok, 1 failed verification, 2 uncorrectable, 3 config/usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, codec, files
from .construct import CodeSpecError, build_code, verify_mds
from .gf import FieldError, field_from_token

CONFIG_KEYS = {"family", "vectors", "m", "r", "s", "scheme", "field", "w"}


class CliError(Exception):
    def __init__(self, message, code=3):
        super().__init__(message)
        self.code = code


def parse_config(path: str):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if key not in CONFIG_KEYS:
                    raise CliError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value
    except OSError as e:
        raise CliError(f"cannot read config: {e}") from None

    scheme = values.get("scheme")
    if not scheme:
        raise CliError("config needs scheme=")
    if scheme == "table":
        raise CliError("table-scheme codes carry coefficients only through the API")
    try:
        field = field_from_token(values["field"]) if "field" in values else None
        spec = build_code(
            scheme,
            family=values.get("family", "standard"),
            m=int(values["m"]) if "m" in values else None,
            r=int(values["r"]) if "r" in values else None,
            s=int(values.get("s", 1)),
            w=int(values["w"]) if "w" in values else None,
            vectors=values.get("vectors"),
            field=field,
        )
    except (CodeSpecError, FieldError, ValueError) as e:
        raise CliError(f"bad config: {e}") from None
    return spec


def _stripe_columns(symbols_by_node, spec, t):
    p = spec.p
    return {node: syms[t * p:(t + 1) * p] for node, syms in symbols_by_node.items()}


def _stripe_from_columns(spec, columns):
    info = [[None] * spec.k for _ in range(spec.p)]
    parity = [[None] * spec.p for _ in range(spec.r)]
    for node, col in columns.items():
        if node < spec.k:
            for x in range(spec.p):
                info[x][node] = col[x]
        else:
            parity[node - spec.k] = list(col)
    return codec.Stripe(spec, info, parity)


def _load_dir(directory):
    manifest_path = os.path.join(directory, "manifest")
    if not os.path.exists(manifest_path):
        raise CliError(f"no manifest in {directory}")
    try:
        mf = files.read_manifest(manifest_path)
        spec = files.spec_from_manifest(mf)
    except (files.FormatError, CodeSpecError, FieldError, ValueError) as e:
        raise CliError(f"bad manifest: {e}") from None
    return mf, spec


def _fraction_str(fr):
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


def cmd_encode(args):
    spec = parse_config(args.config)
    try:
        with open(args.input, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise CliError(f"cannot read input: {e}")
    q = spec.field.q
    symbols = files.bytes_to_symbols(data, q)
    cap = spec.p * spec.k
    nstripes = (len(symbols) + cap - 1) // cap
    symbols.extend([0] * (nstripes * cap - len(symbols)))

    per_node = [[] for _ in range(spec.n)]
    for t in range(nstripes):
        block = symbols[t * cap:(t + 1) * cap]
        info = [[block[j * spec.p + x] for j in range(spec.k)] for x in range(spec.p)]
        stripe = codec.encode(spec, info)
        for node in range(spec.n):
            per_node[node].extend(stripe.column(node))

    os.makedirs(args.out, exist_ok=True)
    for node in range(spec.n):
        files.write_node_file(os.path.join(args.out, files.node_filename(node)),
                              per_node[node], q)
    files.write_manifest(os.path.join(args.out, "manifest"),
                         files.manifest_for(spec, len(data), nstripes))
    print(f"encoded {len(data)} bytes into {nstripes} stripes across "
          f"{spec.n} nodes ({spec.k} data + {spec.r} parity) in {args.out}")
    return 0


def _decode_payload(spec, mf, symbols_by_node):
    """Recover the original byte payload from intact systematic columns."""
    out = []
    for t in range(mf.stripe_count):
        cols = _stripe_columns(symbols_by_node, spec, t)
        for j in range(spec.k):
            out.extend(cols[j])
    return files.symbols_to_bytes(out, spec.field.q, mf.payload_length)


def cmd_rebuild(args):
    mf, spec = _load_dir(args.dir)
    present = files.read_columns(args.dir, spec)
    missing = [i for i in range(spec.n) if i not in present]
    if len(missing) != 1:
        raise CliError(f"{len(missing)} nodes missing; rebuild handles exactly one "
                       f"(use decode for multi-node loss)")
    if args.node is not None and args.node != missing[0]:
        raise CliError(f"node {args.node} file is present; node {missing[0]} is the missing one")
    lost = missing[0]

    restored = []
    plan = None
    for t in range(mf.stripe_count):
        stripe = _stripe_from_columns(spec, _stripe_columns(present, spec, t))
        values, plan = codec.rebuild_one(spec, stripe, lost)
        restored.extend(values)
    files.write_node_file(os.path.join(args.dir, files.node_filename(lost)),
                          restored, spec.field.q)

    print(f"rebuilt node_{lost:02d} ({mf.stripe_count} stripes)")
    if plan is not None:
        for node in sorted(plan.access):
            print(f"  read node_{node:02d}: {plan.cells_in(node)} cells/stripe")
        print(f"ratio {_fraction_str(plan.ratio(spec))}")
    elif mf.stripe_count == 0:
        print("ratio 0 (empty payload)")
    return 0


def cmd_decode(args):
    mf, spec = _load_dir(args.dir)
    present = files.read_columns(args.dir, spec)
    absent = [i for i in range(spec.n) if i not in present]
    named = set()
    if args.missing:
        try:
            named = {int(tok) for tok in args.missing.split(",")}
        except ValueError:
            raise CliError("--missing takes a comma-separated list of node indices")
        if any(i < 0 or i >= spec.n for i in named):
            raise CliError("missing node index out of range")
    # nodes named as missing are regenerated even if a (distrusted) file exists
    missing = sorted(named | set(absent))
    present = {i: c for i, c in present.items() if i not in named}
    if len(missing) > spec.r:
        print(f"{len(missing)} nodes lost; only {spec.r} recoverable", file=sys.stderr)
        return 2
    if not missing and not args.out:
        print("nothing to decode")
        return 0

    restored = {i: [] for i in missing}
    for t in range(mf.stripe_count):
        stripe = _stripe_from_columns(spec, _stripe_columns(present, spec, t))
        full = codec.decode_erasures(spec, stripe, missing)
        for i in missing:
            restored[i].extend(full.column(i))
    for i in missing:
        files.write_node_file(os.path.join(args.dir, files.node_filename(i)),
                              restored[i], spec.field.q)
        present[i] = restored[i]
    print("restored " + " ".join(files.node_filename(i) for i in missing))
    if args.out:
        payload = _decode_payload(spec, mf, present)
        with open(args.out, "wb") as fh:
            fh.write(payload)
        print(f"wrote {len(payload)} payload bytes to {args.out}")
    return 0


def cmd_scrub(args):
    mf, spec = _load_dir(args.dir)
    present = files.read_columns(args.dir, spec)
    missing = [i for i in range(spec.n) if i not in present]
    if missing:
        raise CliError(f"{len(missing)} node files missing; scrub needs a complete "
                       f"directory (use rebuild/decode first)")

    located = set()
    dirty = False

    # Symbols outside [0, q) cannot even enter the syndrome computation;
    # treat whole nodes carrying them as erasures and restore those first.
    q = spec.field.q
    bad = [i for i in range(spec.n) if any(v >= q for v in present[i])]
    if bad:
        if len(bad) > spec.r:
            print(f"{len(bad)} nodes hold invalid symbols; beyond {spec.r}-erasure repair")
            return 2
        fixed = {i: [] for i in bad}
        for t in range(mf.stripe_count):
            cols = {i: c for i, c in _stripe_columns(present, spec, t).items() if i not in bad}
            full = codec.decode_erasures(spec, _stripe_from_columns(spec, cols), bad)
            for i in bad:
                fixed[i].extend(full.column(i))
        for i in bad:
            present[i] = fixed[i]
        located.update(bad)
        dirty = True
    for t in range(mf.stripe_count):
        stripe = _stripe_from_columns(spec, _stripe_columns(present, spec, t))
        if spec.r != 2:
            if any(any(v for v in s) for s in codec.syndrome(spec, stripe)):
                print(f"stripe {t}: inconsistent (error location needs r=2)")
                return 2
            continue
        scan = codec.decode_error(spec, stripe)
        if scan.status == "uncorrectable":
            print(f"stripe {t}: uncorrectable (more than one corrupted column)")
            return 2
        if scan.status == "corrected":
            dirty = True
            located.add(scan.location)
            for node in range(spec.n):
                present[node][t * spec.p:(t + 1) * spec.p] = scan.stripe.column(node)

    if not dirty:
        print("no error")
        return 0
    for node in sorted(located):
        files.write_node_file(os.path.join(args.dir, files.node_filename(node)),
                              present[node], spec.field.q)
        print(f"corrected node_{node:02d}")
    return 0


def cmd_verify(args):
    spec = parse_config(args.config)
    try:
        report = verify_mds(spec)
    except ValueError as e:
        raise CliError(str(e))
    if report.is_mds:
        print(f"MDS: yes (checked {report.patterns_checked} patterns)")
        return 0
    print(f"MDS: no (first failing pattern: nodes {list(report.failing_pattern)}, "
          f"after {report.patterns_checked} patterns)")
    return 1


def cmd_ratio(args):
    spec = parse_config(args.config)
    report = analysis.ratio_report(spec)
    print(f"code: {spec!r}")
    print(report.as_table())
    for line in report.as_kv_lines():
        print(line)
    return 0


def cmd_dump_coefficients(args):
    spec = parse_config(args.config)
    for row in range(spec.p):
        for col in range(spec.k):
            for sidx in range(1, spec.r):
                print(f"{row} {col} {sidx} {spec.coefficient(row, col, sidx)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="zzmds",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="stripe a file across node files")
    p.add_argument("input")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("rebuild", help="restore a single lost node with minimal reads")
    p.add_argument("dir")
    p.add_argument("--node", type=int, default=None)
    p.set_defaults(func=cmd_rebuild)

    p = sub.add_parser("decode", help="restore up to r lost nodes")
    p.add_argument("dir")
    p.add_argument("--missing", default=None, help="comma-separated node indices")
    p.add_argument("--out", default=None, help="also write the reassembled payload here")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("scrub", help="detect, locate and fix a corrupted node")
    p.add_argument("dir")
    p.set_defaults(func=cmd_scrub)

    p = sub.add_parser("verify", help="exhaustively check the MDS property")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ratio", help="report predicted/measured rebuild ratios")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("dump-coefficients", help="emit the coefficient table")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_dump_coefficients)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except files.FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except codec.CodecError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
