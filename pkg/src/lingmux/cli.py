"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 infeasible configuration, 4 codec error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import codec, plan
from .codec import NO_EVENT, CodecError, EventStamp, Mode
from .model import AlphabetError, TransferUnit, load_profiles, value_unit

EXIT_USAGE, EXIT_CONFIG, EXIT_CODEC = 2, 3, 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _profile_arg(args, field: str):
    if getattr(args, field, None) is not None:
        return getattr(args, field)
    if args.profile is None:
        raise UsageError(f"give --{field.replace('_', '-')} or --profile")
    catalog = load_profiles(args.profiles)
    try:
        prof = catalog[args.profile]
    except KeyError:
        raise UsageError(f"unknown profile {args.profile!r}; known: {', '.join(catalog)}") from None
    return {"v": prof.v, "np": prof.n_p, "ft": prof.frame_time}[field]


def cmd_search(args, out) -> int:
    v, n_p = _profile_arg(args, "v"), _profile_arg(args, "np")
    rows = plan.search(v, n_p, enumerate_t=args.enumerate_t, moduli=args.moduli)
    labels = plan.status_labels(rows)
    if args.best:
        rows = plan.rank(rows, args.best)
    elif args.feasible_only:
        rows = [r for r in rows if r.feasible]
    if args.top:
        rows = rows[:args.top]
    if args.format == "json":
        out.write(plan.rows_to_json(rows, labels) + "\n")
    else:
        out.write(plan.rows_to_csv(rows, v, labels))
    return 0


def cmd_configure(args, out) -> int:
    v = _profile_arg(args, "v")
    cfg = plan.configure(v, args.N, args.g, args.xi, args.ne, args.target_np)
    if args.format == "csv":
        d = cfg.to_dict()
        out.write(",".join(d) + "\n" + ",".join(str(x) for x in d.values()) + "\n")
    else:
        out.write(json.dumps(cfg.to_dict(), indent=1) + "\n")
    return 0


def cmd_maxne(args, out) -> int:
    n = plan.max_ne(args.N, args.xi, args.g)
    if args.format == "json":
        out.write(json.dumps({"N": args.N, "xi": args.xi, "g": args.g, "n_e_max": n}) + "\n")
    else:
        out.write(f"{n}\n")
    return 0


def _parse_event(text: Optional[str], fplan) -> EventStamp:
    if text is None:
        return NO_EVENT
    if ":" in text and fplan.mode is Mode.SPARE_STAMP:
        raise UsageError("spare-stamp plans take a single integer event position")
    try:
        fields = [int(x) for x in text.split(":")]
    except ValueError:
        raise UsageError(f"bad event {text!r}; use POSITION or M:P") from None
    if len(fields) == 2:
        return fplan.unit_event(*fields)
    if len(fields) != 1:
        raise UsageError(f"bad event {text!r}; use POSITION or M:P")
    return EventStamp(fields[0])


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_encode(args, out) -> int:
    fplan = codec.get_plan(args.plan)
    if args.zeros:
        duty = [TransferUnit.data(0)] * fplan.n_p
    elif args.duty:
        try:
            records = json.loads(_read_text(args.duty))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read duty JSON: {exc}") from None
        if not isinstance(records, list):
            raise UsageError("duty JSON must be an array of {kind, value} records")
        duty = [TransferUnit.from_json(r) for r in records]
    else:
        raise UsageError("give --duty FILE or --zeros")
    event = _parse_event(args.event, fplan)
    payload = codec.encode_payload(fplan, codec.duty_to_values(duty, fplan.alphabet), event)
    out.write(codec.payload_to_hex(payload, fplan.v) + "\n")
    return 0


def cmd_decode(args, out) -> int:
    fplan = codec.get_plan(args.plan)
    text = args.hex if args.hex is not None else _read_text(args.hex_file)
    try:
        payload = codec.hex_to_payload(text, fplan.v)
    except CodecError as exc:
        raise UsageError(str(exc)) from None
    values, event, spare = codec.decode_payload(fplan, payload)
    units = [value_unit(x, fplan.alphabet) for x in values]
    record = {"plan": fplan.name, "duty": [u.to_json() for u in units],
              "event": event.position, "spare": spare}
    if event.present and fplan.mode is not Mode.SPARE_STAMP:
        record["event_unit"] = list(fplan.split_event(event))
    out.write(json.dumps(record) + "\n")
    return 0


def cmd_simulate(args, out) -> int:
    from .sim import simulate

    report = simulate(args.plan, args.frames, args.event_rate, args.seed, args.ctrl_density)
    out.write(report.to_json(timing=args.timing) + "\n")
    return 0 if report.failures == 0 else EXIT_CODEC


def cmd_resolution(args, out) -> int:
    period, freq = plan.resolution(args.M, _profile_arg(args, "ft"))
    if args.format == "json":
        out.write(json.dumps({"M": args.M, "period_ps": period, "frequency_ghz": freq}) + "\n")
    else:
        out.write(f"{period:.2f} ps / {freq:.2f} GHz\n")
    return 0


def cmd_budget(args, out) -> int:
    eb = plan.echo_budget(args.nr, args.count, args.r, args.b)
    if args.format == "json":
        out.write(json.dumps({"total": eb.total, "native": eb.native, "rest": eb.rest}) + "\n")
    else:
        b = args.b
        out.write(f"total 2^{args.r + b}\n"
                  f"native {eb.native >> b}×2^{b}\n"
                  f"rest {eb.rest >> b}×2^{b}\n")
    return 0


def cmd_redundancy(args, out) -> int:
    v, n_p = _profile_arg(args, "v"), _profile_arg(args, "np")
    frac = plan.redundancy(v, n_p)
    if args.format == "json":
        out.write(json.dumps({"v": v, "n_p": n_p, "numerator": frac.numerator,
                              "denominator": frac.denominator, "percent": float(frac) * 100}) + "\n")
    else:
        out.write(f"{float(frac) * 100:.2f}%\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lingmux", description=__doc__.splitlines()[0])
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--profiles", help="profile catalog override file")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_profile(p):
        p.add_argument("--profile", help="take v / n_p / frame time from a catalog profile")
        return p

    p = with_profile(sub.add_parser("search", help="spare-bit search over (n_e, N)"))
    p.add_argument("--v", type=int)
    p.add_argument("--np", type=int)
    p.add_argument("--enumerate-t", action="store_true", help="one row per feasible t, not just the minimum")
    p.add_argument("--best", choices=["s", "N", "w"], help="rank feasible rows by this preference")
    p.add_argument("--moduli", type=_int_list, help="restrict N to these values")
    p.add_argument("--feasible-only", action="store_true")
    p.add_argument("--top", type=int)
    p.set_defaults(func=cmd_search, default_format="csv")

    p = with_profile(sub.add_parser("configure", help="build one multiplexing configuration"))
    p.add_argument("--v", type=int)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--xi", type=int, default=1)
    p.add_argument("--ne", type=int, required=True)
    p.add_argument("--target-np", type=int, required=True)
    p.set_defaults(func=cmd_configure, default_format="json")

    p = sub.add_parser("maxne", help="largest round scope with t = 8 n_e + xi")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--xi", type=int, default=1)
    p.add_argument("--g", type=int, default=1)
    p.set_defaults(func=cmd_maxne, default_format="csv")

    p = sub.add_parser("encode", help="encode a duty frame to payload hex")
    p.add_argument("--plan", choices=codec.PLAN_NAMES, required=True)
    p.add_argument("--duty", help="JSON array of {kind, value} records, '-' for stdin")
    p.add_argument("--zeros", action="store_true", help="all Data(0x00) duty")
    p.add_argument("--event", help="POSITION, or M:P for unit-mode plans")
    p.set_defaults(func=cmd_encode, default_format="json")

    p = sub.add_parser("decode", help="decode payload hex to duty JSON")
    p.add_argument("--plan", choices=codec.PLAN_NAMES, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--hex")
    src.add_argument("--hex-file")
    p.set_defaults(func=cmd_decode, default_format="json")

    p = sub.add_parser("simulate", help="seeded encode/decode roundtrip run")
    p.add_argument("--plan", choices=codec.PLAN_NAMES, required=True)
    p.add_argument("--frames", type=int, default=1000)
    p.add_argument("--event-rate", type=float, default=1.0)
    p.add_argument("--ctrl-density", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="same as the global --seed")
    p.add_argument("--timing", action="store_true", help="include wall time in the report")
    p.set_defaults(func=cmd_simulate, default_format="json")

    p = with_profile(sub.add_parser("resolution", help="event fixation period and frequency"))
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--ft", type=float, help="frame time in ns")
    p.set_defaults(func=cmd_resolution, default_format="csv")

    p = sub.add_parser("budget", help="echo sample budget of one round")
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=cmd_budget, default_format="csv")

    p = with_profile(sub.add_parser("redundancy", help="(v - 8 n_p) / v"))
    p.add_argument("--v", type=int)
    p.add_argument("--np", type=int)
    p.set_defaults(func=cmd_redundancy, default_format="csv")
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"lingmux {args.command}: {exc}\n")
        return EXIT_USAGE
    except plan.ConfigError as exc:
        err.write(f"lingmux {args.command}: infeasible: {exc}\n")
        return EXIT_CONFIG
    except (CodecError, AlphabetError, KeyError) as exc:
        err.write(f"lingmux {args.command}: {exc}\n")
        return EXIT_CODEC
    except ValueError as exc:
        err.write(f"lingmux {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
