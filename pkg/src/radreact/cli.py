"""Command line entry point: ``radreact run | check | sweep``."""

from __future__ import annotations

import argparse
import copy
import json
import logging
import sys

from .errors import ConfigError, RadReactError
from .runner import TASKS, emit_report, load_config, run_scenario, scenario_from_dict

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _parser():
    parser = argparse.ArgumentParser(prog="radreact",
                                     description="Radiation-reaction comparison scenarios")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario and write its report")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--formats", default="json,csv")
    run.add_argument("--tasks", default=None,
                     help=f"comma-separated subset of {','.join(TASKS)}")
    run.add_argument("--seedless", action="store_true",
                     help="accepted for interface stability; the pipeline has no randomness")
    run.add_argument("--timing", action="store_true",
                     help="record wall time in the report (breaks byte-identical reruns)")

    check = sub.add_parser("check", help="validate a scenario file without running it")
    check.add_argument("--config", required=True)

    sweep = sub.add_parser("sweep", help="run a scenario once per value of one key")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--vary", required=True, help="dotted.key=v1,v2,...")
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--formats", default="json,csv")
    return parser


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _set_dotted(data, key, value):
    parts = key.split(".")
    node = data
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot set {key!r}: {part!r} is not an object")
    node[parts[-1]] = value


def _summary(report):
    failed = [name for name, c in report.checks.items() if not c["passed"]]
    lines = [f"scenario {report.scenario['scenario_id']}: "
             f"{len(report.checks) - len(failed)}/{len(report.checks)} checks passed"]
    lines += [f"  FAILED check {name}: {report.checks[name]['value']}" for name in failed]
    lines += [f"  task {t} error: {report.results[t]['error']}" for t in report.failed_tasks]
    return "\n".join(lines)


def _run_one(scenario, args, out):
    report = run_scenario(scenario)
    if out is not None:
        formats = [f.strip() for f in args.formats.split(",") if f.strip()]
        paths = emit_report(report, out, formats, getattr(args, "timing", False))
        for path in paths:
            print(path)
    print(_summary(report))
    return report


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "check":
            scenario = load_config(args.config)
            print(json.dumps(scenario.echo(), indent=2, sort_keys=True))
            return EXIT_OK

        if args.command == "run":
            scenario = load_config(args.config)
            if args.tasks:
                data = scenario.echo()
                data["tasks"] = args.tasks
                scenario = scenario_from_dict(data)
            report = _run_one(scenario, args, args.out)
            return EXIT_OK if report.all_passed else EXIT_NUMERICAL

        key, _, values = args.vary.partition("=")
        if not key or not values:
            raise ConfigError("--vary expects key=v1,v2,...")
        base = load_config(args.config)
        status = EXIT_OK
        for text in values.split(","):
            data = copy.deepcopy(base.echo())
            _set_dotted(data, key, _parse_value(text))
            data["scenario_id"] = f"{base.scenario_id}__{key}={text}"
            report = _run_one(scenario_from_dict(data), args, args.out)
            if not report.all_passed:
                status = EXIT_NUMERICAL
        return status
    except ConfigError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RadReactError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
