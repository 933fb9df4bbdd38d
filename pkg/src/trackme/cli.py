"""Command-line access to every engine feature.

Summaries are printed as JSON on stdout so the commands compose in scripts;
human-oriented diagnostics go to stderr. Exit codes: 0 success, 1 validation
error, 2 engine precondition failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .association import AssociationParams, run_association
from .batch_edit import ModificationRequest, modify_range
from .config import load_project_config
from .detections import DEFAULT_MIN_CONFIDENCE, import_detections
from .errors import PreconditionError, TrackmeError, ValidationError
from .interpolation import RQKernelParams, build_keyframe_plan, interpolate_track
from .mot import export_mot
from .report import write_report
from .service import DEFAULT_HOST, DEFAULT_PORT, serve
from .storage import open_project, validate_project

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(summary: Any) -> None:
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trackme", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check every annotation file")
    p.add_argument("dir")

    p = sub.add_parser("interpolate", help="fill boxes between keyframes")
    p.add_argument("dir")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.add_argument("--interval", type=int, required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--id", type=int, default=None)

    p = sub.add_parser("associate", help="assign track IDs forward")
    p.add_argument("dir")
    p.add_argument("--mode", choices=["scratch", "current"], required=True)
    p.add_argument("--frame", type=int, default=0, help="starting frame (default 0)")
    p.add_argument("--end", type=int, default=None, help="last frame (default: end)")
    p.add_argument("--method", default="sort")

    p = sub.add_parser("modify", help="batch delete / re-ID / re-label")
    p.add_argument("dir")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.add_argument("--label", default=None, help="target label (blank = any)")
    p.add_argument("--id", type=int, default=None, help="target id (blank = any)")
    p.add_argument("--mode", choices=["remove-all", "swap-id", "swap-label"],
                   required=True)
    p.add_argument("--new-id", type=int, default=None)
    p.add_argument("--new-label", default=None)

    p = sub.add_parser("import-dets", help="import detector output as null-ID boxes")
    p.add_argument("dir")
    p.add_argument("--file", required=True)
    p.add_argument("--min-conf", type=float, default=DEFAULT_MIN_CONFIDENCE)
    p.add_argument("--replace", action="store_true")
    p.add_argument("--label-map", default=None,
                   help="JSON file mapping class index to label")

    p = sub.add_parser("export", help="write tracks in MOT CSV form")
    p.add_argument("dir")
    p.add_argument("--format", choices=["mot"], default="mot")
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="coverage figures and per-track table")
    p.add_argument("dir")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("serve", help="run the HTTP service for the browser UI")
    p.add_argument("dir")
    p.add_argument("--host", default=DEFAULT_HOST)
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--ui", default=None, help="static UI bundle to serve at /")

    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "validate":
        report = validate_project(open_project(args.dir))
        _emit(report.to_dict())
        return EXIT_OK if report.ok else EXIT_VALIDATION

    if args.command == "interpolate":
        project = open_project(args.dir)
        plan = build_keyframe_plan(args.start, args.end, args.interval,
                                   args.label, args.id)
        params = RQKernelParams.from_config(load_project_config(args.dir))
        _emit(interpolate_track(project, plan, params))
        return EXIT_OK

    if args.command == "associate":
        project = open_project(args.dir)
        params = AssociationParams.from_config(load_project_config(args.dir))
        summary = run_association(project, args.mode, args.frame, args.end,
                                  params, method=args.method)
        _emit(summary)
        return EXIT_OK

    if args.command == "modify":
        project = open_project(args.dir)
        req = ModificationRequest(
            start_frame=args.start,
            end_frame=args.end,
            mode=args.mode.replace("-", "_"),
            target_label=args.label,
            target_id=args.id,
            new_label=args.new_label,
            new_id=args.new_id,
        )
        _emit(modify_range(project, req))
        return EXIT_OK

    if args.command == "import-dets":
        from pathlib import Path

        project = open_project(args.dir)
        label_map = None
        if args.label_map:
            raw = json.loads(Path(args.label_map).read_text(encoding="utf-8"))
            label_map = {int(k): str(v) for k, v in raw.items()}
        summary = import_detections(project, args.file, label_map,
                                    args.min_conf, args.replace)
        _emit(summary)
        return EXIT_OK

    if args.command == "export":
        project = open_project(args.dir)
        _emit(export_mot(project, args.out))
        return EXIT_OK

    if args.command == "report":
        project = open_project(args.dir)
        _emit(write_report(project, args.out))
        return EXIT_OK

    if args.command == "serve":
        serve(args.dir, host=args.host, port=args.port, ui_dir=args.ui)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValidationError, TrackmeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as e:
        print(f"error: malformed JSON: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
