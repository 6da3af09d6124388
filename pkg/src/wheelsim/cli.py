"""Headless command-line entry points: trace replay, level validation,
and serving the realtime session service.
"""

from __future__ import annotations

import argparse
import json
import sys

from .devices import (
    adc_joystick,
    default_calibration,
    load_calibration_file,
    normalize,
    trace_source,
)
from .errors import WheelsimError
from .level import load_level_file, parse_level, validate_accessibility, validate_level
from .service import DEFAULT_PORT, create_app
from .session import InputHold, Session, run_headless, save_report_file
from .simulate import SimConfig

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT_ERROR = 2


def _fail(message: str) -> int:
    print(f"wheelsim: error: {message}", file=sys.stderr)
    return EXIT_INPUT_ERROR


def cmd_replay(args) -> int:
    """Replay a recorded trace through the full session pipeline."""
    try:
        level = load_level_file(args.level)
    except (WheelsimError, OSError) as exc:
        return _fail(f"level: {exc}")

    descriptor = adc_joystick()
    if args.calibration is not None:
        try:
            calibration = load_calibration_file(args.calibration)
        except (WheelsimError, OSError) as exc:
            return _fail(f"calibration: {exc}")
    else:
        calibration = default_calibration(descriptor)

    hold = InputHold()
    try:
        for t, axes in trace_source(args.trace):
            sample = normalize(axes, descriptor, calibration, t=t)
            hold.push(t, sample.x, sample.y)
    except (WheelsimError, OSError) as exc:
        return _fail(f"trace: {exc}")

    try:
        cfg = SimConfig(assist_gain=args.assist)
    except ValueError as exc:
        return _fail(str(exc))
    session = Session(level, cfg=cfg, max_duration=args.max_duration)
    report = run_headless(session, hold)
    try:
        save_report_file(report, args.report)
    except OSError as exc:
        return _fail(f"report: {exc}")

    m = report.metrics
    print(f"{level.id}: {report.end_reason} after {m.elapsed:.2f}s | "
          f"on-route {m.on_route_time:.2f}s off-route {m.off_route_time:.2f}s | "
          f"collisions {m.collision_count} waypoints {m.waypoints_hit}")
    return EXIT_OK


def cmd_validate(args) -> int:
    """List structural and accessibility problems with a level file."""
    try:
        with open(args.level, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        return _fail(f"level: {exc}")
    try:
        doc = json.loads(raw.decode("utf-8"))
        level = parse_level(doc, check=False)
    except (ValueError, WheelsimError) as exc:
        print(f"parse: {exc}")
        return EXIT_VIOLATIONS

    violations = validate_level(level) + validate_accessibility(level)
    for v in violations:
        print(v)
    if violations:
        return EXIT_VIOLATIONS
    print(f"{level.id}: ok")
    return EXIT_OK


def cmd_serve(args) -> int:
    """Run the WebSocket/HTTP session service until interrupted."""
    import uvicorn

    try:
        app = create_app(level_dir=args.level_dir, ui_dir=args.ui_dir)
    except ValueError as exc:
        return _fail(f"serve: {exc}")

    class GracefulServer(uvicorn.Server):
        # On SIGINT/SIGTERM, let open sessions finish with an Ended message
        # before the connections are torn down.
        def handle_exit(self, sig, frame):
            loop = getattr(app.state, "loop", None)
            if loop is not None:
                loop.call_soon_threadsafe(app.state.shutdown.set)
            super().handle_exit(sig, frame)

    config = uvicorn.Config(app, host=args.host, port=args.port,
                            log_level=args.log_level, ws="websockets")
    server = GracefulServer(config)
    try:
        server.run()
    except OSError as exc:
        return _fail(f"serve: {exc}")
    return EXIT_OK


def _port(value: str) -> int:
    port = int(value)
    if not (0 < port < 65536):
        raise argparse.ArgumentTypeError("port must be in 1..65535")
    return port


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wheelsim",
        description="Headless wheelchair-driving simulator tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    replay = sub.add_parser(
        "replay", help="replay a recorded input trace and write a report")
    replay.add_argument("--level", required=True, help="level JSON file")
    replay.add_argument("--trace", required=True,
                        help="JSON Lines input trace ({t, axes})")
    replay.add_argument("--calibration", default=None,
                        help="calibration JSON (default: device midpoints)")
    replay.add_argument("--report", required=True, help="output report path")
    replay.add_argument("--assist", type=float, default=0.0,
                        help="obstacle-avoid assist gain (default 0, off)")
    replay.add_argument("--max-duration", type=float, default=180.0,
                        help="session cutoff in seconds (default 180)")
    replay.set_defaults(func=cmd_replay)

    validate = sub.add_parser("validate",
                              help="check a level file's structure and accessibility")
    validate.add_argument("--level", required=True, help="level JSON file")
    validate.set_defaults(func=cmd_validate)

    serve = sub.add_parser("serve", help="run the realtime session service")
    serve.add_argument("--port", type=_port, default=DEFAULT_PORT)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--level-dir", default=None,
                       help="level directory (default: $WHEELSIM_LEVEL_DIR or ./levels)")
    serve.add_argument("--ui-dir", default=None,
                       help="serve a built browser client from /ui")
    serve.add_argument("--log-level", default="info")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
