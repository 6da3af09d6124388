"""wheelsim: a deterministic differential-drive wheelchair driving simulator
with route-corridor metrics, input-device calibration, and a realtime
session service.
"""

from .chair import (
    ChairParams,
    ChairState,
    JoystickSample,
    WheelCommand,
    apply_slew,
    integrate_pose,
    map_joystick,
)
from .contrast import contrast_ratio, parse_hex_color, relative_luminance
from .devices import (
    Calibration,
    DeviceDescriptor,
    adc_joystick,
    calibrate_center,
    default_calibration,
    load_calibration_file,
    normalize,
    save_calibration_file,
    synthetic_gamepad,
    trace_source,
    write_trace,
)
from .errors import (
    DecodeError,
    DescriptorMismatch,
    InsufficientSamples,
    NonMonotonicTimestamps,
    ParseError,
    SessionEnded,
    SessionNotEnded,
    ValidationError,
    WheelsimError,
)
from .events import EventKind, SimEvent
from .geometry import Polyline, normalize_angle
from .level import (
    Circle,
    Level,
    load_level,
    load_level_file,
    parse_level,
    validate_accessibility,
    validate_level,
)
from .session import (
    Frame,
    InputHold,
    Session,
    SessionMetrics,
    SessionReport,
    finalize,
    load_report_file,
    run_headless,
    save_report_file,
    session_tick,
)
from .simulate import (
    CollisionInfo,
    SimConfig,
    assist_adjust,
    detect_collision,
    resolve_collision,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "ChairParams", "ChairState", "JoystickSample", "WheelCommand",
    "map_joystick", "apply_slew", "integrate_pose",
    "CollisionInfo", "SimConfig", "detect_collision", "resolve_collision",
    "assist_adjust", "step",
    "EventKind", "SimEvent",
    "Circle", "Level", "load_level", "load_level_file", "parse_level",
    "validate_level", "validate_accessibility",
    "Polyline", "normalize_angle",
    "contrast_ratio", "relative_luminance", "parse_hex_color",
    "DeviceDescriptor", "Calibration", "adc_joystick", "synthetic_gamepad",
    "default_calibration", "normalize", "calibrate_center", "trace_source",
    "write_trace", "load_calibration_file", "save_calibration_file",
    "Session", "SessionMetrics", "SessionReport", "Frame", "InputHold",
    "session_tick", "finalize", "run_headless",
    "save_report_file", "load_report_file",
    "WheelsimError", "ParseError", "ValidationError", "DescriptorMismatch",
    "InsufficientSamples", "NonMonotonicTimestamps", "SessionEnded",
    "SessionNotEnded", "DecodeError",
    "__version__",
]
