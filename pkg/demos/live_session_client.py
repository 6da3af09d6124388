"""
Talking to the realtime service over its wire protocol
======================================================

Starts the session server in a background thread (accelerated clock, so the
demo finishes quickly), drives one session over a real websocket, and prints
what comes back. This is exactly what a browser client does.
"""

import threading
import time
from pathlib import Path

import uvicorn
from websockets.sync.client import connect

from wheelsim.protocol import (Ended, FrameMsg, Hello, Input, Welcome,
                               decode_message, encode_message)
from wheelsim.service import create_app

level_dir = Path(__file__).resolve().parents[1] / "levels"
app = create_app(level_dir, wall_dt=1 / 600, max_duration=30.0)

config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning",
                        ws="websockets")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.01)
port = server.servers[0].sockets[0].getsockname()[1]
print(f"server up on port {port}")

with connect(f"ws://127.0.0.1:{port}/session") as ws:
    ws.send(encode_message(Hello(level_id="straight_corridor")))
    welcome = decode_message(ws.recv())
    assert isinstance(welcome, Welcome)
    print(f"welcome: level '{welcome.level['id']}', dt {welcome.dt:.4f}")

    # one input, held for the whole run: full speed ahead
    ws.send(encode_message(Input(t=0.0, axes=(0.0, 1.0))))

    frames = 0
    while True:
        msg = decode_message(ws.recv())
        if isinstance(msg, FrameMsg):
            frames += 1
            for e in msg.frame.events:
                print(f"  tick {e.tick:4d}  {e.kind.value}")
        elif isinstance(msg, Ended):
            m = msg.report.metrics
            print(f"ended: {msg.report.end_reason} after {m.elapsed:.2f} s "
                  f"({frames} frames, {m.waypoints_hit} waypoints)")
            break

server.should_exit = True
thread.join(timeout=5)
