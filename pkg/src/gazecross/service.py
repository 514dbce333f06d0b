"""Session service: the engine behind a line-delimited JSON protocol.

One connection is one session.  The client opens with a hello naming the
technique, the items, and its px-per-cm scale; the service replies with
the positioned layout and then turns every sample message into zero or
more event messages.  Coordinates on the wire are pixels, the engine
works in cm, and the declared px_per_cm is the only bridge.

Two transports share the message layer: plain TCP with one JSON object
per LF-terminated line, and, for browsers, a minimal RFC 6455 WebSocket
mode (one JSON object per text frame) that the handler switches to when
the first bytes of a connection look like an HTTP GET.

Inbound message types:
  hello      {technique, items, px_per_cm, distance_cm?, dwell_ms?,
              blink_filter?, char_size_cm?, band_width_cm?}
  calibrate  {pairs: [[target_px, gaze_px] x 5]}
  sample     {t, x, y, valid?}
  end        flush delayed events (blink filter tail), answered with bye

Outbound: layout, event, calibrated, error, bye.  Unknown or malformed
input earns an error message and the session continues.
"""

from __future__ import annotations

import base64
import hashlib
import json
import socket
import socketserver
import struct
import threading

from gazecross.engine import EngineConfig, GazeEngine, GazeSample, StreamError, \
    fit_calibration
from gazecross.geometry import GeometryConfig
from gazecross.layout import build_circular_layout, build_grid_layout, \
    layout_to_json
from gazecross.experiment import ALPHABET

_WS_GUID = b"258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


def event_to_json(event) -> str:
    """Canonical wire form of a GazeEvent; also the offline log format.

    The same function serves both paths so a replayed stream produces
    byte-identical lines online and offline.
    """
    doc = {"type": "event", "kind": event.kind, "t_ms": event.t_ms}
    if event.label is not None:
        doc["label"] = event.label
    if event.region is not None:
        region = {"kind": event.region.kind}
        if event.region.label is not None:
            region["label"] = event.region.label
        doc["region"] = region
    if event.fraction is not None:
        doc["fraction"] = event.fraction
    if event.technique is not None:
        doc["technique"] = event.technique
    return json.dumps(doc, separators=(",", ":"))


class Session:
    """Protocol state for one connection; transport-agnostic."""

    def __init__(self, send):
        self._send = send  # callable taking one already-encoded JSON string
        self._engine: GazeEngine | None = None
        self._px_per_cm = 1.0

    def handle_line(self, line: str) -> bool:
        """Process one inbound message; False once the session says bye."""
        line = line.strip()
        if not line:
            return True
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            self._error(f"bad json: {exc.msg}")
            return True
        if not isinstance(msg, dict) or "type" not in msg:
            self._error("message must be an object with a type")
            return True
        try:
            return self._dispatch(msg)
        except KeyError as exc:
            self._error(f"{msg.get('type', 'message')}: missing field {exc.args[0]!r}")
            return True
        except (TypeError, ValueError) as exc:
            self._error(str(exc) or exc.__class__.__name__)
            return True

    # ------------------------------------------------------------------

    def _dispatch(self, msg: dict) -> bool:
        kind = msg["type"]
        if kind == "hello":
            self._hello(msg)
        elif kind == "calibrate":
            self._calibrate(msg)
        elif kind == "sample":
            self._sample(msg)
        elif kind == "end":
            if self._engine is not None:
                for event in self._engine.flush():
                    self._send(event_to_json(event))
            self._send(json.dumps({"type": "bye"}, separators=(",", ":")))
            return False
        else:
            self._error(f"unknown message type {kind!r}")
        return True

    def _hello(self, msg: dict) -> None:
        technique = msg["technique"]
        if technique not in ("dwell", "crossing"):
            raise ValueError(f"technique must be dwell or crossing, got {technique!r}")
        items = msg.get("items", list(ALPHABET))
        if isinstance(items, int):
            if not 1 <= items <= 26:
                raise ValueError("item count must be 1..26")
            items = list(ALPHABET[:items])
        if not isinstance(items, list) or not all(isinstance(i, str) for i in items):
            raise ValueError("items must be a list of labels or a count")
        ppc = float(msg.get("px_per_cm", 1.0))
        if ppc <= 0:
            raise ValueError("px_per_cm must be > 0")
        geometry = GeometryConfig(
            char_size_cm=float(msg.get("char_size_cm", 0.45)),
            viewing_distance_cm=float(msg.get("distance_cm", 55.0)))
        config = EngineConfig(
            dwell_ms=float(msg.get("dwell_ms", 500.0)),
            blink_filter_enabled=bool(msg.get("blink_filter", False)))
        if technique == "crossing":
            band = msg.get("band_width_cm")
            layout = build_circular_layout(
                items, geometry,
                band_width_cm=float(band) if band is not None else None)
        else:
            layout = build_grid_layout(items, geometry)
        self._engine = GazeEngine(layout, config)
        self._px_per_cm = ppc
        doc = {"type": "layout", "technique": technique,
               "px_per_cm": ppc, **layout_to_json(layout)}
        self._send(json.dumps(doc, separators=(",", ":")))

    def _calibrate(self, msg: dict) -> None:
        if self._engine is None:
            raise ValueError("calibrate before hello")
        ppc = self._px_per_cm
        pairs = [((t[0] / ppc, t[1] / ppc), (g[0] / ppc, g[1] / ppc))
                 for t, g in msg["pairs"]]
        model = fit_calibration(pairs)
        self._engine.calibration = model
        self._send(json.dumps(
            {"type": "calibrated", "correction_cm": list(model.correction)},
            separators=(",", ":")))

    def _sample(self, msg: dict) -> None:
        if self._engine is None:
            raise ValueError("sample before hello")
        sample = GazeSample(
            t_ms=float(msg["t"]),
            x_cm=float(msg["x"]) / self._px_per_cm,
            y_cm=float(msg["y"]) / self._px_per_cm,
            valid=bool(msg.get("valid", True)))
        try:
            events = self._engine.feed(sample)
        except StreamError as exc:
            self._error(str(exc))
            return
        for event in events:
            self._send(event_to_json(event))

    def _error(self, message: str) -> None:
        self._send(json.dumps({"type": "error", "message": message},
                              separators=(",", ":")))


# ---------------------------------------------------------------------------
# transports

class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        try:
            first = self.request.recv(4, socket.MSG_PEEK)
        except OSError:
            return
        if first.startswith(b"GET"):
            self._handle_websocket()
        else:
            self._handle_lines()

    # plain TCP: newline-delimited JSON both ways
    def _handle_lines(self):
        rfile = self.request.makefile("rb")
        lock = threading.Lock()

        def send(text: str) -> None:
            with lock:
                self.request.sendall(text.encode("utf-8") + b"\n")

        session = Session(send)
        try:
            for raw in rfile:
                if not session.handle_line(raw.decode("utf-8", "replace")):
                    break
        except (ConnectionError, OSError):
            pass

    # browser path: HTTP upgrade, then one JSON object per text frame
    def _handle_websocket(self):
        rfile = self.request.makefile("rb")
        if not self._ws_handshake(rfile):
            return
        lock = threading.Lock()

        def send(text: str) -> None:
            with lock:
                self.request.sendall(_ws_frame(0x1, text.encode("utf-8")))

        session = Session(send)
        try:
            while True:
                payload = self._ws_read(rfile)
                if payload is None:
                    break
                if not session.handle_line(payload):
                    break
        except (ConnectionError, OSError):
            pass

    def _ws_handshake(self, rfile) -> bool:
        rfile.readline()  # request line
        key = None
        while True:
            line = rfile.readline()
            if not line or line in (b"\r\n", b"\n"):
                break
            name, _, value = line.partition(b":")
            if name.strip().lower() == b"sec-websocket-key":
                key = value.strip()
        if key is None:
            self.request.sendall(b"HTTP/1.1 400 Bad Request\r\n\r\n")
            return False
        accept = base64.b64encode(hashlib.sha1(key + _WS_GUID).digest())
        self.request.sendall(
            b"HTTP/1.1 101 Switching Protocols\r\n"
            b"Upgrade: websocket\r\n"
            b"Connection: Upgrade\r\n"
            b"Sec-WebSocket-Accept: " + accept + b"\r\n\r\n")
        return True

    def _ws_read(self, rfile) -> str | None:
        """One text message; answers pings, None on close/EOF."""
        buffer = b""
        while True:
            head = rfile.read(2)
            if len(head) < 2:
                return None
            fin = head[0] & 0x80
            opcode = head[0] & 0x0F
            masked = head[1] & 0x80
            length = head[1] & 0x7F
            if length == 126:
                length = struct.unpack(">H", rfile.read(2))[0]
            elif length == 127:
                length = struct.unpack(">Q", rfile.read(8))[0]
            mask = rfile.read(4) if masked else b""
            payload = rfile.read(length)
            if masked:
                payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
            if opcode == 0x8:  # close
                return None
            if opcode == 0x9:  # ping
                self.request.sendall(_ws_frame(0xA, payload))
                continue
            if opcode in (0x0, 0x1):
                buffer += payload
                if fin:
                    return buffer.decode("utf-8", "replace")


def _ws_frame(opcode: int, payload: bytes) -> bytes:
    head = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        head += bytes([n])
    elif n < 1 << 16:
        head += bytes([126]) + struct.pack(">H", n)
    else:
        head += bytes([127]) + struct.pack(">Q", n)
    return head + payload


class SessionServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = 8765):
        super().__init__((host, port), _Handler)

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve_forever(host: str = "127.0.0.1", port: int = 8765) -> None:
    with SessionServer(host, port) as server:
        server.serve_forever()
