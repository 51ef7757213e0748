"""Local real-time segmentation service.

A WebSocket endpoint carries one JSON object per message and drives
per-session state (image, template parameters, helper seeds, live and
committed results). Hover streams send ``segment`` requests with a client
sequence number; requests are latest-wins per session: when a newer request
arrives while an older one is computing, the older reply is dropped, so
delivered replies always carry monotonically increasing sequence numbers.

An equivalent one-shot ``POST /segment`` exists for scripting. Masks travel
as run-length encoding ([start, length] pairs over row-major pixel indices)
and only when requested; contours are small enough for every reply.
"""

from __future__ import annotations

import asyncio
import base64
import binascii
import json
import uuid
from dataclasses import dataclass, field, replace

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from starlette.requests import Request

from .image import GrayImage, decode_image_bytes, load_gray_image, load_mask
from .maxflow import warm_up
from .metrics import dice, hausdorff
from .radial import TemplateParams
from .segmenter import HelperSeed, SegmentationResult, segment

__all__ = ["create_app", "mask_to_rle", "rle_to_mask", "ServiceError"]

_PARAM_KEYS = {"rays": "rays", "nodes": "nodes_per_ray", "radius": "max_radius",
               "delta": "delta", "seed_region": "seed_region_radius"}


class ServiceError(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


def mask_to_rle(mask: np.ndarray) -> list[list[int]]:
    flat = np.asarray(mask, bool).reshape(-1)
    padded = np.concatenate([[False], flat, [False]])
    changes = np.flatnonzero(padded[1:] != padded[:-1])
    return [[int(s), int(e - s)] for s, e in zip(changes[::2], changes[1::2])]


def rle_to_mask(rle, width: int, height: int) -> np.ndarray:
    flat = np.zeros(width * height, bool)
    for start, length in rle:
        flat[start:start + length] = True
    return flat.reshape(height, width)


@dataclass
class Session:
    image: GrayImage
    image_label: str
    params: TemplateParams = field(default_factory=TemplateParams)
    helpers: list[HelperSeed] = field(default_factory=list)
    live: SegmentationResult | None = None
    live_seq: int = -1
    committed: SegmentationResult | None = None
    latest_seq: int = -1


def _merge_params(base: TemplateParams, overrides: dict | None) -> TemplateParams:
    if not overrides:
        return base
    kwargs = {}
    for key, attr in _PARAM_KEYS.items():
        if key in overrides:
            kwargs[attr] = overrides[key]
    try:
        return replace(base, **kwargs)
    except ValueError as exc:
        raise ServiceError("bad_params", str(exc))


def _params_dict(p: TemplateParams) -> dict:
    return {"rays": p.rays, "nodes": p.nodes_per_ray, "radius": p.max_radius,
            "delta": p.delta, "seed_region": p.seed_region_radius}


def _result_reply(res: SegmentationResult, seq, want_mask: bool,
                  image: GrayImage) -> dict:
    reply = {
        "type": "result",
        "seq": seq,
        "boundary": [int(b) for b in res.boundary],
        "contour": [[float(x), float(y)] for x, y in res.contour],
        "cut_cost": float(res.cut_cost),
        "collapsed": res.collapsed,
        "elapsed_us": res.elapsed_us,
        "seed": {"x": res.seed[0], "y": res.seed[1]},
        "width": image.width,
        "height": image.height,
    }
    if want_mask:
        reply["mask_rle"] = mask_to_rle(res.mask)
    return reply


class Engine:
    """Session store plus the synchronous protocol handlers."""

    def __init__(self, segment_fn=None):
        self.segment_fn = segment_fn or segment
        self.sessions: dict[str, Session] = {}

    def session(self, msg) -> tuple[str, Session]:
        sid = msg.get("session")
        if not isinstance(sid, str) or sid not in self.sessions:
            raise ServiceError("unknown_session", f"unknown session {sid!r}")
        return sid, self.sessions[sid]

    def load_image_from_message(self, msg) -> tuple[GrayImage, str]:
        if "path" in msg:
            try:
                return load_gray_image(msg["path"]), str(msg["path"])
            except (OSError, ValueError) as exc:
                raise ServiceError("bad_image", str(exc))
        if "png_base64" in msg:
            try:
                raw = base64.b64decode(msg["png_base64"], validate=True)
                return decode_image_bytes(raw, "<inline>"), "<inline>"
            except (binascii.Error, ValueError) as exc:
                raise ServiceError("bad_image", str(exc))
        raise ServiceError("bad_request", "load needs 'path' or 'png_base64'")

    def handle(self, msg: dict) -> dict:
        """Handle every message type except ``segment`` (which is async,
        latest-wins, and handled by the connection worker)."""
        mtype = msg.get("type")
        if mtype == "load":
            image, label = self.load_image_from_message(msg)
            sid = uuid.uuid4().hex[:12]
            self.sessions[sid] = Session(image=image, image_label=label)
            return {"type": "loaded", "session": sid,
                    "width": image.width, "height": image.height}
        if mtype == "set_params":
            sid, sess = self.session(msg)
            sess.params = _merge_params(sess.params, msg.get("params"))
            return {"type": "params_set", "session": sid,
                    "params": _params_dict(sess.params)}
        if mtype == "add_helper":
            sid, sess = self.session(msg)
            try:
                helper = HelperSeed(float(msg["x"]), float(msg["y"]), msg.get("kind"))
            except (KeyError, TypeError, ValueError) as exc:
                raise ServiceError("bad_request", f"bad helper: {exc}")
            if not sess.image.contains(helper.x, helper.y):
                raise ServiceError("bad_request", "helper outside the image")
            sess.helpers.append(helper)
            return {"type": "helper_added", "session": sid, "count": len(sess.helpers)}
        if mtype == "clear_helpers":
            sid, sess = self.session(msg)
            sess.helpers.clear()
            return {"type": "helpers_cleared", "session": sid, "count": 0}
        if mtype == "commit":
            sid, sess = self.session(msg)
            if sess.live is None:
                raise ServiceError("no_live_result", "nothing to commit yet")
            sess.committed = sess.live
            reply = {"type": "committed", "session": sid, "seq": sess.live_seq,
                     "width": sess.image.width, "height": sess.image.height,
                     "pixels": int(sess.live.mask.sum()),
                     "cut_cost": float(sess.live.cut_cost)}
            if msg.get("want_mask"):
                reply["mask_rle"] = mask_to_rle(sess.live.mask)
            return reply
        if mtype == "metrics":
            sid, sess = self.session(msg)
            if sess.committed is None:
                raise ServiceError("no_committed_result", "commit a result first")
            if "gt_path" not in msg:
                raise ServiceError("bad_request", "metrics needs 'gt_path'")
            try:
                gt = load_mask(msg["gt_path"])
            except (OSError, ValueError) as exc:
                raise ServiceError("bad_image", str(exc))
            mask = sess.committed.mask
            if gt.shape != mask.shape:
                raise ServiceError("bad_request", "ground truth size mismatch")
            dsc = dice(mask, gt) if (mask.sum() + gt.sum()) else None
            hd = hausdorff(mask, gt) if (mask.any() and gt.any()) else None
            return {"type": "metrics", "session": sid, "dsc": dsc, "hd_px": hd}
        raise ServiceError("bad_request", f"unknown message type {msg.get('type')!r}")

    def note_segment_request(self, msg: dict) -> str:
        sid, sess = self.session(msg)
        seq = msg.get("seq")
        if not isinstance(seq, int):
            raise ServiceError("bad_request", "segment needs an integer 'seq'")
        if "seed" not in msg or not {"x", "y"} <= set(msg["seed"]):
            raise ServiceError("bad_request", "segment needs seed {x, y}")
        sess.latest_seq = max(sess.latest_seq, seq)
        return sid

    def compute_segment(self, sid: str, msg: dict) -> tuple[dict, SegmentationResult]:
        sess = self.sessions[sid]
        params = _merge_params(sess.params, msg.get("params"))
        seed = (float(msg["seed"]["x"]), float(msg["seed"]["y"]))
        try:
            res = self.segment_fn(sess.image, seed, params, helpers=tuple(sess.helpers))
        except ValueError as exc:
            raise ServiceError("bad_request", str(exc))
        return _result_reply(res, msg["seq"], bool(msg.get("want_mask")), sess.image), res


def _error_reply(exc: ServiceError, seq=None) -> dict:
    reply = {"type": "error", "code": exc.code, "detail": exc.detail}
    if seq is not None:
        reply["seq"] = seq
    return reply


def create_app(segment_fn=None, ui_dir=None, warm: bool = True) -> FastAPI:
    """Build the service app. ``segment_fn`` can be swapped out in tests."""
    if warm:
        warm_up()
    app = FastAPI(title="uscut interactive service")
    engine = Engine(segment_fn)
    app.state.engine = engine

    @app.get("/healthz")
    async def healthz():
        return {"ok": True}

    @app.post("/segment")
    async def one_shot_segment(request: Request):
        try:
            msg = await request.json()
        except json.JSONDecodeError:
            return JSONResponse(_error_reply(ServiceError("bad_request", "invalid JSON")),
                                status_code=400)
        try:
            image, label = engine.load_image_from_message(msg)
            if "seed" not in msg or not {"x", "y"} <= set(msg["seed"]):
                raise ServiceError("bad_request", "segment needs seed {x, y}")
            params = _merge_params(TemplateParams(), msg.get("params"))
            helpers = [HelperSeed(h["x"], h["y"], h.get("kind"))
                       for h in msg.get("helpers", [])]
            seed = (float(msg["seed"]["x"]), float(msg["seed"]["y"]))
            loop = asyncio.get_running_loop()
            try:
                res = await loop.run_in_executor(
                    None, lambda: engine.segment_fn(image, seed, params,
                                                    helpers=tuple(helpers)))
            except ValueError as exc:
                raise ServiceError("bad_request", str(exc))
            return _result_reply(res, msg.get("seq", 0), bool(msg.get("want_mask")), image)
        except ServiceError as exc:
            return JSONResponse(_error_reply(exc), status_code=400)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        send_lock = asyncio.Lock()
        pending: dict[str, dict] = {}
        wake = asyncio.Event()
        conn_sessions: set[str] = set()
        loop = asyncio.get_running_loop()

        async def send(obj):
            async with send_lock:
                await ws.send_text(json.dumps(obj))

        async def worker():
            while True:
                await wake.wait()
                wake.clear()
                while pending:
                    sid, msg = next(iter(pending.items()))
                    del pending[sid]
                    try:
                        reply, res = await loop.run_in_executor(
                            None, engine.compute_segment, sid, msg)
                    except ServiceError as exc:
                        await send(_error_reply(exc, msg.get("seq")))
                        continue
                    except Exception as exc:  # keep the worker alive
                        await send(_error_reply(
                            ServiceError("internal_error", repr(exc)), msg.get("seq")))
                        continue
                    sess = engine.sessions.get(sid)
                    if sess is None or sess.latest_seq > msg["seq"]:
                        continue  # a newer hover arrived; drop the stale reply
                    sess.live = res
                    sess.live_seq = msg["seq"]
                    await send(reply)

        worker_task = asyncio.create_task(worker())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = json.loads(text)
                    if not isinstance(msg, dict):
                        raise json.JSONDecodeError("not an object", text, 0)
                except json.JSONDecodeError:
                    await send(_error_reply(ServiceError("bad_request", "invalid JSON")))
                    continue
                if msg.get("type") == "segment":
                    try:
                        sid = engine.note_segment_request(msg)
                    except ServiceError as exc:
                        await send(_error_reply(exc, msg.get("seq")))
                        continue
                    pending[sid] = msg
                    wake.set()
                else:
                    try:
                        reply = engine.handle(msg)
                        if msg.get("type") == "load":
                            conn_sessions.add(reply["session"])
                        await send(reply)
                    except ServiceError as exc:
                        await send(_error_reply(exc, msg.get("seq")))
        except WebSocketDisconnect:
            pass
        finally:
            worker_task.cancel()
            for sid in conn_sessions:
                engine.sessions.pop(sid, None)  # disconnecting frees the images

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
