"""HTTP service wrapping the verification pipeline.

The core is Api.handle(method, path, body, query) -> (status, payload),
a pure routing function with no socket attached, so the whole contract
is exercisable in-process.  A thin ThreadingHTTPServer adapter turns it
into a real endpoint.  Jobs run on a bounded worker pool and survive
restarts through an append-only JSONL event log.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import queue
import re
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .assumptions import generate_assumption
from .composer import Caps, ResourceLimit, _env_int, compose
from .export import as_document
from .lang import (
    SpecError,
    parse_module,
    parse_spec,
    pretty_formula,
    pretty_print,
    validate_spec,
)
from .runner import run_verification

__all__ = ["Api", "JobRecord", "serve", "main"]

DEFAULT_PAGE_SIZE = 5000
MAX_PAGE_SIZE = 50_000
_GAP_LIST_CAP = 200

_MODEL_RE = re.compile(r"^/api/spec/([A-Za-z0-9]+)/model$")
_JOB_RE = re.compile(r"^/api/job/([A-Za-z0-9]+)$")
_RESULT_RE = re.compile(r"^/api/job/([A-Za-z0-9]+)/result$")


@dataclass
class JobRecord:
    job_id: str
    request: dict
    status: str = "queued"  # queued -> running -> done | failed
    created: float = field(default_factory=time.time)
    started: float | None = None
    finished: float | None = None
    result: dict | None = None
    error: str | None = None

    def public(self) -> dict:
        return {
            "jobId": self.job_id,
            "request": self.request,
            "status": self.status,
            "created": self.created,
            "started": self.started,
            "finished": self.finished,
            "result": self.result,
            "error": self.error,
        }


def _sha(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:10]


class Api:
    """In-process service core.

    workers=0 disables the pool; tests then drive jobs deterministically
    with run_pending().  store_path, when given, is an append-only JSONL
    log replayed on construction; jobs caught mid-flight by a restart
    come back as failed (status stays monotone within any one run).
    """

    def __init__(
        self,
        store_path: str | None = None,
        workers: int | None = None,
        caps: Caps | None = None,
        page_size: int = DEFAULT_PAGE_SIZE,
    ):
        self._lock = threading.RLock()
        self._specs: dict[str, dict] = {}
        self._assumptions: dict[str, dict] = {}
        self._jobs: dict[str, JobRecord] = {}
        self._model_cache: OrderedDict[str, dict] = OrderedDict()
        self._queue: queue.SimpleQueue = queue.SimpleQueue()
        self._job_seq = 0
        self._caps = caps if caps is not None else Caps.from_env()
        self._page_size = page_size
        self._store_path = store_path
        if store_path:
            self._replay(store_path)
        if workers is None:
            workers = _env_int("AGRMC_WORKERS", 4)
        self._threads = []
        for _ in range(max(0, workers)):
            t = threading.Thread(target=self._worker_loop, daemon=True)
            t.start()
            self._threads.append(t)

    # ------------------------------------------------------------- store

    def _append(self, record: dict) -> None:
        if not self._store_path:
            return
        line = json.dumps(record, sort_keys=True)
        with self._lock:
            with open(self._store_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def _replay(self, path: str) -> None:
        if not os.path.exists(path):
            return
        interrupted = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                kind = rec.get("kind")
                if kind == "spec":
                    self._admit_spec(rec["text"], persist=False)
                elif kind == "assumption":
                    decl = parse_module(rec["text"])
                    self._assumptions[rec["assumptionId"]] = {
                        "specId": rec["specId"],
                        "module": rec["module"],
                        "distance": rec["distance"],
                        "decl": decl,
                        "text": rec["text"],
                    }
                elif kind == "job":
                    j = rec["record"]
                    self._jobs[j["jobId"]] = JobRecord(
                        job_id=j["jobId"],
                        request=j["request"],
                        status=j["status"],
                        created=j["created"],
                        started=j.get("started"),
                        finished=j.get("finished"),
                        result=j.get("result"),
                        error=j.get("error"),
                    )
        for job in self._jobs.values():
            if job.status in ("queued", "running"):
                job.status = "failed"
                job.error = "interrupted by service restart"
                job.finished = time.time()
                interrupted.append(job)
            if job.job_id.startswith("j"):
                try:
                    self._job_seq = max(self._job_seq, int(job.job_id[1:]) + 1)
                except ValueError:
                    pass
        for job in interrupted:
            self._append({"kind": "job", "record": job.public()})

    # ------------------------------------------------------------ routing

    def handle(self, method: str, path: str, body=None, query=None):
        """Route one request; returns (http_status, json_payload)."""
        query = query or {}
        if method == "POST" and path == "/api/spec":
            return self._post_spec(body)
        if method == "POST" and path == "/api/assumption":
            return self._post_assumption(body)
        if method == "POST" and path == "/api/verify":
            return self._post_verify(body)
        m = _MODEL_RE.match(path)
        if method == "GET" and m:
            return self._get_model(m.group(1), query)
        m = _RESULT_RE.match(path)
        if method == "GET" and m:
            return self._get_result(m.group(1))
        m = _JOB_RE.match(path)
        if method == "GET" and m:
            return self._get_job(m.group(1))
        return 404, {"error": f"no such endpoint: {method} {path}"}

    # ----------------------------------------------------------- handlers

    def _admit_spec(self, text: str, persist: bool):
        doc = parse_spec(text)
        spec_id = "s" + _sha(text)
        with self._lock:
            known = spec_id in self._specs
            if not known:
                self._specs[spec_id] = {"text": text, "doc": doc}
        if persist and not known:
            self._append({"kind": "spec", "specId": spec_id, "text": text})
        return spec_id, doc

    def _post_spec(self, body):
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            return 400, {"error": 'body must be {"text": "<spec source>"}'}
        try:
            spec_id, doc = self._admit_spec(body["text"], persist=True)
        except SpecError as exc:
            return 422, {"error": str(exc)}
        try:
            report = validate_spec(doc)
            gaps = [
                {"module": g.module, "state": g.state, "inputs": dict(g.inputs)}
                for g in report.gaps[:_GAP_LIST_CAP]
            ]
            report_doc = {
                "total": report.total,
                "gapCount": len(report.gaps),
                "gaps": gaps,
            }
        except ResourceWarning as exc:
            report_doc = {"total": None, "gapCount": None, "skipped": str(exc)}
        return 200, {
            "specId": spec_id,
            "modules": [m.name for m in doc.modules],
            "groups": [
                {
                    "name": g.name,
                    "members": list(g.members),
                    "goal": pretty_formula(g.goal) if g.goal else None,
                }
                for g in doc.groups
            ],
            "report": report_doc,
        }

    def _model_document(self, spec_id: str) -> dict:
        with self._lock:
            cached = self._model_cache.get(spec_id)
            if cached is not None:
                self._model_cache.move_to_end(spec_id)
                return cached
            doc = self._specs[spec_id]["doc"]
        model = compose(doc, caps=self._caps)
        document = as_document(model)
        with self._lock:
            self._model_cache[spec_id] = document
            while len(self._model_cache) > 4:
                self._model_cache.popitem(last=False)
        return document

    def _get_model(self, spec_id: str, query: dict):
        if spec_id not in self._specs:
            return 404, {"error": f"unknown spec {spec_id!r}"}
        try:
            page = int(query.get("page", 1))
            page_size = int(query.get("pageSize", self._page_size))
        except (TypeError, ValueError):
            return 400, {"error": "page and pageSize must be integers"}
        if page < 1 or page_size < 1 or page_size > MAX_PAGE_SIZE:
            return 400, {
                "error": f"need page >= 1 and 1 <= pageSize <= {MAX_PAGE_SIZE}"
            }
        try:
            document = self._model_document(spec_id)
        except ResourceLimit as exc:
            return 422, {"error": f"resource limit: {exc}"}
        states = document["states"]
        lo = (page - 1) * page_size
        hi = lo + page_size
        page_states = states[lo:hi]
        page_transitions = [
            t for t in document["transitions"] if lo <= t["src"] < hi
        ]
        return 200, {
            "specId": spec_id,
            "page": page,
            "pageSize": page_size,
            "totalStates": len(states),
            "totalTransitions": len(document["transitions"]),
            "totalPages": max(1, math.ceil(len(states) / page_size)),
            "initial": document["initial"],
            "states": page_states,
            "transitions": page_transitions,
        }

    def _post_assumption(self, body):
        if not isinstance(body, dict):
            return 400, {"error": "body must be a JSON object"}
        spec_id = body.get("specId")
        module = body.get("module")
        distance = body.get("distance", 1)
        if not isinstance(spec_id, str) or not isinstance(module, str):
            return 400, {"error": "specId and module are required strings"}
        if not isinstance(distance, int) or isinstance(distance, bool):
            return 400, {"error": "distance must be an integer"}
        with self._lock:
            entry = self._specs.get(spec_id)
        if entry is None:
            return 404, {"error": f"unknown spec {spec_id!r}"}
        try:
            decl = generate_assumption(entry["doc"], module, distance, caps=self._caps)
        except ResourceLimit as exc:
            return 422, {"error": f"resource limit: {exc}"}
        except SpecError as exc:
            return 422, {"error": str(exc)}
        text = pretty_print(decl)
        assumption_id = "a" + _sha(f"{spec_id}\n{module}\n{distance}")
        with self._lock:
            known = assumption_id in self._assumptions
            self._assumptions[assumption_id] = {
                "specId": spec_id,
                "module": module,
                "distance": distance,
                "decl": decl,
                "text": text,
            }
        if not known:
            self._append(
                {
                    "kind": "assumption",
                    "assumptionId": assumption_id,
                    "specId": spec_id,
                    "module": module,
                    "distance": distance,
                    "text": text,
                }
            )
        return 200, {
            "assumptionId": assumption_id,
            "target": module,
            "name": decl.name,
            "states": len(decl.states),
            "transitions": len(decl.transitions),
            "text": text,
            "model": as_document(decl),
        }

    def _post_verify(self, body):
        if not isinstance(body, dict):
            return 400, {"error": "body must be a JSON object"}
        spec_id = body.get("specId")
        mode = body.get("mode")
        engine = body.get("engine", "dfs")
        distance = body.get("distance", 1)
        assumption_id = body.get("assumptionId")
        if not isinstance(spec_id, str):
            return 400, {"error": "specId is required"}
        if mode not in ("mono", "agr"):
            return 400, {"error": 'mode must be "mono" or "agr"'}
        if engine not in ("dfs", "apprx"):
            return 400, {"error": 'engine must be "dfs" or "apprx"'}
        if not isinstance(distance, int) or isinstance(distance, bool) or distance < 1:
            return 400, {"error": "distance must be an integer >= 1"}
        with self._lock:
            if spec_id not in self._specs:
                return 404, {"error": f"unknown spec {spec_id!r}"}
            if assumption_id is not None and assumption_id not in self._assumptions:
                return 404, {"error": f"unknown assumption {assumption_id!r}"}
            job_id = f"j{self._job_seq}"
            self._job_seq += 1
            record = JobRecord(
                job_id=job_id,
                request={
                    "specId": spec_id,
                    "mode": mode,
                    "engine": engine,
                    "distance": distance,
                    "assumptionId": assumption_id,
                },
            )
            self._jobs[job_id] = record
        self._append({"kind": "job", "record": record.public()})
        self._queue.put(job_id)
        return 200, {"jobId": job_id, "status": record.status}

    def _get_job(self, job_id: str):
        with self._lock:
            record = self._jobs.get(job_id)
            if record is None:
                return 404, {"error": f"unknown job {job_id!r}"}
            return 200, record.public()

    def _get_result(self, job_id: str):
        with self._lock:
            record = self._jobs.get(job_id)
            if record is None:
                return 404, {"error": f"unknown job {job_id!r}"}
            if record.status in ("queued", "running"):
                return 409, {"error": "job not finished", "status": record.status}
            if record.status == "failed":
                return 200, {"status": "failed", "error": record.error}
            return 200, {"status": "done", "result": record.result}

    # ------------------------------------------------------------ workers

    def _worker_loop(self):
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            self._run_job(job_id)

    def _run_job(self, job_id: str) -> None:
        with self._lock:
            record = self._jobs[job_id]
            record.status = "running"
            record.started = time.time()
        self._append({"kind": "job", "record": record.public()})
        req = record.request
        try:
            with self._lock:
                doc = self._specs[req["specId"]]["doc"]
                assumption = None
                if req.get("assumptionId"):
                    assumption = self._assumptions[req["assumptionId"]]["decl"]
            payload = run_verification(
                doc,
                mode=req["mode"],
                engine=req["engine"],
                distance=req["distance"],
                assumption=assumption,
                caps=self._caps,
            )
            with self._lock:
                record.status = "done"
                record.result = payload
                record.finished = time.time()
        except ResourceLimit as exc:
            with self._lock:
                record.status = "failed"
                record.error = f"resource limit: {exc}"
                record.finished = time.time()
        except Exception as exc:  # report, never kill the worker
            with self._lock:
                record.status = "failed"
                record.error = str(exc)
                record.finished = time.time()
        self._append({"kind": "job", "record": record.public()})

    def run_pending(self, limit: int | None = None) -> int:
        """Drain queued jobs on the calling thread; for workers=0 setups."""
        done = 0
        while limit is None or done < limit:
            try:
                job_id = self._queue.get_nowait()
            except queue.Empty:
                return done
            if job_id is None:
                continue
            self._run_job(job_id)
            done += 1
        return done

    def close(self) -> None:
        for _ in self._threads:
            self._queue.put(None)
        for t in self._threads:
            t.join(timeout=5)


# ------------------------------------------------------------------ http


class _Handler(BaseHTTPRequestHandler):
    api: Api

    def log_message(self, *args):  # keep test output quiet
        pass

    def _send(self, status: int, payload: dict) -> None:
        data = json.dumps(payload, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _split(self):
        from urllib.parse import parse_qs, urlsplit

        parts = urlsplit(self.path)
        query = {k: v[0] for k, v in parse_qs(parts.query).items()}
        return parts.path, query

    def do_GET(self):
        path, query = self._split()
        status, payload = self.api.handle("GET", path, None, query)
        self._send(status, payload)

    def do_POST(self):
        path, query = self._split()
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if raw:
            try:
                body = json.loads(raw)
            except json.JSONDecodeError:
                self._send(400, {"error": "malformed JSON body"})
                return
        else:
            body = None
        status, payload = self.api.handle("POST", path, body, query)
        self._send(status, payload)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()


def serve(
    host: str = "127.0.0.1",
    port: int = 8008,
    store_path: str | None = None,
    workers: int | None = None,
) -> ThreadingHTTPServer:
    """Build a ready-to-run server; caller invokes serve_forever()."""
    api = Api(store_path=store_path, workers=workers)
    handler = type("BoundHandler", (_Handler,), {"api": api})
    httpd = ThreadingHTTPServer((host, port), handler)
    httpd.api = api  # type: ignore[attr-defined]
    return httpd


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="agrmc-service", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8008)
    parser.add_argument("--store", default=None, help="JSONL event log path")
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args(argv)
    httpd = serve(args.host, args.port, args.store, args.workers)
    print(f"listening on http://{args.host}:{httpd.server_address[1]}", flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.api.close()  # type: ignore[attr-defined]
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
