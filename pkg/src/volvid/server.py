"""Read-only HTTP service for encoded datasets.

Endpoints:

* ``GET /datasets`` — JSON array of dataset ids (subdirectories of the
  root containing a valid manifest), sorted.
* ``GET /datasets/{id}/manifest.json`` — the stored manifest, byte-identical.
* ``GET /datasets/{id}/media/{file}`` — media bytes with Accept-Ranges and
  single-range request support; only files listed in the dataset's manifest
  are ever served.

Responses carry permissive cross-origin headers so a browser viewer on
another origin can fetch, and content-hash ETags so identical requests are
cache-friendly.  The service never mutates anything; publication happens by
writing datasets into the root directory.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import unquote

from .container import MANIFEST_FILENAME, load_manifest
from .errors import ManifestError

log = logging.getLogger("volvid.server")

CONTENT_TYPES = {
    ".png": "image/png",
    ".ogv": "video/ogg",
    ".ogg": "video/ogg",
    ".mp4": "video/mp4",
    ".webm": "video/webm",
    ".rgb24": "application/octet-stream",
}

_SAFE_SEGMENT = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
_ROUTE_DATASETS = re.compile(r"^/datasets/?$")
_ROUTE_MANIFEST = re.compile(r"^/datasets/([^/]+)/manifest\.json$")
_ROUTE_MEDIA = re.compile(r"^/datasets/([^/]+)/media/([^/]+)$")


def safe_segment(segment: str) -> bool:
    """True for path segments that cannot traverse out of the root."""
    return bool(_SAFE_SEGMENT.match(segment)) and ".." not in segment


def content_type_for(filename: str) -> str:
    return CONTENT_TYPES.get(Path(filename).suffix.lower(), "application/octet-stream")


def parse_range(header: str, size: int):
    """Parse a single-range ``Range`` header against a resource size.

    Returns (start, end) inclusive, None when the header should be ignored
    (malformed), or "unsatisfiable".
    """
    if not header.startswith("bytes="):
        return None
    spec = header[len("bytes="):].split(",")[0].strip()
    match = re.match(r"^(\d*)-(\d*)$", spec)
    if not match or (not match.group(1) and not match.group(2)):
        return None
    first, last = match.group(1), match.group(2)
    if not first:
        # suffix range: last N bytes
        length = int(last)
        if length == 0:
            return "unsatisfiable"
        start = max(size - length, 0)
        return (start, size - 1) if size else "unsatisfiable"
    start = int(first)
    end = int(last) if last else size - 1
    if start >= size or start > end:
        return "unsatisfiable"
    return start, min(end, size - 1)


def list_dataset_ids(root: Path) -> list:
    """Subdirectory names holding a valid manifest, sorted."""
    ids = []
    for entry in sorted(root.iterdir()):
        if not entry.is_dir():
            continue
        manifest_path = entry / MANIFEST_FILENAME
        if not manifest_path.is_file():
            continue
        try:
            load_manifest(manifest_path)
        except ManifestError:
            continue
        ids.append(entry.name)
    return ids


class DatasetRequestHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "volvid"

    @property
    def root(self) -> Path:
        return self.server.dataset_root

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        log.debug("%s - %s", self.address_string(), format % args)

    def _cors_headers(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header(
            "Access-Control-Expose-Headers", "Content-Range, Accept-Ranges, Content-Length, ETag"
        )

    def _send_body(self, status: int, body: bytes, content_type: str, extra=()):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self._cors_headers()
        for key, value in extra:
            self.send_header(key, value)
        self.end_headers()
        self.wfile.write(body)

    def _send_error_body(self, status: int, message: str):
        self._send_body(status, (message + "\n").encode("utf-8"), "text/plain; charset=utf-8")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors_headers()
        self.send_header("Access-Control-Allow-Methods", "GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Range")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        path = unquote(self.path.split("?", 1)[0])
        if _ROUTE_DATASETS.match(path):
            return self._handle_list()
        match = _ROUTE_MANIFEST.match(path)
        if match:
            return self._handle_manifest(match.group(1))
        match = _ROUTE_MEDIA.match(path)
        if match:
            return self._handle_media(match.group(1), match.group(2))
        # reject traversal anywhere under /datasets/ before touching disk
        if path.startswith("/datasets/"):
            segments = path.split("/")[2:]
            if any(not safe_segment(s) for s in segments if s):
                return self._send_error_body(400, "invalid path segment")
        self._send_error_body(404, f"no such endpoint: {path}")

    def _handle_list(self):
        try:
            ids = list_dataset_ids(self.root)
        except OSError as exc:
            return self._send_error_body(500, f"cannot read dataset root: {exc}")
        body = json.dumps(ids).encode("utf-8")
        self._send_body(200, body, "application/json")

    def _dataset_dir(self, dataset_id: str):
        if not safe_segment(dataset_id):
            self._send_error_body(400, f"invalid dataset id {dataset_id!r}")
            return None
        directory = self.root / dataset_id
        if not (directory.is_dir() and (directory / MANIFEST_FILENAME).is_file()):
            self._send_error_body(404, f"unknown dataset {dataset_id!r}")
            return None
        return directory

    def _handle_manifest(self, dataset_id: str):
        if not safe_segment(dataset_id):
            return self._send_error_body(400, f"invalid dataset id {dataset_id!r}")
        directory = self._dataset_dir(dataset_id)
        if directory is None:
            return
        body = (directory / MANIFEST_FILENAME).read_bytes()
        etag = '"%s"' % hashlib.sha256(body).hexdigest()
        self._send_body(200, body, "application/json", extra=[("ETag", etag)])

    def _handle_media(self, dataset_id: str, filename: str):
        if not safe_segment(dataset_id) or not safe_segment(filename):
            return self._send_error_body(400, "invalid dataset id or file name")
        directory = self._dataset_dir(dataset_id)
        if directory is None:
            return
        try:
            manifest = load_manifest(directory / MANIFEST_FILENAME)
        except ManifestError as exc:
            return self._send_error_body(500, f"stored manifest is invalid: {exc}")
        if filename not in manifest.media_files:
            # allowlist rule: being on disk is not enough
            return self._send_error_body(404, f"{filename!r} is not part of dataset {dataset_id!r}")
        path = directory / filename
        if not path.is_file():
            return self._send_error_body(404, f"{filename!r} is listed but missing on disk")

        payload = path.read_bytes()
        size = len(payload)
        etag = '"%s"' % hashlib.sha256(payload).hexdigest()
        ctype = content_type_for(filename)
        common = [("Accept-Ranges", "bytes"), ("ETag", etag)]

        range_header = self.headers.get("Range")
        if range_header:
            parsed = parse_range(range_header, size)
            if parsed == "unsatisfiable":
                return self._send_body(
                    416,
                    b"",
                    ctype,
                    extra=common + [("Content-Range", f"bytes */{size}")],
                )
            if parsed is not None:
                start, end = parsed
                return self._send_body(
                    206,
                    payload[start : end + 1],
                    ctype,
                    extra=common + [("Content-Range", f"bytes {start}-{end}/{size}")],
                )
        self._send_body(200, payload, ctype, extra=common)


def make_server(root, listen_address: str = "127.0.0.1:8000") -> ThreadingHTTPServer:
    """Build (but do not start) the dataset server; logs discovered datasets."""
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"dataset root {root} does not exist")
    host, _, port_text = listen_address.rpartition(":")
    host = host or "127.0.0.1"
    try:
        port = int(port_text)
    except ValueError:
        raise ValueError(f"listen address must look like HOST:PORT, got {listen_address!r}") from None
    httpd = ThreadingHTTPServer((host, port), DatasetRequestHandler)
    httpd.dataset_root = root
    for dataset_id in list_dataset_ids(root):
        log.info("dataset %s", dataset_id)
    return httpd
