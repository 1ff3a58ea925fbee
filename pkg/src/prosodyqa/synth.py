"""Speech synthesis drivers.

Turns SSML documents into audio assets through pluggable TTS clients.
Assets are cached on disk under a content hash of (markup, engine,
voice), so repeated synthesis of the same document never hits the
client twice.  A deterministic mock engine generates tone-sequence WAV
payloads for offline runs and tests.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import struct
import threading
import time
import wave
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, Sequence

import requests

from .prosody import EngineProfile, SsmlDocument

log = logging.getLogger(__name__)

_MEDIA_EXT = {"audio/wav": "wav", "audio/mpeg": "mp3"}


class ConfigurationError(ValueError):
    """Missing or inconsistent synthesis configuration."""


class TransportError(RuntimeError):
    """A remote client failed after exhausting its retries."""

    def __init__(self, message: str, retries: int):
        super().__init__(message)
        self.retries = retries


@dataclass(frozen=True)
class AudioAsset:
    asset_id: str
    item_id: str
    kind: str
    profile_name: str
    media_type: str
    data: bytes
    duration_ms: int | None = None


@dataclass(frozen=True)
class SynthRequest:
    ssml: SsmlDocument
    profile: EngineProfile
    credentials_ref: Mapping[str, str] | None = None


def cache_key(ssml: SsmlDocument, profile: EngineProfile) -> str:
    """Stable digest of (markup, engine, voice); any change to one of
    the three yields a different id."""
    h = hashlib.sha256()
    for part in (ssml.markup, profile.engine_name, profile.voice_name):
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


class TtsClient(Protocol):
    def synthesize(self, markup: str, profile: EngineProfile) -> tuple[bytes, str, int | None]:
        """Return (audio bytes, media type, duration in ms or None)."""
        ...


class MockTtsClient:
    """Deterministic offline engine: an 8-tone WAV derived from the
    input hash.  Square waves built with integer math keep the payload
    bit-identical across platforms and runs."""

    sample_rate = 16000
    tone_ms = 120

    def __init__(self):
        self.calls = 0

    def synthesize(self, markup: str, profile: EngineProfile) -> tuple[bytes, str, int | None]:
        self.calls += 1
        digest = hashlib.sha256(
            f"{markup}\x00{profile.engine_name}\x00{profile.voice_name}".encode()
        ).digest()
        samples_per_tone = self.sample_rate * self.tone_ms // 1000
        frames = bytearray()
        for byte in digest[:8]:
            freq = 200 + byte * 8
            for i in range(samples_per_tone):
                value = 9000 if (2 * freq * i // self.sample_rate) % 2 == 0 else -9000
                frames += struct.pack("<h", value)
        buf = io.BytesIO()
        with wave.open(buf, "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(self.sample_rate)
            wav.writeframes(bytes(frames))
        return buf.getvalue(), "audio/wav", 8 * self.tone_ms


class RemoteTtsClient:
    """Generic REST client: POST the SSML, receive audio bytes back.

    Credentials come from the named environment variable; transient
    failures are retried with exponential backoff.
    """

    def __init__(
        self,
        url: str,
        api_key_env: str,
        media_type: str = "audio/mpeg",
        max_retries: int = 3,
        backoff_s: float = 0.5,
        session: requests.Session | None = None,
    ):
        self.url = url
        self.api_key_env = api_key_env
        self.media_type = media_type
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self.session = session or requests.Session()

    def synthesize(self, markup: str, profile: EngineProfile) -> tuple[bytes, str, int | None]:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise ConfigurationError(
                f"credentials for {profile.engine_name!r} missing: "
                f"set the {self.api_key_env} environment variable"
            )
        payload = {"ssml": markup, "voice": profile.voice_name}
        headers = {"Authorization": f"Bearer {api_key}"}
        attempt = 0
        while True:
            try:
                resp = self.session.post(
                    self.url, json=payload, headers=headers, timeout=120
                )
                resp.raise_for_status()
                return resp.content, self.media_type, None
            except requests.RequestException as exc:
                if attempt >= self.max_retries:
                    raise TransportError(
                        f"synthesis via {self.url} failed after {attempt} retries: {exc}",
                        retries=attempt,
                    ) from exc
                delay = self.backoff_s * 2**attempt
                attempt += 1
                log.warning("retrying synthesis (%d/%d): %s", attempt, self.max_retries, exc)
                time.sleep(delay)


class AudioCache:
    """Disk cache: audio/{asset_id}.{ext} plus a JSON metadata sidecar."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _sidecar(self, asset_id: str) -> Path:
        return self.directory / f"{asset_id}.json"

    def get(self, asset_id: str) -> AudioAsset | None:
        sidecar = self._sidecar(asset_id)
        if not sidecar.exists():
            return None
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
        payload_path = self.directory / meta["filename"]
        return AudioAsset(
            asset_id=meta["asset_id"],
            item_id=meta["item_id"],
            kind=meta["kind"],
            profile_name=meta["profile_name"],
            media_type=meta["media_type"],
            data=payload_path.read_bytes(),
            duration_ms=meta.get("duration_ms"),
        )

    def media_path(self, asset_id: str) -> Path | None:
        sidecar = self._sidecar(asset_id)
        if not sidecar.exists():
            return None
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
        return self.directory / meta["filename"]

    def put(self, asset: AudioAsset) -> None:
        ext = _MEDIA_EXT.get(asset.media_type, "bin")
        filename = f"{asset.asset_id}.{ext}"
        (self.directory / filename).write_bytes(asset.data)
        meta = {
            "asset_id": asset.asset_id,
            "item_id": asset.item_id,
            "kind": asset.kind,
            "profile_name": asset.profile_name,
            "media_type": asset.media_type,
            "duration_ms": asset.duration_ms,
            "filename": filename,
        }
        self._sidecar(asset.asset_id).write_text(
            json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8"
        )


class Synthesizer:
    """Routes requests to engine clients with an at-most-once cache.

    A single admission lock plus per-asset futures guarantee each
    asset_id is synthesized exactly once even under concurrent calls;
    batch synthesis runs at a bounded parallelism.
    """

    def __init__(
        self,
        cache: AudioCache,
        clients: Mapping[str, TtsClient],
        parallelism: int = 4,
    ):
        self.cache = cache
        self.clients = dict(clients)
        self.parallelism = parallelism
        self._lock = threading.Lock()
        self._in_flight: dict[str, Future] = {}

    def synthesize(self, req: SynthRequest) -> AudioAsset:
        client = self.clients.get(req.profile.engine_name)
        if client is None:
            raise ConfigurationError(
                f"no TTS client registered for engine {req.profile.engine_name!r} "
                f"(profile {req.profile.name!r})"
            )
        asset_id = cache_key(req.ssml, req.profile)
        while True:
            with self._lock:
                cached = self.cache.get(asset_id)
                if cached is not None:
                    return cached
                waiter = self._in_flight.get(asset_id)
                if waiter is None:
                    future: Future = Future()
                    self._in_flight[asset_id] = future
                    break
            result = waiter.result()
            if result is not None:
                return result
            # the producing call failed; loop to retry admission
        try:
            data, media_type, duration_ms = client.synthesize(
                req.ssml.markup, req.profile
            )
            if not data:
                raise TransportError("client returned an empty payload", retries=0)
            asset = AudioAsset(
                asset_id=asset_id,
                item_id=req.ssml.item_id,
                kind=req.ssml.kind,
                profile_name=req.ssml.profile_name,
                media_type=media_type,
                data=data,
                duration_ms=duration_ms,
            )
            self.cache.put(asset)
            with self._lock:
                del self._in_flight[asset_id]
            future.set_result(asset)
            return asset
        except BaseException:
            with self._lock:
                del self._in_flight[asset_id]
            future.set_result(None)
            raise

    def synthesize_all(self, requests_: Sequence[SynthRequest]) -> list[AudioAsset]:
        """Synthesize a batch with at most ``parallelism`` in flight."""
        with ThreadPoolExecutor(max_workers=self.parallelism) as pool:
            return list(pool.map(self.synthesize, requests_))
