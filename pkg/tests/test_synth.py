"""Synthesis drivers: cache keys, mock determinism, retries, admission."""

import io
import threading
import wave

import pytest
import requests
from hypothesis import given, settings
from hypothesis import strategies as st

from prosodyqa.prosody import BUILTIN_PROFILES, SsmlDocument
from prosodyqa.synth import (
    AudioCache,
    ConfigurationError,
    MockTtsClient,
    RemoteTtsClient,
    Synthesizer,
    SynthRequest,
    TransportError,
    cache_key,
)

GOOGLE = BUILTIN_PROFILES["google-wavenet-f"]
IBM = BUILTIN_PROFILES["ibm-lisa"]


def doc(markup="<speak>hello there</speak>", item_id="i1", kind="baseline", profile=GOOGLE):
    return SsmlDocument(markup=markup, item_id=item_id, kind=kind, profile_name=profile.name)


class TestCacheKey:
    def test_identical_inputs_identical_ids(self):
        assert cache_key(doc(), GOOGLE) == cache_key(doc(), GOOGLE)

    def test_voice_changes_id(self):
        assert cache_key(doc(), GOOGLE) != cache_key(doc(), IBM)

    @given(st.text(min_size=1, max_size=40), st.integers(0, 39))
    @settings(max_examples=100, deadline=None)
    def test_single_character_edit_changes_id(self, markup, pos):
        pos = min(pos, len(markup) - 1)
        edited = markup[:pos] + ("\x01" if markup[pos] != "\x01" else "\x02") + markup[pos + 1 :]
        a = cache_key(doc(markup=markup), GOOGLE)
        b = cache_key(doc(markup=edited), GOOGLE)
        assert a != b


class TestMockClient:
    def test_deterministic_payload(self):
        client = MockTtsClient()
        a = client.synthesize("<speak>x</speak>", GOOGLE)
        b = client.synthesize("<speak>x</speak>", GOOGLE)
        assert a == b

    def test_payload_varies_with_markup(self):
        client = MockTtsClient()
        a, _, _ = client.synthesize("<speak>x</speak>", GOOGLE)
        b, _, _ = client.synthesize("<speak>y</speak>", GOOGLE)
        assert a != b

    def test_valid_wav(self):
        data, media_type, duration = MockTtsClient().synthesize("<speak>x</speak>", GOOGLE)
        assert media_type == "audio/wav"
        with wave.open(io.BytesIO(data)) as wav:
            assert wav.getnchannels() == 1
            assert wav.getframerate() == 16000
            assert wav.getnframes() > 0
        assert duration == 960


class _FlakySession:
    """Stub session failing n times before succeeding."""

    def __init__(self, failures, payload=b"AUDIO"):
        self.failures = failures
        self.payload = payload
        self.calls = 0

    def post(self, url, json=None, headers=None, timeout=None):
        self.calls += 1
        if self.calls <= self.failures:
            raise requests.ConnectionError("boom")
        response = requests.Response()
        response.status_code = 200
        response._content = self.payload
        return response


class TestRemoteClient:
    def test_missing_credentials_names_env_var(self, monkeypatch):
        monkeypatch.delenv("TTS_KEY", raising=False)
        client = RemoteTtsClient("http://tts.example/v1", "TTS_KEY")
        with pytest.raises(ConfigurationError, match="TTS_KEY"):
            client.synthesize("<speak>x</speak>", GOOGLE)

    def test_retries_then_succeeds(self, monkeypatch):
        monkeypatch.setenv("TTS_KEY", "secret")
        session = _FlakySession(failures=2)
        client = RemoteTtsClient(
            "http://tts.example/v1", "TTS_KEY", backoff_s=0.0, session=session
        )
        data, media_type, _ = client.synthesize("<speak>x</speak>", GOOGLE)
        assert data == b"AUDIO"
        assert session.calls == 3

    def test_transport_error_reports_retry_count(self, monkeypatch):
        monkeypatch.setenv("TTS_KEY", "secret")
        session = _FlakySession(failures=10)
        client = RemoteTtsClient(
            "http://tts.example/v1", "TTS_KEY", max_retries=3, backoff_s=0.0, session=session
        )
        with pytest.raises(TransportError) as excinfo:
            client.synthesize("<speak>x</speak>", GOOGLE)
        assert excinfo.value.retries == 3
        assert session.calls == 4


class _CountingClient(MockTtsClient):
    pass


class TestSynthesizer:
    def make(self, tmp_path, client=None):
        client = client or _CountingClient()
        cache = AudioCache(tmp_path / "audio")
        return Synthesizer(cache, {"google": client, "ibm": client}), client

    def test_cache_hit_second_call_free(self, tmp_path):
        synthesizer, client = self.make(tmp_path)
        req = SynthRequest(ssml=doc(), profile=GOOGLE)
        first = synthesizer.synthesize(req)
        second = synthesizer.synthesize(req)
        assert client.calls == 1
        assert first == second

    def test_unknown_engine_is_configuration_error(self, tmp_path):
        synthesizer, _ = self.make(tmp_path)
        profile = GOOGLE.__class__(
            name="weird",
            engine_name="unregistered",
            voice_name="v",
            pause_strength="strong",
            rate_value="slow",
            pitch_value="+2st",
        )
        with pytest.raises(ConfigurationError, match="unregistered"):
            synthesizer.synthesize(SynthRequest(ssml=doc(profile=profile), profile=profile))

    def test_asset_persisted_with_sidecar(self, tmp_path):
        synthesizer, _ = self.make(tmp_path)
        asset = synthesizer.synthesize(SynthRequest(ssml=doc(), profile=GOOGLE))
        audio_dir = tmp_path / "audio"
        assert (audio_dir / f"{asset.asset_id}.wav").exists()
        assert (audio_dir / f"{asset.asset_id}.json").exists()
        reloaded = synthesizer.cache.get(asset.asset_id)
        assert reloaded == asset

    def test_concurrent_calls_single_synthesis(self, tmp_path):
        synthesizer, client = self.make(tmp_path)
        req = SynthRequest(ssml=doc(), profile=GOOGLE)
        results = []
        threads = [
            threading.Thread(target=lambda: results.append(synthesizer.synthesize(req)))
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert client.calls == 1
        assert len({r.asset_id for r in results}) == 1

    def test_batch_parallelism(self, tmp_path):
        synthesizer, client = self.make(tmp_path)
        docs = [doc(markup=f"<speak>{i}</speak>", item_id=f"i{i}") for i in range(10)]
        requests_ = [SynthRequest(ssml=d, profile=GOOGLE) for d in docs]
        assets = synthesizer.synthesize_all(requests_)
        assert len({a.asset_id for a in assets}) == 10
        assert client.calls == 10

    def test_queen_rate_golden_hash(self, queen_item):
        # frozen from the first oracle run; the asset id hashes only
        # text, the payload hash pins the integer tone synthesis
        import hashlib

        from prosodyqa.prosody import render_ssml

        ssml = render_ssml(queen_item, "rate", GOOGLE)
        assert (
            cache_key(ssml, GOOGLE)
            == "c7a58e9c604cb6ec7222a0ce53c57b6b0d4e54d76a861eba878ca9632ceecc97"
        )
        data, _, _ = MockTtsClient().synthesize(ssml.markup, GOOGLE)
        assert (
            hashlib.sha256(data).hexdigest()
            == "6fbd27ddcfb619e70f7d1375422f2e3e34cfb5c65bcc1748addd754604fd5f57"
        )

    def test_mock_payload_stable_across_runs(self, tmp_path):
        synthesizer, _ = self.make(tmp_path)
        asset = synthesizer.synthesize(SynthRequest(ssml=doc(), profile=GOOGLE))
        other_cache = AudioCache(tmp_path / "audio2")
        other = Synthesizer(other_cache, {"google": MockTtsClient()})
        again = other.synthesize(SynthRequest(ssml=doc(), profile=GOOGLE))
        assert asset.asset_id == again.asset_id
        assert asset.data == again.data
