"""SSML generation for answer sentences with a highlighted key span.

Four prosody modifications mark the answer key: a pause inserted before
and after it, a slower speaking rate, a raised pitch, or engine-level
emphasis.  The baseline document carries no markup around the key.
Text around the key stays byte-identical to the escaped baseline, so
stripping all tags always recovers the escaped sentence.

Engine caveats outside this module's control: some engines insert
their own sentence breaks around prosody/emphasis tags, and the
emphasis implementation is engine-defined rather than standardized.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .corpus import QaItem

KINDS = ("baseline", "pause", "rate", "pitch", "emphasis")
MODIFICATION_KINDS = KINDS[1:]

# conservative charset for SSML attribute values coming from config
_TOKEN_RE = re.compile(r"^[A-Za-z0-9+%.\-_]+$")


class UnsupportedModification(ValueError):
    """The requested modification is not available on this profile."""


@dataclass(frozen=True)
class EngineProfile:
    name: str
    engine_name: str
    voice_name: str
    pause_strength: str
    rate_value: str
    pitch_value: str
    emphasis_level: str | None = None

    def __post_init__(self):
        for field in ("pause_strength", "rate_value", "pitch_value"):
            token = getattr(self, field)
            if not _TOKEN_RE.match(token):
                raise ValueError(f"{self.name}: bad SSML token {token!r} for {field}")
        if self.emphasis_level is not None and not _TOKEN_RE.match(self.emphasis_level):
            raise ValueError(f"{self.name}: bad SSML token for emphasis_level")

    @property
    def supported_kinds(self) -> tuple[str, ...]:
        if self.emphasis_level is None:
            return tuple(k for k in KINDS if k != "emphasis")
        return KINDS


@dataclass(frozen=True)
class SsmlDocument:
    markup: str
    item_id: str
    kind: str
    profile_name: str


# the two built-in voice profiles; emphasis is unavailable on the
# IBM voice
BUILTIN_PROFILES = {
    "ibm-lisa": EngineProfile(
        name="ibm-lisa",
        engine_name="ibm",
        voice_name="Lisa",
        pause_strength="strong",
        rate_value="x-slow",
        pitch_value="x-high",
        emphasis_level=None,
    ),
    "google-wavenet-f": EngineProfile(
        name="google-wavenet-f",
        engine_name="google",
        voice_name="Wavenet-F",
        pause_strength="strong",
        rate_value="slow",
        pitch_value="+2st",
        emphasis_level="strong",
    ),
}


def escape_text(raw: str) -> str:
    """Escape text for SSML content: '&' then '<' then '>', each applied
    exactly once.  Not idempotent: escaping already-escaped text
    escapes the ampersands again."""
    return raw.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def remove_tags(markup: str) -> str:
    """Strip every XML tag, leaving only text content."""
    return re.sub(r"<[^>]*>", "", markup)


def render_ssml(item: QaItem, kind: str, profile: EngineProfile) -> SsmlDocument:
    """Render the SSML document for one item and modification kind.

    The key span is wrapped (or, for pauses, bracketed by break tags)
    with no added whitespace; the surrounding text is byte-identical to
    the escaped baseline sentence.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown modification kind {kind!r}")
    if kind == "emphasis" and profile.emphasis_level is None:
        raise UnsupportedModification(
            f"profile {profile.name!r} does not support emphasis"
        )
    start, end = item.key_char_span
    before = escape_text(item.answer_sentence[:start])
    key = escape_text(item.answer_sentence[start:end])
    after = escape_text(item.answer_sentence[end:])

    if kind == "baseline":
        body = before + key + after
    elif kind == "pause":
        brk = f'<break strength="{profile.pause_strength}"/>'
        body = f"{before}{brk}{key}{brk}{after}"
    elif kind == "rate":
        body = f'{before}<prosody rate="{profile.rate_value}">{key}</prosody>{after}'
    elif kind == "pitch":
        body = f'{before}<prosody pitch="{profile.pitch_value}">{key}</prosody>{after}'
    else:
        body = (
            f'{before}<emphasis level="{profile.emphasis_level}">{key}</emphasis>{after}'
        )
    return SsmlDocument(
        markup=f"<speak>{body}</speak>",
        item_id=item.item_id,
        kind=kind,
        profile_name=profile.name,
    )


def load_profiles(path: str | Path) -> dict[str, EngineProfile]:
    """Load profiles from a JSON file mapping profile name to fields
    (engine_name, voice_name, pause_strength, rate_value, pitch_value,
    optional emphasis_level)."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    profiles = {}
    for name, fields in payload.items():
        profiles[name] = EngineProfile(name=name, **fields)
    return profiles


def resolve_profiles(spec: list | dict | None) -> dict[str, EngineProfile]:
    """Resolve a config profiles entry: a list of built-in names, a
    mapping of name to field dicts, or None for every built-in."""
    if spec is None:
        return dict(BUILTIN_PROFILES)
    if isinstance(spec, list):
        out = {}
        for name in spec:
            if name not in BUILTIN_PROFILES:
                raise ValueError(
                    f"unknown built-in profile {name!r}; known: {sorted(BUILTIN_PROFILES)}"
                )
            out[name] = BUILTIN_PROFILES[name]
        return out
    return {name: EngineProfile(name=name, **fields) for name, fields in spec.items()}
