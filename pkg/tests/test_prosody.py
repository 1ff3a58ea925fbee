"""SSML rendering: golden fragments, tag-strip invariance, profiles."""

import json
import re
import xml.etree.ElementTree as ET

import pytest

from prosodyqa.corpus import QaItem
from prosodyqa.prosody import (
    BUILTIN_PROFILES,
    KINDS,
    EngineProfile,
    UnsupportedModification,
    escape_text,
    load_profiles,
    remove_tags,
    render_ssml,
    resolve_profiles,
)

# SSML 1.1 break element: empty tag, strength attribute restricted
_BREAK_GRAMMAR = re.compile(
    r'<break strength="(none|x-weak|weak|medium|strong|x-strong)"/>'
)


class TestEscape:
    def test_ampersand(self):
        assert escape_text("AT&T") == "AT&amp;T"

    def test_angle_brackets(self):
        assert escape_text("a<b") == "a&lt;b"
        assert escape_text("a>b") == "a&gt;b"

    def test_identity_on_clean_text(self):
        assert escape_text("plain text") == "plain text"

    def test_ampersand_escaped_before_brackets(self):
        assert escape_text("&<>") == "&amp;&lt;&gt;"

    def test_not_idempotent_by_design(self):
        once = escape_text("&")
        assert escape_text(once) == "&amp;amp;"


class TestRender:
    def test_golden_rate_fragment(self, queen_item, google_profile):
        doc = render_ssml(queen_item, "rate", google_profile)
        assert '<prosody rate="slow">Jimi Hendrix</prosody>' in doc.markup
        assert doc.markup.startswith("<speak>")
        assert doc.markup.endswith("</speak>")

    def test_baseline_is_escaped_sentence(self, queen_item, google_profile):
        doc = render_ssml(queen_item, "baseline", google_profile)
        assert doc.markup == f"<speak>{escape_text(queen_item.answer_sentence)}</speak>"

    def test_pause_brackets_key_adjacent(self, queen_item, ibm_profile):
        doc = render_ssml(queen_item, "pause", ibm_profile)
        fragment = (
            'guitarist <break strength="strong"/>Jimi Hendrix'
            '<break strength="strong"/>, with'
        )
        assert fragment in doc.markup
        assert len(_BREAK_GRAMMAR.findall(doc.markup)) == 2

    def test_pitch_wraps_key(self, queen_item, google_profile):
        doc = render_ssml(queen_item, "pitch", google_profile)
        assert '<prosody pitch="+2st">Jimi Hendrix</prosody>' in doc.markup

    def test_emphasis_on_google(self, queen_item, google_profile):
        doc = render_ssml(queen_item, "emphasis", google_profile)
        assert '<emphasis level="strong">Jimi Hendrix</emphasis>' in doc.markup

    def test_emphasis_unsupported_on_ibm(self, queen_item, ibm_profile):
        with pytest.raises(UnsupportedModification, match="ibm-lisa"):
            render_ssml(queen_item, "emphasis", ibm_profile)

    def test_unknown_kind(self, queen_item, google_profile):
        with pytest.raises(ValueError):
            render_ssml(queen_item, "whisper", google_profile)

    def test_determinism(self, queen_item, google_profile):
        a = render_ssml(queen_item, "rate", google_profile)
        b = render_ssml(queen_item, "rate", google_profile)
        assert a == b


def _special_item():
    sentence = "Tom & Jerry <unedited> met Jimi Hendrix at 5 > 4 pm."
    start = sentence.index("Jimi Hendrix")
    return QaItem(
        item_id="special",
        article_title="",
        question="Who met whom?",
        paragraph=sentence,
        answer_sentence=sentence,
        answer_key="Jimi Hendrix",
        key_char_span=(start, start + 12),
    )


class TestInvariants:
    @pytest.mark.parametrize("kind", KINDS)
    @pytest.mark.parametrize("item_name", ["queen-hendrix", "special"])
    def test_tag_strip_invariance(self, kind, item_name, queen_item, google_profile):
        item = queen_item if item_name == "queen-hendrix" else _special_item()
        doc = render_ssml(item, kind, google_profile)
        assert remove_tags(doc.markup) == escape_text(item.answer_sentence)

    @pytest.mark.parametrize("kind", KINDS)
    def test_well_formed_xml(self, kind, queen_item, google_profile):
        doc = render_ssml(queen_item, kind, google_profile)
        root = ET.fromstring(doc.markup)
        assert root.tag == "speak"

    def test_special_chars_well_formed(self, google_profile):
        doc = render_ssml(_special_item(), "rate", google_profile)
        ET.fromstring(doc.markup)

    @pytest.mark.parametrize("kind", KINDS[1:])
    def test_exactly_one_modification_site_covering_key(
        self, kind, queen_item, google_profile
    ):
        doc = render_ssml(queen_item, kind, google_profile)
        baseline = render_ssml(queen_item, "baseline", google_profile).markup
        if kind == "pause":
            opens = _BREAK_GRAMMAR.findall(doc.markup)
            assert len(opens) == 2
            inner = re.search(
                r"<break[^>]*/>(.*?)<break[^>]*/>", doc.markup
            ).group(1)
        else:
            tag = "prosody" if kind in ("rate", "pitch") else "emphasis"
            matches = re.findall(rf"<{tag}[^>]*>(.*?)</{tag}>", doc.markup)
            assert len(matches) == 1
            inner = matches[0]
        start, end = queen_item.key_char_span
        assert inner == escape_text(queen_item.answer_sentence[start:end])
        # surrounding text identical to the escaped baseline
        stripped = re.sub(r"<(break|prosody|emphasis)[^>]*>|</(prosody|emphasis)>", "", doc.markup)
        assert stripped == baseline


class TestProfiles:
    def test_builtin_ibm_row(self):
        p = BUILTIN_PROFILES["ibm-lisa"]
        assert (p.engine_name, p.voice_name) == ("ibm", "Lisa")
        assert p.pause_strength == "strong"
        assert p.rate_value == "x-slow"
        assert p.pitch_value == "x-high"
        assert p.emphasis_level is None
        assert "emphasis" not in p.supported_kinds

    def test_builtin_google_row(self):
        p = BUILTIN_PROFILES["google-wavenet-f"]
        assert (p.engine_name, p.voice_name) == ("google", "Wavenet-F")
        assert p.pause_strength == "strong"
        assert p.rate_value == "slow"
        assert p.pitch_value == "+2st"
        assert p.emphasis_level == "strong"

    def test_bad_token_rejected(self):
        with pytest.raises(ValueError):
            EngineProfile(
                name="evil",
                engine_name="x",
                voice_name="v",
                pause_strength='strong"/><speak>',
                rate_value="slow",
                pitch_value="+2st",
            )

    def test_profile_json_round_trip(self, tmp_path):
        path = tmp_path / "profiles.json"
        path.write_text(
            json.dumps(
                {
                    "custom": {
                        "engine_name": "ibm",
                        "voice_name": "Allison",
                        "pause_strength": "medium",
                        "rate_value": "slow",
                        "pitch_value": "high",
                        "emphasis_level": None,
                    }
                }
            ),
            encoding="utf-8",
        )
        profiles = load_profiles(path)
        assert profiles["custom"].voice_name == "Allison"

    def test_resolve_builtin_names(self):
        out = resolve_profiles(["ibm-lisa"])
        assert list(out) == ["ibm-lisa"]
        with pytest.raises(ValueError, match="unknown built-in"):
            resolve_profiles(["nope"])
