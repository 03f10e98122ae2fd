"""Input stream construction, timing, replay, and keystroke taxonomy."""

from __future__ import annotations

import pytest

import abugida as ab


def ev(t, kind, payload=""):
    return ab.KeyEvent(t, kind, payload)


class TestKeyEvent:
    def test_kind_coercion(self):
        assert ev(0, "char", "ক").kind is ab.KeyEventKind.CHAR

    def test_negative_timestamp_rejected(self):
        with pytest.raises(ValueError):
            ev(-1, "char", "ক")

    def test_textless_kinds_reject_payloads(self):
        for kind in ("bksp", "edit", "mod"):
            with pytest.raises(ValueError):
                ev(0, kind, "ক")

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ev(0, "tap", "ক")


class TestBuildInputStream:
    def test_sidebar_has_twelve_keystrokes(self, sidebar_events):
        assert ab.build_input_stream(sidebar_events).length == 12

    def test_modifiers_and_backspaces_count(self):
        stream = ab.build_input_stream([
            ev(0, "char", "ব"), ev(10, "bksp"), ev(20, "mod"), ev(30, "char", "ই"),
        ])
        assert stream.length == 4

    def test_empty_rejected(self):
        with pytest.raises(ab.EmptySessionError):
            ab.build_input_stream([])

    def test_sorts_by_timestamp(self):
        stream = ab.build_input_stream([ev(50, "char", "ই"), ev(0, "char", "ব")])
        assert [e.t_ms for e in stream] == [0, 50]

    def test_stable_for_equal_timestamps(self):
        a, b = ev(5, "char", "ব"), ev(5, "char", "ই")
        assert ab.build_input_stream([a, b]).events == (a, b)


class TestDuration:
    def test_sidebar_is_twenty_seconds(self, sidebar_events):
        assert ab.session_duration_s(ab.build_input_stream(sidebar_events)) == 20.0

    def test_single_event_is_zero(self):
        assert ab.session_duration_s(ab.build_input_stream([ev(700, "char", "ক")])) == 0.0

    def test_millisecond_difference(self):
        stream = ab.build_input_stream([ev(500, "char", "ক"), ev(3100, "char", "ই")])
        assert ab.session_duration_s(stream) == pytest.approx(2.6)

    def test_translation_invariant(self):
        base = [ev(100, "char", "ক"), ev(900, "char", "ই")]
        shifted = [ev(100_100, "char", "ক"), ev(100_900, "char", "ই")]
        assert (ab.session_duration_s(ab.build_input_stream(base))
                == ab.session_duration_s(ab.build_input_stream(shifted)))


class TestReplay:
    def test_chars_concatenate(self):
        result = ab.replay_events([ev(0, "char", "ব"), ev(10, "char", "ই")])
        assert result.text == "বই"
        assert result.erased == ()

    def test_adjacent_keys_compose_after_normalize(self):
        result = ab.replay_events([ev(0, "char", "ক"),
                                   ev(10, "char", "ে"),
                                   ev(20, "char", "া")])
        assert ab.normalize(result.text) == "কো"

    def test_backspace_pops_one_character(self):
        result = ab.replay_events([ev(0, "char", "ক"), ev(10, "char", "া"),
                                   ev(20, "bksp")])
        assert result.text == "ক"
        assert result.erased == ("া",)

    def test_unit_backspace_at_unit_granularity(self, sidebar_profile):
        result = ab.replay_events(
            [ev(0, "unit", "ক্ষ"), ev(10, "bksp")], sidebar_profile)
        assert result.text == ""
        assert result.erased == ("ক্ষ",)

    def test_unit_backspace_at_basic_granularity(self):
        profile = ab.TechniqueProfile("t", frozenset({"ক্ষ"}))
        result = ab.replay_events([ev(0, "unit", "ক্ষ"), ev(10, "bksp")], profile)
        assert result.text == "ক্"
        assert result.erased == ("ষ",)

    def test_underflow(self):
        with pytest.raises(ab.ReplayUnderflowError):
            ab.replay_events([ev(0, "bksp")])

    def test_undeclared_unit_rejected(self, sidebar_profile):
        with pytest.raises(ab.UnknownUnitError):
            ab.replay_events([ev(0, "unit", "ন্ড")], sidebar_profile)

    def test_permissive_mode_accepts_any_unit(self):
        assert ab.replay_events([ev(0, "unit", "ন্ড")]).text == "ন্ড"

    def test_edit_keys_rejected(self):
        with pytest.raises(ab.UnsupportedKeyError):
            ab.replay_events([ev(0, "char", "ক"), ev(10, "edit")])

    def test_modifiers_produce_no_text(self, sidebar_profile):
        result = ab.replay_events([ev(0, "mod"), ev(10, "char", "ক")],
                                  sidebar_profile)
        assert result.text == "ক"

    def test_sidebar_replays_to_transcription(self, sidebar_events, sidebar_profile):
        from conftest import TRANSCRIBED
        assert ab.replay_transcription(sidebar_events, sidebar_profile) == TRANSCRIBED


class TestClassifyKeystrokes:
    def test_sidebar_taxonomy(self, sidebar_events, sidebar_profile):
        os_t = ab.to_output_stream("ক্ষণিকের অতথি")
        tax = ab.classify_keystrokes(sidebar_events, os_t, 1, sidebar_profile)
        assert tax == ab.KeystrokeTaxonomy(
            correct=12, incorrect_fixed=0, fixes=0, incorrect_not_fixed=1)

    def test_error_free_session(self):
        events = [ev(0, "char", "ব"), ev(10, "char", "ই")]
        os_t = ab.to_output_stream("বই")
        tax = ab.classify_keystrokes(events, os_t, 0)
        assert tax == ab.KeystrokeTaxonomy(2, 0, 0, 0)

    def test_corrected_error(self):
        # typed ঈ, erased it, typed ই
        events = [ev(0, "char", "ব"), ev(10, "char", "ঈ"),
                  ev(20, "bksp"), ev(30, "char", "ই")]
        os_t = ab.to_output_stream("বই")
        tax = ab.classify_keystrokes(events, os_t, 0)
        assert tax == ab.KeystrokeTaxonomy(2, 1, 1, 0)

    def test_unit_erasure_counts_constituents(self, sidebar_profile):
        events = [ev(0, "unit", "ক্ষ"), ev(10, "bksp"), ev(20, "char", "ক")]
        os_t = ab.to_output_stream("ক")
        tax = ab.classify_keystrokes(events, os_t, 0, sidebar_profile)
        assert tax.incorrect_fixed == 3
        assert tax.fixes == 1

    @pytest.mark.parametrize("inf", [0, 1, 5])
    def test_conservation(self, inf):
        events = [ev(i * 10, "char", c) for i, c in enumerate("কখগঘঙ")]
        os_t = ab.to_output_stream("কখগঘঙ")
        tax = ab.classify_keystrokes(events, os_t, inf)
        assert tax.correct + tax.incorrect_not_fixed == os_t.length
