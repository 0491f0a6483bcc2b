"""Regex dialect identities and per-dialect notation profiles.

A profile records how a dialect reads each non-core notation: as the named
feature, as plain literal characters, as a different feature, or as a syntax
error. The profile drives the parser; the behavioral consequences live in the
dialect catalog.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Dialect(Enum):
    JAVASCRIPT = "javascript"
    JAVA = "java"
    PHP = "php"
    PYTHON = "python"
    RUBY = "ruby"
    GO = "go"
    PERL = "perl"
    RUST = "rust"
    PORTABLE_CORE = "portable-core"

    @classmethod
    def from_name(cls, name: str) -> "Dialect":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown dialect: {name!r}") from None


# The eight concrete dialects; PORTABLE_CORE is their feature intersection.
CONCRETE_DIALECTS = tuple(d for d in Dialect if d is not Dialect.PORTABLE_CORE)

# How a dialect reads one notation.
FEATURE = "feature"    # the notation means its nominal feature
LITERAL = "literal"    # degrades to literal character(s)
ERROR = "error"        # rejected at parse time
ALT = "alt"            # reads as a different feature (e.g. \1 as octal)


@dataclass(frozen=True)
class NotationProfile:
    """Per-dialect reading of every notation the parser distinguishes."""

    quote_block: str       # \Q...\E
    match_anchor_g: str    # \G
    string_anchors: str    # \A and \Z
    end_anchor_z: str      # \z
    match_reset: str       # \K
    escape_e: str          # \e (ESC control char)
    control_escape: str    # \cX
    hex_brace: str         # \x{41}; LITERAL means the x{41} quantifier reading
    backref_g: str         # \g1
    backref_g_angle: str   # \g<1>
    uprop_braced: str      # \p{N}
    uprop_bare: str        # \pN
    posix_class: str       # [[:digit:]]; LITERAL means naive char-class reading
    possessive: str        # a++; ALT means plain (non-possessive) quantifier
    backref_numeric: str   # \1; ALT means octal escape
    escape_h: str          # \h; ALT means hex-digit class
    named_group: str       # (?<name>...)
    named_group_p: str     # (?P<name>...)
    empty_class: bool      # True: [] is an empty class; False: leading ] is a member
    lookaround: str        # FEATURE = parsed (flagged for analysis), ERROR = rejected
    inline_flags: str      # (?i) / (?i:...); FEATURE = parsed-and-flagged
    unknown_letter_escape: str  # \q and friends: LITERAL identity or ERROR


_PROFILES: dict[Dialect, NotationProfile] = {
    Dialect.JAVASCRIPT: NotationProfile(
        quote_block=LITERAL, match_anchor_g=LITERAL, string_anchors=LITERAL,
        end_anchor_z=LITERAL, match_reset=LITERAL, escape_e=LITERAL,
        control_escape=FEATURE, hex_brace=LITERAL, backref_g=LITERAL,
        backref_g_angle=LITERAL, uprop_braced=LITERAL, uprop_bare=LITERAL,
        posix_class=LITERAL, possessive=ERROR, backref_numeric=FEATURE,
        escape_h=LITERAL, named_group=FEATURE, named_group_p=ERROR,
        empty_class=True, lookaround=FEATURE, inline_flags=ERROR,
        unknown_letter_escape=LITERAL,
    ),
    Dialect.JAVA: NotationProfile(
        quote_block=FEATURE, match_anchor_g=FEATURE, string_anchors=FEATURE,
        end_anchor_z=FEATURE, match_reset=ERROR, escape_e=FEATURE,
        control_escape=FEATURE, hex_brace=FEATURE, backref_g=ERROR,
        backref_g_angle=ERROR, uprop_braced=FEATURE, uprop_bare=FEATURE,
        posix_class=LITERAL, possessive=FEATURE, backref_numeric=FEATURE,
        escape_h=FEATURE, named_group=FEATURE, named_group_p=ERROR,
        empty_class=False, lookaround=FEATURE, inline_flags=FEATURE,
        unknown_letter_escape=ERROR,
    ),
    Dialect.PHP: NotationProfile(
        quote_block=FEATURE, match_anchor_g=FEATURE, string_anchors=FEATURE,
        end_anchor_z=FEATURE, match_reset=FEATURE, escape_e=FEATURE,
        control_escape=FEATURE, hex_brace=FEATURE, backref_g=FEATURE,
        backref_g_angle=FEATURE, uprop_braced=FEATURE, uprop_bare=FEATURE,
        posix_class=FEATURE, possessive=FEATURE, backref_numeric=FEATURE,
        escape_h=FEATURE, named_group=FEATURE, named_group_p=FEATURE,
        empty_class=False, lookaround=FEATURE, inline_flags=FEATURE,
        unknown_letter_escape=LITERAL,
    ),
    Dialect.PYTHON: NotationProfile(
        quote_block=LITERAL, match_anchor_g=LITERAL, string_anchors=FEATURE,
        end_anchor_z=LITERAL, match_reset=LITERAL, escape_e=LITERAL,
        control_escape=LITERAL, hex_brace=ERROR, backref_g=LITERAL,
        backref_g_angle=LITERAL, uprop_braced=LITERAL, uprop_bare=LITERAL,
        posix_class=LITERAL, possessive=ERROR, backref_numeric=FEATURE,
        escape_h=LITERAL, named_group=ERROR, named_group_p=FEATURE,
        empty_class=False, lookaround=FEATURE, inline_flags=FEATURE,
        unknown_letter_escape=ERROR,
    ),
    Dialect.RUBY: NotationProfile(
        quote_block=LITERAL, match_anchor_g=FEATURE, string_anchors=FEATURE,
        end_anchor_z=FEATURE, match_reset=FEATURE, escape_e=FEATURE,
        control_escape=FEATURE, hex_brace=ERROR, backref_g=LITERAL,
        backref_g_angle=FEATURE, uprop_braced=FEATURE, uprop_bare=LITERAL,
        posix_class=FEATURE, possessive=FEATURE, backref_numeric=FEATURE,
        escape_h=ALT, named_group=FEATURE, named_group_p=ERROR,
        empty_class=False, lookaround=FEATURE, inline_flags=FEATURE,
        unknown_letter_escape=LITERAL,
    ),
    Dialect.GO: NotationProfile(
        quote_block=FEATURE, match_anchor_g=ERROR, string_anchors=ERROR,
        end_anchor_z=FEATURE, match_reset=ERROR, escape_e=ERROR,
        control_escape=ERROR, hex_brace=FEATURE, backref_g=ERROR,
        backref_g_angle=ERROR, uprop_braced=FEATURE, uprop_bare=FEATURE,
        posix_class=FEATURE, possessive=ERROR, backref_numeric=ERROR,
        escape_h=ERROR, named_group=ERROR, named_group_p=FEATURE,
        empty_class=False, lookaround=ERROR, inline_flags=FEATURE,
        unknown_letter_escape=ERROR,
    ),
    Dialect.PERL: NotationProfile(
        quote_block=FEATURE, match_anchor_g=FEATURE, string_anchors=FEATURE,
        end_anchor_z=FEATURE, match_reset=FEATURE, escape_e=FEATURE,
        control_escape=FEATURE, hex_brace=FEATURE, backref_g=FEATURE,
        backref_g_angle=ERROR, uprop_braced=FEATURE, uprop_bare=FEATURE,
        posix_class=FEATURE, possessive=FEATURE, backref_numeric=FEATURE,
        escape_h=FEATURE, named_group=FEATURE, named_group_p=FEATURE,
        empty_class=False, lookaround=FEATURE, inline_flags=FEATURE,
        unknown_letter_escape=LITERAL,
    ),
    Dialect.RUST: NotationProfile(
        quote_block=ERROR, match_anchor_g=ERROR, string_anchors=ERROR,
        end_anchor_z=FEATURE, match_reset=ERROR, escape_e=ERROR,
        control_escape=ERROR, hex_brace=FEATURE, backref_g=ERROR,
        backref_g_angle=ERROR, uprop_braced=FEATURE, uprop_bare=FEATURE,
        posix_class=FEATURE, possessive=ALT, backref_numeric=ALT,
        escape_h=ERROR, named_group=ERROR, named_group_p=FEATURE,
        empty_class=False, lookaround=ERROR, inline_flags=FEATURE,
        unknown_letter_escape=ERROR,
    ),
    # The intersection: anything the eight do not all agree on is rejected.
    Dialect.PORTABLE_CORE: NotationProfile(
        quote_block=ERROR, match_anchor_g=ERROR, string_anchors=ERROR,
        end_anchor_z=ERROR, match_reset=ERROR, escape_e=ERROR,
        control_escape=ERROR, hex_brace=ERROR, backref_g=ERROR,
        backref_g_angle=ERROR, uprop_braced=ERROR, uprop_bare=ERROR,
        posix_class=ERROR, possessive=ERROR, backref_numeric=ERROR,
        escape_h=ERROR, named_group=ERROR, named_group_p=ERROR,
        empty_class=False, lookaround=ERROR, inline_flags=ERROR,
        unknown_letter_escape=ERROR,
    ),
}


def profile(dialect: Dialect) -> NotationProfile:
    return _PROFILES[dialect]
