"""Double Metaphone phonetic encoding.

Encodes a word into a primary and an alternate phonetic code over the
Double Metaphone symbol set (uppercase letters plus '0' for the 'th'
sound).  Codes are not length-capped.  Input is case-insensitive;
accents are decomposed and anything that is not an ASCII letter is
dropped before encoding.
"""

from __future__ import annotations

import unicodedata
from typing import NamedTuple

_VOWELS = frozenset("AEIOUY")
_SILENT_STARTS = ("GN", "KN", "PN", "WR", "PS")


class PhoneticCode(NamedTuple):
    primary: str
    alternate: str


def _letters_only(word: str) -> str:
    decomposed = unicodedata.normalize("NFKD", word).upper()
    return "".join(c for c in decomposed if "A" <= c <= "Z")


def metaphone_encode(word: str) -> PhoneticCode:
    """Encode one word; returns an empty code when it has no letters."""
    cleaned = _letters_only(word)
    if not cleaned:
        return PhoneticCode("", "")
    primary, secondary = _encode(cleaned)
    return PhoneticCode(primary, secondary if secondary is not None else primary)


def _encode(word: str) -> tuple[str, str | None]:
    # The word is padded so every rule may look two characters back and
    # five ahead without bounds checks ('-' never matches any rule).
    slavo_germanic = (
        "W" in word or "K" in word or "CZ" in word or "WITZ" in word
    )
    length = len(word)
    first = 2
    s = "-" * first + word + " " * 5
    last = first + length - 1
    pos = first
    pri = sec = ""

    if s[first : first + 2] in _SILENT_STARTS:
        pos += 1
    if s[first] == "X":  # initial X sounds like Z, coded S
        pri = sec = "S"
        pos += 1

    while pos <= last:
        ch = s[pos]
        # nxt = (primary addition, [secondary addition,] advance);
        # a lone addition applies to both codes, None adds nothing.
        nxt: tuple = (None, 1)
        if ch in _VOWELS:
            if pos == first:
                nxt = ("A", 1)
        elif ch == "B":
            nxt = ("P", 2) if s[pos + 1] == "B" else ("P", 1)
        elif ch == "C":
            if (
                pos > first + 1
                and s[pos - 2] not in _VOWELS
                and s[pos - 1 : pos + 2] == "ACH"
                and (
                    s[pos + 2] not in ("I", "E")
                    or s[pos - 2 : pos + 4] in ("BACHER", "MACHER")
                )
            ):
                nxt = ("K", 2)
            elif pos == first and s[first : first + 6] == "CAESAR":
                nxt = ("S", 2)
            elif s[pos : pos + 4] == "CHIA":
                nxt = ("K", 2)
            elif s[pos : pos + 2] == "CH":
                if pos > first and s[pos : pos + 4] == "CHAE":
                    nxt = ("K", "X", 2)
                elif (
                    pos == first
                    and (
                        s[pos + 1 : pos + 6] in ("HARAC", "HARIS")
                        or s[pos + 1 : pos + 4] in ("HOR", "HYM", "HIA", "HEM")
                    )
                    and s[first : first + 5] != "CHORE"
                ):
                    nxt = ("K", 2)
                elif (
                    s[first : first + 4] in ("VAN ", "VON ")
                    or s[first : first + 3] == "SCH"
                    or s[pos - 2 : pos + 4] in ("ORCHES", "ARCHIT", "ORCHID")
                    or s[pos + 2] in ("T", "S")
                    or (
                        (s[pos - 1] in ("A", "O", "U", "E") or pos == first)
                        and s[pos + 2]
                        in ("L", "R", "N", "M", "B", "H", "F", "V", "W", " ")
                    )
                ):
                    nxt = ("K", 1)
                elif pos > first:
                    if s[first : first + 2] == "MC":
                        nxt = ("K", 2)
                    else:
                        nxt = ("X", "K", 2)
                else:
                    nxt = ("X", 2)
            elif s[pos : pos + 2] == "CZ" and s[pos - 2 : pos + 2] != "WICZ":
                nxt = ("S", "X", 2)
            elif s[pos + 1 : pos + 4] == "CIA":
                nxt = ("X", 3)
            elif s[pos : pos + 2] == "CC" and not (
                pos == first + 1 and s[first] == "M"
            ):
                if s[pos + 2] in ("I", "E", "H") and s[pos + 2 : pos + 4] != "HU":
                    if (pos == first + 1 and s[first] == "A") or s[
                        pos - 1 : pos + 4
                    ] in ("UCCEE", "UCCES"):
                        nxt = ("KS", 3)
                    else:
                        nxt = ("X", 3)
                else:
                    nxt = ("K", 2)
            elif s[pos : pos + 2] in ("CK", "CG", "CQ"):
                nxt = ("K", 2)
            elif s[pos : pos + 2] in ("CI", "CE", "CY"):
                if s[pos : pos + 3] in ("CIO", "CIE", "CIA"):
                    nxt = ("S", "X", 2)
                else:
                    nxt = ("S", 2)
            elif s[pos + 1 : pos + 3] in (" C", " Q", " G"):
                nxt = ("K", 3)
            elif s[pos + 1] in ("C", "K", "Q") and s[pos + 1 : pos + 3] not in (
                "CE",
                "CI",
            ):
                nxt = ("K", 2)
            else:
                nxt = ("K", 1)
        elif ch == "D":
            if s[pos : pos + 2] == "DG":
                if s[pos + 2] in ("I", "E", "Y"):
                    nxt = ("J", 3)
                else:
                    nxt = ("TK", 2)
            elif s[pos : pos + 2] in ("DT", "DD"):
                nxt = ("T", 2)
            else:
                nxt = ("T", 1)
        elif ch == "F":
            nxt = ("F", 2) if s[pos + 1] == "F" else ("F", 1)
        elif ch == "G":
            if s[pos + 1] == "H":
                if pos > first and s[pos - 1] not in _VOWELS:
                    nxt = ("K", 2)
                elif pos < first + 3:
                    if pos == first:
                        if s[pos + 2] == "I":
                            nxt = ("J", 2)
                        else:
                            nxt = ("K", 2)
                elif (
                    (pos > first + 1 and s[pos - 2] in ("B", "H", "D"))
                    or (pos > first + 2 and s[pos - 3] in ("B", "H", "D"))
                    or (pos > first + 3 and s[pos - 4] in ("B", "H"))
                ):
                    nxt = (None, 2)
                elif (
                    pos > first + 2
                    and s[pos - 1] == "U"
                    and s[pos - 3] in ("C", "G", "L", "R", "T")
                ):
                    nxt = ("F", 2)
                elif pos > first and s[pos - 1] != "I":
                    nxt = ("K", 2)
            elif s[pos + 1] == "N":
                if pos == first + 1 and s[first] in _VOWELS and not slavo_germanic:
                    nxt = ("KN", "N", 2)
                elif (
                    s[pos + 2 : pos + 4] != "EY"
                    and s[pos + 1] != "Y"
                    and not slavo_germanic
                ):
                    nxt = ("N", "KN", 2)
                else:
                    nxt = ("KN", 2)
            elif s[pos + 1 : pos + 3] == "LI" and not slavo_germanic:
                nxt = ("KL", "L", 2)
            elif pos == first and (
                s[pos + 1] == "Y"
                or s[pos + 1 : pos + 3]
                in ("ES", "EP", "EB", "EL", "EY", "IB", "IL", "IN", "IE", "EI", "ER")
            ):
                nxt = ("K", "J", 2)
            elif (
                (s[pos + 1 : pos + 2] == "ER" or s[pos + 1] == "Y")
                and s[first : first + 6] not in ("DANGER", "RANGER", "MANGER")
                and s[pos - 1] not in ("E", "I")
                and s[pos - 1 : pos + 2] not in ("RGY", "OGY")
            ):
                nxt = ("K", "J", 2)
            elif s[pos + 1] in ("E", "I", "Y") or s[pos - 1 : pos + 3] in (
                "AGGI",
                "OGGI",
            ):
                if (
                    s[first : first + 4] in ("VON ", "VAN ")
                    or s[first : first + 3] == "SCH"
                    or s[pos + 1 : pos + 3] == "ET"
                ):
                    nxt = ("K", 2)
                elif s[pos + 1 : pos + 5] == "IER ":
                    nxt = ("J", 2)
                else:
                    nxt = ("J", "K", 2)
            elif s[pos + 1] == "G":
                nxt = ("K", 2)
            else:
                nxt = ("K", 1)
        elif ch == "H":
            # keep H only when initial or intervocalic
            if (pos == first or s[pos - 1] in _VOWELS) and s[pos + 1] in _VOWELS:
                nxt = ("H", 2)
            else:
                nxt = (None, 1)
        elif ch == "J":
            if s[pos : pos + 4] == "JOSE" or s[first : first + 4] == "SAN ":
                if (pos == first and s[pos + 4] == " ") or s[
                    first : first + 4
                ] == "SAN ":
                    nxt = ("H",)
                else:
                    nxt = ("J", "H")
            elif pos == first:
                nxt = ("J", "A")
            elif (
                s[pos - 1] in _VOWELS
                and not slavo_germanic
                and s[pos + 1] in ("A", "O")
            ):
                nxt = ("J", "H")
            elif pos == last:
                # final J is silent in the alternate reading
                nxt = ("J", None)
            elif s[pos + 1] not in (
                "L", "T", "K", "S", "N", "M", "B", "Z",
            ) and s[pos - 1] not in ("S", "K", "L"):
                nxt = ("J",)
            else:
                nxt = (None,)
            nxt = nxt + ((2,) if s[pos + 1] == "J" else (1,))
        elif ch == "K":
            nxt = ("K", 2) if s[pos + 1] == "K" else ("K", 1)
        elif ch == "L":
            if s[pos + 1] == "L":
                # Spanish-style silent second L, e.g. 'cabrillo'
                if (
                    pos == last - 2
                    and s[pos - 1 : pos + 3] in ("ILLO", "ILLA", "ALLE")
                ) or (
                    (s[last - 1 : last + 1] in ("AS", "OS") or s[last] in ("A", "O"))
                    and s[pos - 1 : pos + 3] == "ALLE"
                ):
                    nxt = ("L", None, 2)
                else:
                    nxt = ("L", 2)
            else:
                nxt = ("L", 1)
        elif ch == "M":
            if (
                s[pos + 1 : pos + 4] == "UMB"
                and (pos + 1 == last or s[pos + 2 : pos + 4] == "ER")
                or s[pos + 1] == "M"
            ):
                nxt = ("M", 2)
            else:
                nxt = ("M", 1)
        elif ch == "N":
            nxt = ("N", 2) if s[pos + 1] == "N" else ("N", 1)
        elif ch == "P":
            if s[pos + 1] == "H":
                nxt = ("F", 2)
            elif s[pos + 1] in ("P", "B"):
                nxt = ("P", 2)
            else:
                nxt = ("P", 1)
        elif ch == "Q":
            nxt = ("K", 2) if s[pos + 1] == "Q" else ("K", 1)
        elif ch == "R":
            if (
                pos == last
                and not slavo_germanic
                and s[pos - 2 : pos] == "IE"
                and s[pos - 4 : pos - 2] not in ("ME", "MA")
            ):
                nxt = (None, "R")
            else:
                nxt = ("R",)
            nxt = nxt + ((2,) if s[pos + 1] == "R" else (1,))
        elif ch == "S":
            if s[pos - 1 : pos + 2] in ("ISL", "YSL"):
                nxt = (None, 1)
            elif pos == first and s[first : first + 5] == "SUGAR":
                nxt = ("X", "S", 1)
            elif s[pos : pos + 2] == "SH":
                if s[pos + 1 : pos + 5] in ("HEIM", "HOEK", "HOLM", "HOLZ"):
                    nxt = ("S", 2)
                else:
                    nxt = ("X", 2)
            elif s[pos : pos + 3] in ("SIO", "SIA") or s[pos : pos + 4] == "SIAN":
                if not slavo_germanic:
                    nxt = ("S", "X", 3)
                else:
                    nxt = ("S", 3)
            elif (pos == first and s[pos + 1] in ("M", "N", "L", "W")) or s[
                pos + 1
            ] == "Z":
                nxt = ("S", "X")
                nxt = nxt + ((2,) if s[pos + 1] == "Z" else (1,))
            elif s[pos : pos + 2] == "SC":
                if s[pos + 2] == "H":
                    if s[pos + 3 : pos + 5] in ("OO", "ER", "EN", "UY", "ED", "EM"):
                        if s[pos + 3 : pos + 5] in ("ER", "EN"):
                            nxt = ("X", "SK", 3)
                        else:
                            nxt = ("SK", 3)
                    elif pos == first and s[first + 3] not in _VOWELS and s[
                        first + 3
                    ] != "W":
                        nxt = ("X", "S", 3)
                    else:
                        nxt = ("X", 3)
                elif s[pos + 2] in ("I", "E", "Y"):
                    nxt = ("S", 3)
                else:
                    nxt = ("SK", 3)
            elif pos == last and s[pos - 2 : pos] in ("AI", "OI"):
                nxt = (None, "S", 1)
            else:
                nxt = ("S",)
                nxt = nxt + ((2,) if s[pos + 1] in ("S", "Z") else (1,))
        elif ch == "T":
            if s[pos : pos + 4] == "TION":
                nxt = ("X", 3)
            elif s[pos : pos + 3] in ("TIA", "TCH"):
                nxt = ("X", 3)
            elif s[pos : pos + 2] == "TH" or s[pos : pos + 3] == "TTH":
                if (
                    s[pos + 2 : pos + 4] in ("OM", "AM")
                    or s[first : first + 4] in ("VON ", "VAN ")
                    or s[first : first + 3] == "SCH"
                ):
                    nxt = ("T", 2)
                else:
                    nxt = ("0", "T", 2)
            elif s[pos + 1] in ("T", "D"):
                nxt = ("T", 2)
            else:
                nxt = ("T", 1)
        elif ch == "V":
            nxt = ("F", 2) if s[pos + 1] == "V" else ("F", 1)
        elif ch == "W":
            if s[pos : pos + 2] == "WR":
                nxt = ("R", 2)
            elif pos == first and (s[pos + 1] in _VOWELS or s[pos : pos + 2] == "WH"):
                if s[pos + 1] in _VOWELS:  # Wasserman matches Vasserman
                    nxt = ("A", "F", 1)
                else:
                    nxt = ("A", 1)
            elif (
                (pos == last and s[pos - 1] in _VOWELS)
                or s[pos - 1 : pos + 5] in ("EWSKI", "EWSKY", "OWSKI", "OWSKY")
                or s[first : first + 3] == "SCH"
            ):
                nxt = (None, "F", 1)
            elif s[pos : pos + 4] in ("WICZ", "WITZ"):
                nxt = ("TS", "FX", 4)
            else:
                nxt = (None, 1)
        elif ch == "X":
            if pos == last and (
                s[pos - 3 : pos] in ("IAU", "EAU") or s[pos - 2 : pos] in ("AU", "OU")
            ):
                nxt = (None,)  # French final X, e.g. 'breaux'
            else:
                nxt = ("KS",)
            nxt = nxt + ((2,) if s[pos + 1] in ("C", "X") else (1,))
        elif ch == "Z":
            if s[pos + 1] == "H":
                nxt = ("J",)
            elif s[pos + 1 : pos + 3] in ("ZO", "ZI", "ZA") or (
                slavo_germanic and pos > first and s[pos - 1] != "T"
            ):
                nxt = ("S", "TS")
            else:
                nxt = ("S",)
            nxt = nxt + ((2,) if s[pos + 1] == "Z" else (1,))

        if len(nxt) == 2:
            if nxt[0]:
                pri += nxt[0]
                sec += nxt[0]
            pos += nxt[1]
        else:
            if nxt[0]:
                pri += nxt[0]
            if nxt[1]:
                sec += nxt[1]
            pos += nxt[2]

    if pri == sec:
        return pri, None
    return pri, sec
