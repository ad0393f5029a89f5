"""Porter suffix-stripping stemmer.

Implements the original algorithm definition (steps 1a through 5b) without
the later implementer departures: step 2 maps "abli" to "able" and has no
"logi" rule, and short words are not special-cased. Within a step the rule
with the longest matching suffix is selected; if its condition fails no
other rule of that step fires.
"""

import re

_ASCII_WORD = re.compile(r"[a-z]+\Z")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in "aeiou":
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences: [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(stem: str) -> bool:
    return (len(stem) >= 2 and stem[-1] == stem[-2]
            and _is_consonant(stem, len(stem) - 1))


def _ends_cvc(stem: str) -> bool:
    """Stem ends consonant-vowel-consonant, final consonant not w, x or y."""
    if len(stem) < 3:
        return False
    n = len(stem)
    if (_is_consonant(stem, n - 1) and not _is_consonant(stem, n - 2)
            and _is_consonant(stem, n - 3)):
        return stem[-1] not in "wxy"
    return False


def _longest_suffix(word: str, suffixes) -> str | None:
    best = None
    for s in suffixes:
        if word.endswith(s) and (best is None or len(s) > len(best)):
            best = s
    return best


def _step1a(word: str) -> str:
    suffix = _longest_suffix(word, ("sses", "ies", "ss", "s"))
    if suffix == "sses":
        return word[:-2]
    if suffix == "ies":
        return word[:-2]
    if suffix == "s":
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    suffix = _longest_suffix(word, ("eed", "ed", "ing"))
    if suffix == "eed":
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    if suffix is None:
        return word
    stem = word[: -len(suffix)]
    if not _contains_vowel(stem):
        return word
    # ed/ing removed: tidy the exposed stem
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_STEP2_RULES = {
    "ational": "ate", "tional": "tion",
    "enci": "ence", "anci": "ance",
    "izer": "ize",
    "abli": "able", "alli": "al", "entli": "ent", "eli": "e", "ousli": "ous",
    "ization": "ize", "ation": "ate", "ator": "ate",
    "alism": "al", "iveness": "ive", "fulness": "ful", "ousness": "ous",
    "aliti": "al", "iviti": "ive", "biliti": "ble",
}

_STEP3_RULES = {
    "icate": "ic", "ative": "", "alize": "al",
    "iciti": "ic", "ical": "ic", "ful": "", "ness": "",
}

_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant",
    "ement", "ment", "ent", "ion", "ou", "ism", "ate", "iti",
    "ous", "ive", "ize",
)


def _replace_if_m_positive(word: str, rules: dict) -> str:
    suffix = _longest_suffix(word, rules)
    if suffix is None:
        return word
    stem = word[: -len(suffix)]
    if _measure(stem) > 0:
        return stem + rules[suffix]
    return word


def _step4(word: str) -> str:
    suffix = _longest_suffix(word, _STEP4_SUFFIXES)
    if suffix is None:
        return word
    stem = word[: -len(suffix)]
    if _measure(stem) <= 1:
        return word
    if suffix == "ion" and not stem.endswith(("s", "t")):
        return word
    return stem


def _step5a(word: str) -> str:
    if not word.endswith("e"):
        return word
    stem = word[:-1]
    m = _measure(stem)
    if m > 1 or (m == 1 and not _ends_cvc(stem)):
        return stem
    return word


def _step5b(word: str) -> str:
    if (word.endswith("ll") and _measure(word[:-1]) > 1):
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Stem one token.

    Only lowercase ASCII words are stemmed; anything else (hashtags,
    mentions, emoticons, numbers, accented words) passes through unchanged.
    """
    word = word.lower()
    if not _ASCII_WORD.match(word):
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _replace_if_m_positive(word, _STEP2_RULES)
    word = _replace_if_m_positive(word, _STEP3_RULES)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word
