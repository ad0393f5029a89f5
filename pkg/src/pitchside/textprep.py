"""Tweet text preparation: tokenizing, POS filtering, stemming, n-gram extraction.

The POS source is pluggable. When a tweet record carries pre-computed
(token, tag) pairs from an external tagger they are trusted; otherwise a
small built-in heuristic tagger assigns tags. Filtering can also be
disabled entirely, in which case every token survives.
"""

import enum
import re
from collections import Counter
from dataclasses import replace

from . import porter
from .ingest import MatchSideDocument


class Tag(enum.Enum):
    ADJECTIVE = "adjective"
    VERB = "verb"
    NOUN = "noun"
    ADVERB = "adverb"
    INTERJECTION = "interjection"
    EMOTICON = "emoticon"
    POSSESSIVE = "possessive"
    OTHER = "other"


#: Tags whose tokens are kept as feature material.
DEFAULT_KEEP_TAGS = frozenset(Tag) - {Tag.OTHER}

_EMOTICON_PATTERN = r"(?:[<>]?[:;=8][\-o\*']?[\)\]\(\[dDpP/\\\}\{@\|]|<3)"

_EMOTICON_RE = re.compile(_EMOTICON_PATTERN + r"\Z")

_TOKEN_RE = re.compile(
    r"(?:https?://\S+|www\.\S+)"          # URLs are dropped
    r"|(?P<emo>" + _EMOTICON_PATTERN + r")"
    r"|(?P<tag>[#@]\w+)"                  # hashtags and mentions stay whole
    r"|(?P<word>\w+(?:'\w+)*)"
)


def tokenize(text: str) -> list:
    """Split raw tweet text into tokens.

    Hashtags, @-mentions and emoticons are kept as single tokens, URLs are
    dropped, everything is lowercased except emoticon surfaces. Never
    produces empty tokens.
    """
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        if match.lastgroup == "emo":
            tokens.append(match.group())
        elif match.lastgroup in ("tag", "word"):
            tokens.append(match.group().lower())
    return tokens


# Closed-class words carry no outcome-related content; tagged OTHER so the
# default filter removes them.
_FUNCTION_WORDS = frozenset("""
    a an the this that these those some any each every either neither
    i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs myself yourself himself herself itself
    ourselves themselves who whom whose which what
    and or but nor so yet for if while because although though unless
    until when where whether than as
    in on at by to from of with without about against between into
    through during before after above below under over again further
    then once here there all both few more most other such only own same
    is am are was were be been being have has had having do does did
    doing will would shall should may might must can could
    not don't doesn't didn't isn't aren't wasn't weren't won't wouldn't
    can't couldn't shouldn't mustn't it's that's there's
""".split())

_INTERJECTIONS = frozenset(
    "wow yay ugh lol omg oh ah hey ouch hmm yeah yep nope woo hooray"
    " boo oops phew huh wooo yesss argh".split()
)

_ADJ_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "ical", "ish", "less", "est")


def tag_token(token: str) -> Tag:
    """Heuristic tag assignment for a single token."""
    if _EMOTICON_RE.match(token):
        return Tag.EMOTICON
    if token.startswith(("#", "@")):
        return Tag.NOUN
    if token.endswith("'s"):
        return Tag.POSSESSIVE
    if token in _INTERJECTIONS:
        return Tag.INTERJECTION
    if token in _FUNCTION_WORDS:
        return Tag.OTHER
    if token.isdigit():
        return Tag.OTHER
    if token.endswith("ly") and len(token) > 3:
        return Tag.ADVERB
    if token.endswith(("ing", "ed")) and len(token) >= 5:
        return Tag.VERB
    if token.endswith(_ADJ_SUFFIXES) and len(token) >= 5:
        return Tag.ADJECTIVE
    return Tag.NOUN


# External tagger labels are accepted by full tag name (any case) or by the
# one-letter social-media tagset codes; anything unknown maps to OTHER.
_LETTER_TAGS = {
    "n": Tag.NOUN, "^": Tag.NOUN, "m": Tag.NOUN, "#": Tag.NOUN, "@": Tag.NOUN,
    "v": Tag.VERB, "t": Tag.VERB, "l": Tag.VERB,
    "a": Tag.ADJECTIVE, "r": Tag.ADVERB, "!": Tag.INTERJECTION,
    "e": Tag.EMOTICON, "s": Tag.POSSESSIVE, "z": Tag.POSSESSIVE,
}


def parse_tag(label) -> Tag:
    if isinstance(label, Tag):
        return label
    name = str(label).strip().lower()
    try:
        return Tag(name)
    except ValueError:
        pass
    return _LETTER_TAGS.get(name, Tag.OTHER)


def pos_filter(tagged_tokens, allowed) -> list:
    """Keep the order-preserving subsequence whose tags are allowed."""
    return [surface for surface, tag in tagged_tokens if tag in allowed]


def stem_token(token: str) -> str:
    """Porter-stem alphabetic tokens; all others pass through unchanged.

    A stem that collapses to the empty string (only possible for
    degenerate inputs like "s") leaves the token as-is.
    """
    if token.isalpha():
        stemmed = porter.stem(token)
        return stemmed if stemmed else token
    return token


def prepare_tokens(text, tags=None, keep_tags=DEFAULT_KEEP_TAGS,
                   pos_filtering=True, drop_tokens=frozenset()) -> list:
    """Full single-tweet preparation: tokenize/tag, filter, drop, stem.

    ``tags`` is an optional pre-tagged (token, label) sequence from an
    external tagger; when present it replaces the built-in tokenizer and
    tagger. ``drop_tokens`` removes exact surfaces (e.g. the team's own
    lexicon hashtags) after filtering.
    """
    if tags is not None:
        tagged = [(str(tok).lower(), parse_tag(label)) for tok, label in tags]
    else:
        tokens = tokenize(text)
        tagged = [(tok, tag_token(tok)) for tok in tokens]
    if pos_filtering:
        kept = pos_filter(tagged, keep_tags)
    else:
        kept = [surface for surface, _ in tagged]
    if drop_tokens:
        kept = [tok for tok in kept if tok not in drop_tokens]
    return [stem_token(tok) for tok in kept]


def prepare_document(doc: MatchSideDocument, lexicon=None,
                     keep_tags=DEFAULT_KEEP_TAGS, pos_filtering=True,
                     drop_own_hashtags=True) -> MatchSideDocument:
    """Return a copy of the document with its token streams populated.

    With ``drop_own_hashtags`` the team's own lexicon hashtags are removed
    so features cannot trivially encode team identity.
    """
    drop = frozenset()
    if drop_own_hashtags and lexicon is not None:
        drop = lexicon.teams.get(doc.team, frozenset())
    streams = tuple(
        tuple(prepare_tokens(text, tags=tags, keep_tags=keep_tags,
                             pos_filtering=pos_filtering, drop_tokens=drop))
        for _, text, tags in doc.tweets
    )
    return replace(doc, tokens=streams)


def extract_ngrams(doc: MatchSideDocument, n: int) -> Counter:
    """Count n-grams over a prepared document.

    Bigrams never cross tweet boundaries; counts are summed over all
    tweets of the document.
    """
    if n not in (1, 2):
        raise ValueError(f"n-gram order must be 1 or 2, got {n}")
    if doc.tokens is None:
        raise ValueError(f"document {doc.match_id}/{doc.side.value} has no token streams"
                         " (run prepare_document first)")
    counts = Counter()
    for stream in doc.tokens:
        for i in range(len(stream) - n + 1):
            counts[tuple(stream[i:i + n])] += 1
    return counts
