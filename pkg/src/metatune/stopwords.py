"""The pinned stop-word list used by lyrics tokenization.

This list is versioned and frozen: changing it changes every lyrics index,
so the snapshot config digest covers a hash of it. It holds common English
function words plus a few imperatives so frequent in choruses that they
carry no identifying signal. Title/artist/album/genre search never removes
stop words (short texts, every word matters).
"""

from __future__ import annotations

import hashlib

STOPWORDS_VERSION = 1

STOPWORDS: frozenset[str] = frozenset(
    """
    a about above after again against all am an and any are as at
    be because been before being below between both but by
    can could did do does doing down during
    each few for from further
    had has have having he her here hers herself him himself his how
    i if in into is it its itself
    just me more most my myself
    no nor not now
    of off on once only or other our ours ourselves out over own
    same she should so some stop such
    than that the their theirs them themselves then there these they this
    those through to too
    under until up upon very
    was we were what when where which while who whom why will with would
    you your yours yourself yourselves
    """.split()
)


def stopwords_digest() -> str:
    """Stable hash of the list contents, folded into the index config digest."""
    joined = "\n".join(sorted(STOPWORDS)) + f"\nversion={STOPWORDS_VERSION}"
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()
