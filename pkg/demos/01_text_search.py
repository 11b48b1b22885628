"""Text search walkthrough: tokenization, n-gram indexing, tf-idf ranking.

Shows how field profiles change tokenization (lyrics drop stop words,
titles keep them), what the inverted index holds, and why a repeated
chorus line boosts a song's rank.
"""

from metatune.model import FieldKind
from metatune.textindex import TextIndex, default_profiles, ngrams, tokenize

profiles = default_profiles()
lyrics_profile = profiles[FieldKind.LYRICS]
title_profile = profiles[FieldKind.TITLE]

##############################################################################
# Tokenization is profile-dependent: stop words matter in titles.

print("lyrics profile:", tokenize("The Wall", lyrics_profile))
print("title profile: ", tokenize("The Wall", title_profile))
print("apostrophes split, 'stop' is in the stop list:", tokenize("don't stop!", lyrics_profile))

##############################################################################
# Terms are tokens plus every contiguous n-gram up to the profile's maximum.

tokens = tokenize("river ember lantern", lyrics_profile)
print("\nterms for ngram_max=2:", ngrams(tokens, 2))

##############################################################################
# Build a tiny lyrics index. Document 0 repeats its chorus three times,
# document 1 mentions the same word once.

index = TextIndex(lyrics_profile)
index.index_document(0, "golden river golden river golden river carries me")
index.index_document(1, "the river was quiet that night")
index.index_document(2, "ember and lantern light")
index.freeze()

print("\nposting list for 'river':", index.postings["river"])
print("posting list for 'golden river':", index.postings.get("golden river"))

##############################################################################
# tf-idf: the chorus repetition gives document 0 a higher score, and the
# bigram "golden river" only matches document 0 at all.

for query in ("river", "golden river"):
    results = index.search(query, limit=5)
    print(f"\nquery {query!r}:")
    for song, score in results:
        print(f"  song {song}: score {score:.4f}")
