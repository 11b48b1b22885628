"""Meta search walkthrough: independent per-field searches, weighted fusion.

The motivating combined query: an audio snippet of an unknown song plus
the knowledge that it was released before some year, in one search. Also
shows weight overrides and the per-field score breakdown.
"""

from metatune.engine import SearchEngine
from metatune.model import FieldKind, PcmAudio, Query
from metatune.synth import audio_lookup, make_corpus

records, audio = make_corpus(12, seed=21)
engine = SearchEngine.build(records, audio_for=audio_lookup(audio))

clip_song = 5
clip = PcmAudio(audio[clip_song].samples[0 : 3 * 5512], 5512)
print(f"clip comes from song {clip_song}: {records[clip_song].title!r} "
      f"({records[clip_song].release_date})")


def show(title: str, response) -> None:
    print(f"\n{title}")
    print("  weights:", {f.value: round(w, 3) for f, w in response.applied_weights.items()})
    for hit in response.results[:4]:
        breakdown = {f.value: round(s, 3) for f, s in hit.breakdown.items() if s > 0}
        print(f"  [{hit.final_score:.3f}] #{hit.song.id} {hit.song.title} "
              f"({hit.song.release_date.year}) {breakdown}")


##############################################################################
# Audio alone: the clip's song wins with similarity 1.0.

show("audio only", engine.execute(Query(audio=clip)))

##############################################################################
# Audio + artist text: two independent searches fused by Eq.-style weighted
# sum (audio weighs 4, artist 2, renormalized to sum 1).

some_artist = records[8].artist
show(f"audio + artist {some_artist!r}",
     engine.execute(Query(audio=clip, artist=some_artist)))

##############################################################################
# Add an exclusive date bound that the clip's song fails: it vanishes from
# the final ranking even though its audio similarity is perfect — the
# filter runs after the merge, as the last step.

bound = records[clip_song].release_date
show(f"audio + artist, released before {bound}",
     engine.execute(Query(audio=clip, artist=some_artist, released_before=bound)))

##############################################################################
# Weight overrides shift the balance between fields.

show("same, but audio downweighted to 1:9",
     engine.execute(Query(
         audio=clip,
         artist=some_artist,
         weight_overrides={FieldKind.AUDIO: 1.0, FieldKind.ARTIST: 9.0},
     )))
