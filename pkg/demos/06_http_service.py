"""HTTP service walkthrough: index to disk, serve, query over multipart.

Builds a snapshot, loads it the way `metatune serve` does, and exercises
the three endpoints in-process (no sockets needed), including an audio
upload. A real deployment would run `metatune serve <index-dir> --port P`.
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from metatune.engine import SearchEngine
from metatune.server import create_app
from metatune.storage import load_indexes, persist_indexes, write_corpus
from metatune.synth import audio_lookup, make_corpus
from metatune.wavio import encode_wav

records, audio = make_corpus(8, seed=77)
engine = SearchEngine.build(records, audio_for=audio_lookup(audio))

with tempfile.TemporaryDirectory() as tmp:
    snapshot = Path(tmp) / "snapshot"
    persist_indexes(engine, snapshot)
    served = load_indexes(snapshot)
    client = TestClient(create_app(served))

    print("GET /health ->", client.get("/health").json())
    print("GET /songs/0 ->", {k: v for k, v in client.get("/songs/0").json().items()
                              if k != "lyrics"})

    ##########################################################################
    # Text query: the query part is a JSON object in multipart form data.

    line = records[2].lyrics.splitlines()[1]
    response = client.post("/search", data={"query": json.dumps({"lyrics": line, "limit": 3})})
    print("\nPOST /search (lyrics):")
    for hit in response.json()["results"]:
        print(f"  [{hit['final_score']:.3f}] #{hit['song']['id']} {hit['song']['title']}")

    ##########################################################################
    # Audio query: WAV bytes travel as a second multipart part.

    wav = encode_wav(audio[6].samples[: 3 * 5512], 5512)
    response = client.post(
        "/search",
        data={"query": json.dumps({"limit": 3, "after": "1950"})},
        files={"audio": ("clip.wav", wav, "audio/wav")},
    )
    print("\nPOST /search (audio upload):")
    for hit in response.json()["results"]:
        print(f"  [{hit['final_score']:.3f}] #{hit['song']['id']} {hit['song']['title']}")

    ##########################################################################
    # The HTTP path and the library path return identical results.

    from metatune.model import Query

    direct = served.execute(Query(lyrics=line), limit=3).to_dict(include_timing=False)
    http = client.post("/search", data={"query": json.dumps({"lyrics": line, "limit": 3})}).json()
    print("\nHTTP equals direct execution:", http["results"] == direct["results"])
