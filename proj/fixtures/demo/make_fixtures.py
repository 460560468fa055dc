#!/usr/bin/env python3
# Copyright 2026 The sprkit Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the demo corpus: human texts, index, config and replay responses.

Paraphrases come from deterministic word-level edits of the source text, so
the output is identical on every run.
"""

import hashlib
import json
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent

PRIMARY = {
    "ch01": """The lighthouse on the northern cape was built after three ships were lost in a single winter.
Its keeper lived alone in a stone cottage at the foot of the tower, trimming the wick every evening and
polishing the great lens every morning. Supplies arrived once a month by boat when the sea allowed it,
and in bad seasons the keeper rationed lamp oil before rationing food. Visitors rarely came, but the
logbook records a botanist who stayed for a week to study the salt tolerant grasses on the cliffs. The
keeper wrote that the botanist talked more in seven days than anyone had talked in seven years. When the
light was finally automated, the cottage was turned into a small museum about the coast and its wrecks.""",
    "ch02": """Bread begins with flour, water, salt and time, and the last ingredient is the one most bakers
forget. A slow rise lets the yeast produce flavour as well as gas, so a dough left overnight in a cool
room tastes richer than one rushed in a warm kitchen. Kneading builds the gluten network that traps the
gas, but too much kneading makes a tight loaf with a small crumb. Many home bakers now fold the dough a
few times during the first rise instead of kneading it for ten minutes. The oven matters as much as the
dough: a hot stone and a burst of steam give the crust time to stretch before it sets. A loaf should
cool completely before it is cut, because the inside is still cooking when it leaves the oven.""",
    "ch03": """Rivers carry more than water from the mountains to the sea. They move sand, gravel and whole
trees, and during floods they can shift boulders the size of small cars. Where a river slows down, for
example on the inside of a bend, it drops the heaviest material first and the finest silt last. Over
centuries these deposits build wide plains that farmers value for their fertile soil. The same process
explains why harbours at river mouths need constant dredging, since every storm upstream sends another
load of mud toward the coast. Engineers who straighten a river to speed up shipping often find that the
faster water cuts deeper into its bed and undermines the bridges built across it.""",
    "ch04": """A beehive in summer holds tens of thousands of workers, a few hundred drones and a single
queen. The workers change jobs as they age, starting as cleaners and nurses inside the hive and ending as
foragers that fly several kilometres to find nectar. A forager that discovers a good patch of flowers
returns and performs a dance on the comb, and the angle and length of the dance tell other bees where to
fly. Honey is nectar that the bees have thickened by fanning their wings over open cells until most of the
water evaporates. Beekeepers take only the surplus, leaving enough stores for the colony to survive the
winter, when the bees cluster together and shiver to keep the queen warm.""",
    "ch05": """Early railway timetables caused a problem that nobody had expected: every town kept its own
local time based on the position of the sun. A train leaving one station at noon could arrive at the next
station at a time that seemed to be before it had departed. Railway companies solved this by running all
their clocks on a single standard time, usually that of the capital. At first many towns resisted and
displayed two clocks on their public buildings, one for local time and one for railway time. Within a
few decades the convenience of a shared clock won, and standard time zones spread from the railways into
law, commerce and daily life across most of the world.""",
    "ch06": """Chess players spend years studying openings, yet most games are decided in the middlegame or
the endgame. An opening only needs to bring the pieces out, control the centre and keep the king safe.
After that the player must make plans, and a plan depends on the pawn structure more than on any single
move. Strong players often say that pawns are the soul of the game, because a pawn cannot move backward
and every pawn move permanently changes the position. In the endgame the king becomes an active piece,
and a single extra pawn can be enough to win if the player knows the basic techniques of promotion.""",
}

CONTROL = {
    "ch01": """After three wrecks in one winter a lighthouse was raised on the northern cape. A single keeper
tended it from a cottage below the tower, cleaning the lens at dawn and trimming the wick at dusk. A boat
brought supplies monthly if the weather permitted. One notable guest was a botanist who spent a week on the
cliffs studying grasses. The building later became a museum of the coast.""",
    "ch02": """Good bread needs flour, water, salt and patience. Long, cool fermentation develops flavour,
while kneading or folding develops gluten that holds the gas. Baking on a hot stone with steam lets the
crust expand before hardening, and the loaf keeps cooking as it cools, so it should rest before slicing.""",
    "ch03": """A river transports sediment as well as water, dropping coarse material where the current slows
and carrying fine silt further. These deposits form fertile floodplains, fill harbours with mud and respond
badly to straightening, which speeds the flow and erodes the riverbed beneath bridges.""",
    "ch04": """A summer colony contains one queen, some drones and many thousands of workers whose duties shift
with age from nursing to foraging. Foragers communicate flower locations through a dance. Bees make honey by
evaporating water from nectar, and keepers harvest only what the colony can spare for winter.""",
    "ch05": """Because each town once kept solar local time, early railway schedules were confusing. Companies
adopted one standard time for all their clocks, towns briefly showed both local and railway time, and
standard time eventually passed into law and everyday use.""",
    "ch06": """Although openings receive much study, games are usually decided later. The opening should develop
pieces, fight for the centre and protect the king; afterwards plans follow the pawn structure, and in the
endgame an active king and one extra pawn can decide the result.""",
}

# Ordered oldest to newest; newer models edit less, so their paraphrases sit
# closer to the source and to each other.
MODELS = [
    {"id": "fake-a", "api_name": "fake-a-2024", "release": "2024-01-15", "cutoff": "2023-06-01",
     "t0": True, "edit_rate": 0.40},
    {"id": "fake-b", "api_name": "fake-b-2025", "release": "2025-02-10", "cutoff": "2024-08-01",
     "t0": True, "edit_rate": 0.25},
    {"id": "fake-c", "api_name": "fake-c-2026", "release": "2026-03-05", "cutoff": "2025-09-01",
     "t0": False, "edit_rate": 0.15},
]

SYNONYMS = {
    "built": "constructed", "lost": "wrecked", "single": "lone", "lived": "dwelt", "alone": "by himself",
    "every": "each", "evening": "night", "morning": "day", "great": "large", "arrived": "came",
    "rarely": "seldom", "small": "little", "finally": "eventually", "begins": "starts", "most": "many",
    "slow": "gradual", "rich": "full", "warm": "heated", "tight": "dense", "few": "several", "hot": "very hot",
    "give": "allow", "completely": "fully", "still": "yet", "carry": "transport", "move": "shift",
    "whole": "entire", "heaviest": "largest", "finest": "lightest", "build": "form", "value": "prize",
    "constant": "regular", "faster": "quicker", "often": "frequently", "holds": "contains", "change": "switch",
    "discovers": "finds", "returns": "comes back", "tell": "show", "thickened": "concentrated",
    "enough": "sufficient", "caused": "created", "expected": "foreseen", "solved": "fixed",
    "usually": "typically", "resisted": "objected", "decades": "generations", "spread": "expanded",
    "spend": "devote", "decided": "settled", "needs": "has", "depends": "relies", "strong": "skilled",
    "permanently": "irreversibly", "active": "busy", "basic": "standard", "problem": "difficulty",
    "nobody": "no one", "control": "dominate", "safe": "protected", "plans": "strategies",
}
FILLERS = ["indeed", "in fact", "notably", "essentially", "generally"]


def paraphrase(text, edit_rate, rng):
    out_sentences = []
    for sentence in text.replace("\n", " ").split(". "):
        words = sentence.split()
        edited = []
        for w in words:
            core = w.strip(".,:;").lower()
            r = rng.random()
            if core in SYNONYMS and r < edit_rate * 2:
                edited.append(SYNONYMS[core] + w[len(w.rstrip('.,:;')):])
            elif r < edit_rate * 0.15:
                edited.append(rng.choice(FILLERS))
                edited.append(w)
            elif r < edit_rate * 0.25 and len(core) <= 3:
                continue
            else:
                edited.append(w)
        if len(edited) > 6 and rng.random() < edit_rate * 0.5:
            cut = rng.randrange(2, len(edited) - 2)
            edited = edited[cut:] + edited[:cut]
        out_sentences.append(" ".join(edited))
    return ". ".join(out_sentences).strip()


def fixture_name(model, temp, rnd, chapter, control=False):
    material = f"{model}\n{temp}\n{rnd}\n{chapter}"
    if control:
        material += "\ncontrol"
    return hashlib.sha256(material.encode()).hexdigest() + ".json"


def seed_of(*parts):
    return int.from_bytes(hashlib.sha256("|".join(map(str, parts)).encode()).digest()[:8], "big")


def main():
    for name, texts in (("primary", PRIMARY), ("control", CONTROL)):
        d = HERE / name
        d.mkdir(exist_ok=True)
        for ch, text in texts.items():
            (d / f"{ch}.txt").write_text(text + "\n")
    index = "".join(f"{ch}\tprimary/{ch}.txt\tcontrol/{ch}.txt\n" for ch in PRIMARY)
    (HERE / "index.tsv").write_text(index)

    responses = HERE / "responses"
    responses.mkdir(exist_ok=True)
    for old in responses.glob("*.json"):
        old.unlink()
    created = 1767225600
    for m in MODELS:
        for temp, rounds in ((0, 3), (1, 5)):
            if temp == 0 and not m["t0"]:
                continue
            for rnd in range(1, rounds + 1):
                for ch, text in PRIMARY.items():
                    # Temperature 0 rounds share most of their randomness.
                    if temp == 0:
                        rng = random.Random(seed_of(m["id"], ch, "t0", rnd if seed_of(ch, rnd) % 4 == 0 else 0))
                    else:
                        rng = random.Random(seed_of(m["id"], ch, "t1", rnd))
                    rate = m["edit_rate"] * (0.6 if temp == 0 else 1.0)
                    created += 7
                    body = {
                        "id": f"chatcmpl-demo-{m['id']}-{temp}-{rnd}-{ch}",
                        "object": "chat.completion",
                        "created": created,
                        "model": m["api_name"],
                        "choices": [{"index": 0, "finish_reason": "stop",
                                     "message": {"role": "assistant", "content": paraphrase(text, rate, rng)}}],
                    }
                    (responses / fixture_name(m["id"], temp, rnd, ch)).write_text(
                        json.dumps(body, indent=2, sort_keys=True) + "\n")

    conf = ["# Demo corpus: six chapters, three fake models, replayed offline.", "[run]",
            "dataset=index.tsv", "fixtures=responses", "mode=replay",
            "models=" + ",".join(m["id"] for m in MODELS), "temps=0,1", "rounds_t0=3", "rounds_t1=5",
            "l_min=3", "l_max=20", "", "[corpus]", "primary_name=primary", "control_name=control",
            "min_words=100", "max_words=2000"]
    for i, m in enumerate(MODELS, 1):
        conf += ["", f"[model.{m['id']}]", f"api_name={m['api_name']}", f"display_name={m['id'].upper()}",
                 f"knowledge_cutoff={m['cutoff']}", f"release={m['release']}",
                 f"supports_temperature_0={'true' if m['t0'] else 'false'}", f"release_order={i}"]
    (HERE / "sprkit.conf").write_text("\n".join(conf) + "\n")


if __name__ == "__main__":
    main()
