#!/usr/bin/env python3
"""Writes a synthetic set with the M19 rarity layout (265 cards).

Names and strengths are made up; supply a real ratings file for actual M19 work.
"""
import argparse
import json
import random

LAYOUT = [("mythic", 16), ("rare", 53), ("uncommon", 80), ("common", 111), ("basic", 5)]
STRENGTH = {"mythic": (3.0, 5.0), "rare": (2.5, 4.5), "uncommon": (1.5, 4.0),
            "common": (0.5, 3.5), "basic": (0.0, 0.0)}
BASICS = ["Plains", "Island", "Swamp", "Mountain", "Forest"]


def colors_for(rng, rarity):
    roll = rng.random()
    vec = [0] * 5
    if roll < 0.08:
        return vec
    if roll < (0.80 if rarity == "common" else 0.70):
        vec[rng.randrange(5)] = rng.randint(1, 2)
        return vec
    for c in rng.sample(range(5), 2):
        vec[c] = 1
    return vec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=19)
    ap.add_argument("--code", default="M19")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    cards = []
    for rarity, count in LAYOUT:
        for k in range(count):
            if rarity == "basic":
                vec = [0] * 5
                cards.append({"name": BASICS[k], "rarity": rarity, "colors": vec, "strength": 0.0})
                continue
            lo, hi = STRENGTH[rarity]
            cards.append({
                "name": f"{args.code} {rarity.capitalize()} {k + 1:03d}",
                "rarity": rarity,
                "colors": colors_for(rng, rarity),
                "strength": round(rng.uniform(lo, hi) * 2) / 2,
            })
    with open(args.out, "w", encoding="utf-8") as f:
        rows = ",\n".join("  " + json.dumps(c) for c in cards)
        f.write('{"code": %s, "cards": [\n%s\n]}\n' % (json.dumps(args.code), rows))


if __name__ == "__main__":
    main()
