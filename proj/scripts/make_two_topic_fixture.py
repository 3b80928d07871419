#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The fnd Authors
"""Regenerates tests/data/two_topic_200.csv.

Two disjoint topic vocabularies plus a shared pool of filler words. Real
articles (label 1) draw from the markets topic, fake ones (label 0) from the
tabloid topic, so every vectorizer sees a linearly separable problem.
"""

import csv
import random
import sys

REAL_TOPIC = """
economy inflation markets treasury bonds yields central banks lending rates
quarterly earnings revenue exports tariffs trade deficit ministry budget
parliament legislation senators committee hearing officials statement reuters
growth forecast investors shares index manufacturing payrolls unemployment
""".split()

FAKE_TOPIC = """
shocking secret exposed celebrity scandal hoax conspiracy aliens miracle cure
insider leaked bombshell outrage viral hidden truth cover elite globalist
explosive unbelievable rumor tabloid hysteria lizard chemtrails psychic
prophecy doomsday cabal sinister wacky bizarre
""".split()

SHARED = """
people said report week government country city president state public
percent million billion year month today news local national world
""".split()


def document(rng, topic):
    length = rng.randint(100, 150)
    words = []
    for _ in range(length):
        pool = topic if rng.random() < 0.7 else SHARED
        words.append(rng.choice(pool))
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def main(path):
    rng = random.Random(20240611)
    rows = []
    for i in range(100):
        rows.append((document(rng, REAL_TOPIC), 1))
        rows.append((document(rng, FAKE_TOPIC), 0))
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["text", "label"])
        writer.writerows(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/two_topic_200.csv")
