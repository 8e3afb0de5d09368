#!/usr/bin/env python3
"""Regenerates data/toy: a small synthetic stand-in for TED talks, linked
encyclopedia articles and a general-domain corpus.

The "target language" is a fixed one-to-one cipher of the source vocabulary,
so lexicon training, mining and selection have a known right answer.
Output is a pure function of --seed.
"""

import argparse
import pathlib
import random
from xml.sax.saxutils import escape

FUNCTION = ("the a of and to in is that it we you i this for on with was are be "
            "but not so what can have they at as from all one there do by").split()

TED = ("think people world brain story idea talk life children music learn change "
       "amazing really know feel want show imagine dream future design create "
       "simple question answer friend mother father school kids wonder inspire "
       "stage audience laugh share believe happy curious voice heart journey "
       "experiment discover planet ocean science art love fear hope moment").split()

GENERAL = ("government minister agreement committee economic market regulation "
           "article shall member states percent price council parliament bank "
           "treaty budget directive fiscal annual report shareholders quarterly "
           "revenue tariff legislation provision compliance procurement amendment "
           "delegation resolution sanctions inflation securities audit pension "
           "subsidy ministry tribunal ratify clause statutory infrastructure").split()

SYLLABLES = ("ka ro mi tu ne sa vo li pe da zu ri mo ta ko ve ni lu ba so "
             "fe gi ha ju ky la ma nu po qu").split()


def make_cipher(rng, words):
    cipher, used = {}, set(words)
    for w in words:
        while True:
            t = "".join(rng.choice(SYLLABLES) for _ in range(rng.randint(2, 3)))
            if t not in used:
                used.add(t)
                cipher[w] = t
                break
    return cipher


def sentence(rng, content, lo=5, hi=13):
    n = rng.randint(lo, hi)
    words = [rng.choice(FUNCTION) if rng.random() < 0.4 else rng.choice(content) for _ in range(n)]
    if rng.random() < 0.25:
        words.insert(rng.randint(1, len(words)), ",")
    return words + ["."]


def translate(words, cipher):
    return [cipher.get(w, w) for w in words]


def perturb(rng, words, p, pool):
    out = []
    for w in words:
        r = rng.random()
        if r < p / 3:
            continue
        if r < 2 * p / 3:
            out.append(rng.choice(pool))
        else:
            out.append(w)
    for i in range(len(out) - 1):
        if rng.random() < p / 4:
            out[i], out[i + 1] = out[i + 1], out[i]
    return out or [rng.choice(pool)]


def talk_xml(talks):
    lines = ["<?xml version=\"1.0\" encoding=\"UTF-8\"?>", "<xml>"]
    for talk_id, segs in talks:
        lines.append(f"  <talk id=\"{talk_id}\">")
        lines.append(f"    <title>Talk {talk_id} &amp; friends</title>")
        lines.append("    <transcript>")
        for k, seg in enumerate(segs, 1):
            lines.append(f"      <seg id=\"{k}\">{escape(seg)}</seg>")
        lines.append("    </transcript>")
        lines.append("  </talk>")
    lines.append("</xml>")
    return "\n".join(lines) + "\n"


def write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2016)
    ap.add_argument("--out", type=pathlib.Path,
                    default=pathlib.Path(__file__).resolve().parent.parent / "data" / "toy")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    cipher = make_cipher(rng, FUNCTION + TED + GENERAL + [",", "."])
    cipher[","], cipher["."] = ",", "."
    target_pool = [cipher[w] for w in FUNCTION + TED + GENERAL]

    # In-domain parallel talks, with a few pairs the cleaner should drop.
    talks_src, talks_tgt = [], []
    for t in range(12):
        src, tgt = [], []
        for _ in range(25):
            s = sentence(rng, TED)
            src.append(" ".join(s))
            tgt.append(" ".join(translate(s, cipher)))
        if t == 3:
            src.append(src[0]); tgt.append(tgt[0])                    # duplicate
            src.append("yes ."); tgt.append(" ".join(translate(sentence(rng, TED, 12, 14), cipher)) * 2)
            src.append("applause"); tgt.append("")                    # empty side
        talks_src.append((str(1000 + t), src))
        talks_tgt.append((str(1000 + t), tgt))
    write(args.out / "ted" / "train.src.xml", talk_xml(talks_src))
    write(args.out / "ted" / "train.tgt.xml", talk_xml(talks_tgt))

    # Test references and two fixed system outputs of different quality.
    refs, base, ext, docs = [], [], [], []
    for t, talk in enumerate(("2183", "2190", "2204")):
        for _ in range(20):
            r = translate(sentence(rng, TED), cipher)
            refs.append(" ".join(r))
            base.append(" ".join(perturb(rng, r, 0.45, target_pool)))
            ext.append(" ".join(perturb(rng, r, 0.30, target_pool)))
            docs.append(f"{len(docs)}\t{talk}")
    write(args.out / "test" / "ref.txt", "\n".join(refs) + "\n")
    write(args.out / "test" / "baseline.txt", "\n".join(base) + "\n")
    write(args.out / "test" / "extended.txt", "\n".join(ext) + "\n")
    write(args.out / "test" / "docs.tsv", "\n".join(docs) + "\n")

    # General-domain target-language text with planted talk-like sentences.
    general = []
    for i in range(2000):
        content = TED if i % 10 == 7 else GENERAL
        general.append(" ".join(translate(sentence(rng, content), cipher)))
    write(args.out / "general" / "general.txt", "\n".join(general) + "\n")

    # Comparable article pairs: some sentences translated, the rest unrelated.
    manifest, gold = [], []
    mixed = TED + ["1998", "2004", "paris", "tokyo", "unesco"]
    for d in range(20):
        doc = f"article{d:02d}"
        src_lines, tgt_lines, j = [], [], 0
        for i in range(rng.randint(8, 12)):
            s = sentence(rng, mixed)
            src_lines.append(" ".join(s))
            while rng.random() < 0.25:
                tgt_lines.append(" ".join(translate(sentence(rng, mixed), cipher)))
                j += 1
            if rng.random() < 0.6:
                tgt_lines.append(" ".join(perturb(rng, translate(s, cipher), 0.1, target_pool)))
                gold.append(f"{doc}\t{i}\t{j}")
                j += 1
        write(args.out / "wiki" / "src" / f"{doc}.txt", "\n".join(src_lines) + "\n")
        write(args.out / "wiki" / "tgt" / f"{doc}.txt", "\n".join(tgt_lines) + "\n")
        manifest.append(f"src/{doc}.txt\ttgt/{doc}.txt")
    write(args.out / "wiki" / "manifest.tsv", "\n".join(manifest) + "\n")
    write(args.out / "wiki" / "gold.tsv", "\n".join(gold) + "\n")


if __name__ == "__main__":
    main()
