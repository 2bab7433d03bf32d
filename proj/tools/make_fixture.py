#!/usr/bin/env python3
"""Generate the in-repo newsgroup-style fixture corpus and its embedding file.

The corpus has 2,000 documents spread over the 20 Usenet newsgroup themes.
Each document mixes words of its own group, some words of a sibling group in
the same hierarchy (comp.*, rec.*, sci.*, talk.*, religion), a Zipfian
background vocabulary, stopwords, numbers and punctuation.

Embeddings are 384-dimensional, built like a bag-of-word-vectors sentence
encoder: every word owns a fixed random vector (theme words carry a shared
group component drawn from a low-dimensional subspace), a document vector is the mean over its words, and
rows are L2-normalised. Output is written in the EMB1 format.

Usage: make_fixture.py [--out-dir fixtures] [--seed 20240101]
"""

import argparse
import json
import struct
import zlib
from pathlib import Path

import numpy as np

GROUPS = {
    "alt.atheism": "atheist atheism belief god morality evidence religion existence bible argument faith "
    "theism secular reason claim objective moral truth skeptic burden proof islam christian "
    "prophet scripture dogma doctrine philosophy logic fallacy universe creator",
    "comp.graphics": "graphics image polygon render rendering pixel texture shading algorithm format jpeg "
    "gif tiff bitmap raytracer vertex animation color palette resolution mesh surface vector "
    "viewer conversion library scanline triangle",
    "comp.os.ms-windows.misc": "windows dos driver microsoft install setup icon desktop ini font "
    "printer memory swap manager program file directory crash version upgrade utility config boot "
    "display menu application",
    "comp.sys.ibm.pc.hardware": "motherboard ide scsi controller drive bios jumper floppy cable "
    "chip card isa vlb bus cache modem port serial disk hard slot cpu ram simm pentium "
    "processor jumpers",
    "comp.sys.mac.hardware": "mac apple quadra centris powerbook monitor macintosh lc iisi nubus "
    "simms vram duo adb keyboard trackball powermac upgrade rom performa clock speed logic "
    "board accelerator",
    "comp.windows.x": "xterm motif widget server window client xlib toolkit openwindows display "
    "xview colormap resource event callback compile library sun sparc app openlook font "
    "manager twm application",
    "misc.forsale": "sale offer shipping condition sell price asking obo brand new included "
    "original box best interested email excellent used cheap selling buyer paid items "
    "manual warranty firm",
    "rec.autos": "car cars engine dealer ford toyota honda mileage oil transmission brake "
    "tires wheel driving model sedan mph gas mustang suspension speed highway diesel "
    "clutch insurance",
    "rec.motorcycles": "bike bikes motorcycle riding rider helmet dod ride honda yamaha harley "
    "bmw countersteering lane gear throttle leather passenger tank seat motorcyclist "
    "road wheelie kawasaki",
    "rec.sport.baseball": "baseball pitcher season game team hitter runs inning league braves "
    "cubs yankees batting pitching catcher hit player fans stadium games average sox "
    "mets rookie outfield",
    "rec.sport.hockey": "hockey nhl team game season playoff goal goalie puck leafs penguins "
    "rangers players period ice coach wings bruins devils islanders cup stanley scoring "
    "canadiens",
    "sci.crypt": "encryption clipper chip key escrow algorithm nsa government privacy secure "
    "crypto cipher des pgp wiretap security keys public secret phone decrypt rsa "
    "cryptography protocol",
    "sci.electronics": "circuit voltage power current amp resistor battery signal wire ground "
    "capacitor output input transistor frequency radio supply audio amplifier diode "
    "electronics led switch",
    "sci.med": "doctor patient disease treatment medical symptoms pain drug medicine health "
    "cancer diet msg infection therapy clinical physician blood doctors diagnosis study "
    "vitamin migraine",
    "sci.space": "space nasa orbit launch shuttle moon satellite mission earth lunar rocket "
    "spacecraft flight station solar planet mars probe astronaut payload telescope "
    "propulsion jpl",
    "soc.religion.christian": "jesus christ church christian god bible faith prayer scripture "
    "sin lord heaven catholic spirit holy worship gospel salvation apostle biblical "
    "resurrection truth love",
    "talk.politics.guns": "gun guns firearms weapons batf fbi amendment waco crime rifle "
    "handgun militia ban criminals control federal shooting compound police koresh "
    "assault violence",
    "talk.politics.mideast": "israel israeli arab jews palestinian armenian turkish armenians "
    "turkey arabs genocide lebanon jewish muslim occupied territories villages war "
    "palestine soviet azerbaijan",
    "talk.politics.misc": "government president clinton tax taxes congress policy political "
    "law rights public jobs health economy federal vote bill administration "
    "homosexual liberal state",
    "talk.religion.misc": "religion god morality jesus christian cult belief moral truth "
    "koresh bible objective spiritual church divine biblical sacred faith prophecy "
    "mormon absolute revelation",
}

HIERARCHY = {
    "comp": ["comp.graphics", "comp.os.ms-windows.misc", "comp.sys.ibm.pc.hardware",
             "comp.sys.mac.hardware", "comp.windows.x"],
    "rec": ["rec.autos", "rec.motorcycles", "rec.sport.baseball", "rec.sport.hockey"],
    "sci": ["sci.crypt", "sci.electronics", "sci.med", "sci.space"],
    "talk": ["talk.politics.guns", "talk.politics.mideast", "talk.politics.misc"],
    "religion": ["alt.atheism", "soc.religion.christian", "talk.religion.misc"],
    "misc": ["misc.forsale"],
}

BACKGROUND = (
    "people time think know good like just make way year work thing point look problem question "
    "said post read help need long right little world fact really sure course different number "
    "case find group information line article mean used new old state life idea true course "
    "start reason part real kind hand believe thanks today write interesting mail week tell "
    "example sort person order result heard try change understand months experience small large "
    "mind open hope agree similar actually simply probably certainly discussion answer wrong "
    "lot place important level matter local thought days opinion support told area based "
    "available possible following single current getting making taking given yes rest "
    "source send list net news reply original note quote text book paper report subject "
    "response issue deal view power history general free special set easy hard clear simple "
    "recently couple friend family home city country money pay cost high low early late final "
    "major minor common usual normal basic quick slow short big early second third "
    "answers comments message messages posting posted reading writing asked asking "
    "wondering looking trying working seen sent known called"
).split()

STOPS = ("the of and to a in is it that for on this with as be are was have not you i but "
         "or they at by from he we an if his about there all one can so would what which will "
         "their has my more do any some no me them other were been its than also only into").split()

SENDER_HOSTS = ["cs.cmu.edu", "netcom.com", "mit.edu", "uiuc.edu", "austin.ibm.com", "sun.com",
                "harvard.edu", "cco.caltech.edu", "uwm.edu", "ucsd.edu"]


def zipf_probs(n, s, rng):
    ranks = np.arange(1, n + 1, dtype=float)
    p = ranks ** (-s)
    rng.shuffle(p)
    return p / p.sum()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    ap.add_argument("--seed", type=int, default=20240101)
    ap.add_argument("--docs-per-group", type=int, default=100)
    ap.add_argument("--dim", type=int, default=384)
    ap.add_argument("--latent", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    groups = list(GROUPS)
    words = {g: GROUPS[g].split() for g in groups}
    parent = {g: h for h, gs in HIERARCHY.items() for g in gs}
    word_probs = {g: zipf_probs(len(words[g]), 0.9, rng) for g in groups}
    bg_probs = zipf_probs(len(BACKGROUND), 0.9, rng)

    # Word vectors: theme words share their group direction, plus a private part.
    dim = args.dim
    def unit(v):
        return v / np.linalg.norm(v)
    # Group directions live in a low-dimensional semantic subspace, as in the
    # anisotropic spaces of real sentence encoders.
    basis, _ = np.linalg.qr(rng.standard_normal((dim, args.latent)))
    hier_dir = {h: unit(rng.standard_normal(args.latent)) for h in HIERARCHY}
    group_dir = {g: unit(basis @ unit(0.35 * hier_dir[parent[g]] + unit(rng.standard_normal(args.latent))))
                 for g in groups}
    vocab = sorted(set(BACKGROUND) | {w for g in groups for w in words[g]} | set(STOPS))
    vec = {w: unit(rng.standard_normal(dim)) for w in vocab}
    owners = {}
    for g in groups:
        for w in words[g]:
            owners.setdefault(w, []).append(g)
    for w, gs in owners.items():
        shared = unit(sum(group_dir[g] for g in gs))
        vec[w] = unit(0.8 * shared + 0.6 * vec[w])

    docs = []
    embeddings = []
    doc_index = 0
    for rep in range(args.docs_per_group):
        for g in groups:
            siblings = [s for s in HIERARCHY[parent[g]] if s != g] or [g]
            sibling = siblings[rng.integers(len(siblings))]
            length = int(np.clip(rng.lognormal(mean=4.7, sigma=0.45), 40, 400))
            own_share = rng.uniform(0.16, 0.34)
            sib_share = rng.uniform(0.02, 0.08)
            stop_share = 0.3
            tokens = []
            content = []
            for _ in range(length):
                u = rng.random()
                if u < own_share:
                    w = words[g][rng.choice(len(words[g]), p=word_probs[g])]
                elif u < own_share + sib_share:
                    w = words[sibling][rng.choice(len(words[sibling]), p=word_probs[sibling])]
                elif u < own_share + sib_share + stop_share:
                    w = STOPS[rng.integers(len(STOPS))]
                else:
                    w = BACKGROUND[rng.choice(len(BACKGROUND), p=bg_probs)]
                tokens.append(w)
                if w not in STOPS:
                    content.append(w)
            # Surface noise the preprocessor must strip: case, punctuation, numbers.
            text_parts = []
            for i, w in enumerate(tokens):
                r = rng.random()
                if i == 0 or r < 0.06:
                    w = w.capitalize()
                if r > 0.97:
                    w = w + rng.choice([",", ".", "!", "?", ";", ":"])
                if rng.random() < 0.015:
                    text_parts.append(str(int(rng.integers(1, 2000))))
                text_parts.append(w)
            subject_words = [words[g][rng.choice(len(words[g]), p=word_probs[g])] for _ in range(3)]
            user = f"user{int(rng.integers(1000, 9999))}"
            header = (f"From: {user}@{SENDER_HOSTS[rng.integers(len(SENDER_HOSTS))]}\n"
                      f"Subject: Re: {' '.join(subject_words)}\n\n")
            text = header + " ".join(text_parts)
            doc_id = f"ng-{doc_index:05d}"
            docs.append({"id": doc_id, "group": g, "text": text})

            e = np.mean([vec[w] for w in content + subject_words], axis=0)
            e = e + 0.02 * rng.standard_normal(dim)
            embeddings.append(unit(e))
            doc_index += 1

    with open(out / "20ng_subset.jsonl", "w", encoding="utf-8") as f:
        for d in docs:
            f.write(json.dumps(d, ensure_ascii=False) + "\n")

    mat = np.asarray(embeddings, dtype="<f4")
    payload = mat.tobytes(order="C")
    header = b"EMB1" + struct.pack("<IQIB3x", 1, mat.shape[0], mat.shape[1], 1)
    emb_path = out / "20ng_minilm384.emb"
    with open(emb_path, "wb") as f:
        f.write(header)
        f.write(payload)
        f.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))
    with open(str(emb_path) + ".ids.jsonl", "w", encoding="utf-8") as f:
        for d in docs:
            f.write(json.dumps({"id": d["id"]}) + "\n")

    row0 = mat[0].tobytes()
    print(f"docs={len(docs)} dim={mat.shape[1]} row0_crc32={zlib.crc32(row0) & 0xFFFFFFFF:08x} "
          f"payload_crc32={zlib.crc32(payload) & 0xFFFFFFFF:08x}")


if __name__ == "__main__":
    main()
