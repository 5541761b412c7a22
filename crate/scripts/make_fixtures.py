#!/usr/bin/env python3
"""Regenerates the test fixtures under crates/core/tests/fixtures.

Output is deterministic; rerunning leaves the committed files unchanged.

    python3 scripts/make_fixtures.py
"""

import json
import random
import re
import shutil
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "crates" / "core" / "tests" / "fixtures"

FIG_PATTERN = re.compile(
    r"\b(?:figures|figure|figs|fig)\.?\s*(?P<label>S?\d+(?:\s*[-–,]\s*S?\d+)*)",
    re.IGNORECASE,
)
WINDOW = 2

# ----------------------------------------------------------------------------
# hand-annotated sentences: form|lemma|UPOS|head|deprel
# {n} and {m} are figure numbers filled in per use.

REF = {
    "R1": """Figure|figure|NOUN|3|nsubj {n}|{n}|NUM|1|nummod shows|show|VERB|0|root the|the|DET|6|det
        XANES|XANES|PROPN|6|compound spectra|spectrum|NOUN|3|obj of|of|ADP|9|case the|the|DET|9|det
        samples|sample|NOUN|6|nmod .|.|PUNCT|3|punct""",
    "R2": """The|the|DET|3|det Fourier|Fourier|PROPN|3|compound transforms|transform|NOUN|5|nsubj:pass
        are|be|AUX|5|aux:pass shown|show|VERB|0|root in|in|ADP|7|case Fig.|fig|NOUN|5|obl
        {n}|{n}|NUM|7|nummod .|.|PUNCT|5|punct""",
    "R3": """Figure|figure|NOUN|3|nsubj {n}|{n}|NUM|1|nummod presents|present|VERB|0|root a|a|DET|6|det
        broad|broad|ADJ|6|amod peak|peak|NOUN|3|obj near|near|ADP|9|case the|the|DET|9|det
        edge|edge|NOUN|6|nmod .|.|PUNCT|3|punct""",
    "R4": """The|the|DET|3|det edge|edge|NOUN|3|compound position|position|NOUN|4|nsubj shifts|shift|VERB|0|root
        to|to|ADP|7|case higher|high|ADJ|7|amod energy|energy|NOUN|4|obl (|(|PUNCT|9|punct
        Figure|figure|NOUN|4|obl {n}|{n}|NUM|9|nummod )|)|PUNCT|9|punct .|.|PUNCT|4|punct""",
    "R5": """As|as|SCONJ|2|mark shown|show|VERB|9|advcl in|in|ADP|4|case Figure|figure|NOUN|2|obl
        {n}|{n}|NUM|4|nummod ,|,|PUNCT|2|punct the|the|DET|8|det intensity|intensity|NOUN|9|nsubj
        increases|increase|VERB|0|root rapidly|rapidly|ADV|9|advmod with|with|ADP|12|case
        temperature|temperature|NOUN|9|obl .|.|PUNCT|9|punct""",
    "R6": """Figure|figure|NOUN|3|nsubj S{n}|S{n}|NUM|1|nummod depicts|depict|VERB|0|root the|the|DET|6|det
        calibration|calibration|NOUN|6|compound curve|curve|NOUN|3|obj .|.|PUNCT|3|punct""",
    "R7": """Figs.|fig|NOUN|3|nsubj {n}-{m}|{n}-{m}|NUM|1|nummod compare|compare|VERB|0|root the|the|DET|5|det
        spectra|spectrum|NOUN|3|obj of|of|ADP|8|case the|the|DET|8|det films|film|NOUN|5|nmod
        .|.|PUNCT|3|punct""",
    "R8": """We|we|PRON|2|nsubj plot|plot|VERB|0|root the|the|DET|5|det derivative|derivative|ADJ|5|amod
        spectra|spectrum|NOUN|2|obj in|in|ADP|7|case Figure|figure|NOUN|2|obl {n}|{n}|NUM|7|nummod
        .|.|PUNCT|2|punct""",
    "R9": """The|the|DET|2|det inset|inset|NOUN|6|nsubj of|of|ADP|4|case Figure|figure|NOUN|2|nmod
        {n}|{n}|NUM|4|nummod illustrates|illustrate|VERB|0|root the|the|DET|10|det sharp|sharp|ADJ|10|amod
        pre-edge|pre-edge|ADJ|10|amod feature|feature|NOUN|6|obj .|.|PUNCT|6|punct""",
    "R10": """Fig.|fig|NOUN|3|nsubj {n}|{n}|NUM|1|nummod displays|display|VERB|0|root the|the|DET|7|det
        linear|linear|ADJ|7|amod combination|combination|NOUN|7|compound fit|fit|NOUN|3|obj
        .|.|PUNCT|3|punct""",
    "R11": """The|the|DET|2|det results|result|NOUN|4|nsubj:pass are|be|AUX|4|aux:pass
        summarized|summarize|VERB|0|root in|in|ADP|6|case Figure|figure|NOUN|4|obl {n}|{n}|NUM|6|nummod
        and|and|CCONJ|9|cc Table|table|NOUN|6|conj 1|1|NUM|9|nummod .|.|PUNCT|4|punct""",
    "R12": """Figure|figure|NOUN|3|nsubj {n}|{n}|NUM|1|nummod indicates|indicate|VERB|0|root a|a|DET|6|det
        strong|strong|ADJ|6|amod increase|increase|NOUN|3|obj in|in|ADP|8|case
        intensity|intensity|NOUN|6|nmod .|.|PUNCT|3|punct""",
}

DESCRIPTIVE = {
    "D1": """The|the|DET|2|det spectrum|spectrum|NOUN|3|nsubj exhibits|exhibit|VERB|0|root a|a|DET|6|det
        sharp|sharp|ADJ|6|amod peak|peak|NOUN|3|obj at|at|ADP|9|case the|the|DET|9|det
        edge|edge|NOUN|3|obl .|.|PUNCT|3|punct""",
    "D2": """A|a|DET|3|det broad|broad|ADJ|3|amod band|band|NOUN|4|nsubj appears|appear|VERB|0|root
        in|in|ADP|8|case the|the|DET|8|det lower|lower|ADJ|8|amod region|region|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "D3": """The|the|DET|2|det intensity|intensity|NOUN|3|nsubj increases|increase|VERB|0|root
        rapidly|rapidly|ADV|3|advmod above|above|ADP|7|case the|the|DET|7|det edge|edge|NOUN|3|obl
        .|.|PUNCT|3|punct""",
    "D4": """The|the|DET|2|det curve|curve|NOUN|3|nsubj rises|rise|VERB|0|root linearly|linearly|ADV|3|advmod
        with|with|ADP|6|case temperature|temperature|NOUN|3|obl .|.|PUNCT|3|punct""",
    "D5": """The|the|DET|4|det white|white|ADJ|3|amod line|line|NOUN|4|compound intensity|intensity|NOUN|5|nsubj
        drops|drop|VERB|0|root sharply|sharply|ADV|5|advmod .|.|PUNCT|5|punct""",
    "D6": """The|the|DET|3|det dashed|dashed|ADJ|3|amod line|line|NOUN|4|nsubj indicates|indicate|VERB|0|root
        the|the|DET|7|det edge|edge|NOUN|7|compound position|position|NOUN|4|obj .|.|PUNCT|4|punct""",
    "D7": """The|the|DET|3|det red|red|ADJ|3|amod curve|curve|NOUN|4|nsubj shows|show|VERB|0|root a|a|DET|7|det
        gradual|gradual|ADJ|7|amod decrease|decrease|NOUN|4|obj .|.|PUNCT|4|punct""",
    "D8": """The|the|DET|3|det peak|peak|NOUN|3|compound position|position|NOUN|4|nsubj shifts|shift|VERB|0|root
        slightly|slightly|ADV|4|advmod to|to|ADP|8|case the|the|DET|8|det right|right|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "D9": """Two|two|NUM|3|nummod distinct|distinct|ADJ|3|amod features|feature|NOUN|5|nsubj:pass
        are|be|AUX|5|aux:pass observed|observe|VERB|0|root in|in|ADP|9|case the|the|DET|9|det
        upper|upper|ADJ|9|amod panel|panel|NOUN|5|obl .|.|PUNCT|5|punct""",
    "D10": """The|the|DET|3|det vertical|vertical|ADJ|3|amod line|line|NOUN|4|nsubj marks|mark|VERB|0|root
        the|the|DET|7|det edge|edge|NOUN|7|compound energy|energy|NOUN|4|obj .|.|PUNCT|4|punct""",
    "D11": """Both|both|DET|2|det spectra|spectrum|NOUN|3|nsubj display|display|VERB|0|root
        similar|similar|ADJ|5|amod features|feature|NOUN|3|obj .|.|PUNCT|3|punct""",
    "D12": """The|the|DET|3|det left|left|ADJ|3|amod panel|panel|NOUN|4|nsubj displays|display|VERB|0|root
        the|the|DET|7|det raw|raw|ADJ|7|amod data|data|NOUN|4|obj .|.|PUNCT|4|punct""",
    "D13": """The|the|DET|2|det oscillations|oscillation|NOUN|3|nsubj decrease|decrease|VERB|0|root
        gradually|gradually|ADV|3|advmod at|at|ADP|7|case high|high|ADJ|7|amod energy|energy|NOUN|3|obl
        .|.|PUNCT|3|punct""",
    "D14": """A|a|DET|3|det flat|flat|ADJ|3|amod plateau|plateau|NOUN|4|nsubj follows|follow|VERB|0|root
        the|the|DET|6|det edge|edge|NOUN|4|obj .|.|PUNCT|4|punct""",
    "D15": """The|the|DET|2|det slope|slope|NOUN|6|nsubj of|of|ADP|5|case the|the|DET|5|det
        curve|curve|NOUN|2|nmod changes|change|VERB|0|root significantly|significantly|ADV|6|advmod
        .|.|PUNCT|6|punct""",
    "D16": """The|the|DET|3|det black|black|ADJ|3|amod symbols|symbol|NOUN|4|nsubj represent|represent|VERB|0|root
        the|the|DET|7|det measured|measured|ADJ|7|amod values|value|NOUN|4|obj .|.|PUNCT|4|punct""",
    "D17": """The|the|DET|3|det edge|edge|NOUN|3|compound energy|energy|NOUN|4|nsubj increases|increase|VERB|0|root
        linearly|linearly|ADV|4|advmod with|with|ADP|9|case the|the|DET|9|det
        oxidation|oxidation|NOUN|9|compound state|state|NOUN|4|obl .|.|PUNCT|4|punct""",
    "D18": """Each|each|DET|2|det spectrum|spectrum|NOUN|3|nsubj shows|show|VERB|0|root a|a|DET|6|det
        pronounced|pronounced|ADJ|6|amod shoulder|shoulder|NOUN|3|obj .|.|PUNCT|3|punct""",
    "D19": """The|the|DET|3|det main|main|ADJ|3|amod peak|peak|NOUN|5|nsubj is|be|AUX|5|cop
        narrow|narrow|ADJ|0|root and|and|CCONJ|7|cc symmetric|symmetric|ADJ|5|conj .|.|PUNCT|5|punct""",
    "D20": """The|the|DET|3|det green|green|ADJ|3|amod trace|trace|NOUN|4|nsubj oscillates|oscillate|VERB|0|root
        around|around|ADP|7|case the|the|DET|7|det baseline|baseline|NOUN|4|obl .|.|PUNCT|4|punct""",
    "D21": """The|the|DET|3|det absorption|absorption|NOUN|3|compound edge|edge|NOUN|4|nsubj
        moves|move|VERB|0|root to|to|ADP|7|case lower|low|ADJ|7|amod energy|energy|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "D22": """Several|several|ADJ|3|amod weak|weak|ADJ|3|amod peaks|peak|NOUN|4|nsubj appear|appear|VERB|0|root
        at|at|ADP|7|case low|low|ADJ|7|amod energy|energy|NOUN|4|obl .|.|PUNCT|4|punct""",
}

NON_DESCRIPTIVE = {
    "N1": """The|the|DET|2|det samples|sample|NOUN|4|nsubj:pass were|be|AUX|4|aux:pass
        purchased|purchase|VERB|0|root from|from|ADP|8|case a|a|DET|8|det commercial|commercial|ADJ|8|amod
        supplier|supplier|NOUN|4|obl .|.|PUNCT|4|punct""",
    "N2": """We|we|PRON|2|nsubj prepared|prepare|VERB|0|root the|the|DET|4|det films|film|NOUN|2|obj
        by|by|ADP|7|case spin|spin|NOUN|7|compound coating|coating|NOUN|2|obl .|.|PUNCT|2|punct""",
    "N3": """The|the|DET|2|det precursor|precursor|NOUN|4|nsubj:pass was|be|AUX|4|aux:pass
        dissolved|dissolve|VERB|0|root in|in|ADP|6|case water|water|NOUN|4|obl .|.|PUNCT|4|punct""",
    "N4": """All|all|DET|2|det measurements|measurement|NOUN|4|nsubj:pass were|be|AUX|4|aux:pass
        performed|perform|VERB|0|root at|at|ADP|7|case room|room|NOUN|7|compound
        temperature|temperature|NOUN|4|obl .|.|PUNCT|4|punct""",
    "N5": """The|the|DET|2|det powders|powder|NOUN|4|nsubj:pass were|be|AUX|4|aux:pass
        annealed|anneal|VERB|0|root in|in|ADP|6|case air|air|NOUN|4|obl for|for|ADP|9|case
        two|two|NUM|9|nummod hours|hour|NOUN|4|obl .|.|PUNCT|4|punct""",
    "N6": """This|this|DET|2|det behavior|behavior|NOUN|4|nsubj is|be|AUX|4|cop consistent|consistent|ADJ|0|root
        with|with|ADP|7|case previous|previous|ADJ|7|amod reports|report|NOUN|4|obl .|.|PUNCT|4|punct""",
    "N7": """The|the|DET|2|det data|data|NOUN|4|nsubj:pass were|be|AUX|4|aux:pass
        collected|collect|VERB|0|root at|at|ADP|7|case the|the|DET|7|det beamline|beamline|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "N8": """We|we|PRON|2|nsubj used|use|VERB|0|root a|a|DET|5|det tube|tube|NOUN|5|compound
        furnace|furnace|NOUN|2|obj for|for|ADP|9|case the|the|DET|9|det heat|heat|NOUN|9|compound
        treatment|treatment|NOUN|2|obl .|.|PUNCT|2|punct""",
    "N9": """The|the|DET|2|det catalyst|catalyst|NOUN|4|nsubj:pass was|be|AUX|4|aux:pass
        synthesized|synthesize|VERB|0|root by|by|ADP|8|case a|a|DET|8|det sol-gel|sol-gel|ADJ|8|amod
        method|method|NOUN|4|obl .|.|PUNCT|4|punct""",
    "N10": """Further|further|ADJ|2|amod details|detail|NOUN|4|nsubj:pass are|be|AUX|4|aux:pass
        given|give|VERB|0|root in|in|ADP|8|case the|the|DET|8|det Supporting|Supporting|PROPN|8|compound
        Information|Information|PROPN|4|obl .|.|PUNCT|4|punct""",
    "N11": """The|the|DET|2|det authors|author|NOUN|3|nsubj thank|thank|VERB|0|root the|the|DET|6|det
        beamline|beamline|NOUN|6|compound staff|staff|NOUN|3|obj for|for|ADP|8|case
        support|support|NOUN|3|obl .|.|PUNCT|3|punct""",
    "N12": """TiO2|TiO2|PROPN|2|compound nanoparticles|nanoparticle|NOUN|4|nsubj:pass were|be|AUX|4|aux:pass
        obtained|obtain|VERB|0|root from|from|ADP|7|case the|the|DET|7|det supplier|supplier|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "N13": """The|the|DET|2|det solution|solution|NOUN|4|nsubj:pass was|be|AUX|4|aux:pass
        stirred|stir|VERB|0|root for|for|ADP|7|case one|one|NUM|7|nummod hour|hour|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "N14": """We|we|PRON|2|nsubj thank|thank|VERB|0|root the|the|DET|4|det reviewers|reviewer|NOUN|2|obj
        for|for|ADP|7|case helpful|helpful|ADJ|7|amod comments|comment|NOUN|2|obl .|.|PUNCT|2|punct""",
    "N15": """Such|such|ADJ|2|amod materials|material|NOUN|5|nsubj:pass are|be|AUX|5|aux:pass
        widely|widely|ADV|5|advmod used|use|VERB|0|root in|in|ADP|7|case catalysis|catalysis|NOUN|5|obl
        .|.|PUNCT|5|punct""",
    "N16": """The|the|DET|3|det reference|reference|NOUN|3|compound foils|foil|NOUN|5|nsubj:pass
        were|be|AUX|5|aux:pass measured|measure|VERB|0|root simultaneously|simultaneously|ADV|5|advmod
        .|.|PUNCT|5|punct""",
    "N17": """Similar|similar|ADJ|2|amod trends|trend|NOUN|4|nsubj:pass were|be|AUX|4|aux:pass
        reported|report|VERB|0|root in|in|ADP|7|case previous|previous|ADJ|7|amod studies|study|NOUN|4|obl
        .|.|PUNCT|4|punct""",
    "N18": """The|the|DET|2|det cell|cell|NOUN|4|nsubj:pass was|be|AUX|4|aux:pass sealed|seal|VERB|0|root
        with|with|ADP|7|case Kapton|Kapton|PROPN|7|compound tape|tape|NOUN|4|obl .|.|PUNCT|4|punct""",
}

FILLER = {
    "X1": """X-ray|X-ray|NOUN|3|compound absorption|absorption|NOUN|3|compound
        spectroscopy|spectroscopy|NOUN|4|nsubj probes|probe|VERB|0|root the|the|DET|7|det
        local|local|ADJ|7|amod structure|structure|NOUN|4|obj of|of|ADP|9|case metals|metal|NOUN|7|nmod
        .|.|PUNCT|4|punct""",
    "X2": """Many|many|ADJ|2|amod studies|study|NOUN|4|nsubj have|have|AUX|4|aux addressed|address|VERB|0|root
        this|this|DET|6|det question|question|NOUN|4|obj .|.|PUNCT|4|punct""",
    "X3": """Here|here|ADV|3|advmod we|we|PRON|3|nsubj report|report|VERB|0|root a|a|DET|6|det
        simple|simple|ADJ|6|amod route|route|NOUN|3|obj to|to|ADP|9|case stable|stable|ADJ|9|amod
        catalysts|catalyst|NOUN|6|nmod .|.|PUNCT|3|punct""",
    "X4": """The|the|DET|3|det local|local|ADJ|3|amod structure|structure|NOUN|4|nsubj controls|control|VERB|0|root
        the|the|DET|6|det activity|activity|NOUN|4|obj .|.|PUNCT|4|punct""",
    "X5": """These|these|DET|2|det findings|finding|NOUN|3|nsubj support|support|VERB|0|root the|the|DET|6|det
        proposed|proposed|ADJ|6|amod model|model|NOUN|3|obj .|.|PUNCT|3|punct""",
    "X6": """Future|future|ADJ|2|amod work|work|NOUN|4|nsubj will|will|AUX|4|aux address|address|VERB|0|root
        the|the|DET|6|det kinetics|kinetics|NOUN|4|obj .|.|PUNCT|4|punct""",
}

NO_SPACE_BEFORE = {".", ",", ")"}
NO_SPACE_AFTER = {"("}


def tokens(spec, n=1, m=2):
    out = []
    for item in spec.split():
        form, lemma, upos, head, rel = item.split("|")
        form = form.replace("{n}", str(n)).replace("{m}", str(m))
        lemma = lemma.replace("{n}", str(n)).replace("{m}", str(m))
        out.append((form, lemma, upos, int(head), rel))
    return out


def text_of(toks):
    s = ""
    for i, (form, *_rest) in enumerate(toks):
        if i > 0 and form not in NO_SPACE_BEFORE and toks[i - 1][0] not in NO_SPACE_AFTER:
            s += " "
        s += form
    return s


def conllu_block(toks):
    lines = [f"# text = {text_of(toks)}"]
    for i, (form, lemma, upos, head, rel) in enumerate(toks, start=1):
        lines.append(f"{i}\t{form}\t{lemma}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_")
    return "\n".join(lines) + "\n\n"


def is_ref(text):
    return FIG_PATTERN.search(text) is not None


def window_neighbors(flags, i, window=WINDOW):
    lo = max(0, i - window)
    hi = min(len(flags) - 1, i + window)
    return [j for j in range(lo, hi + 1) if j != i and not flags[j]]


def candidates(paragraphs):
    """Global indices of the candidate population of an article."""
    out = set()
    g = 0
    for para in paragraphs:
        flags = [is_ref(s) for s in para]
        for i, f in enumerate(flags):
            if f:
                out.update(g + j for j in window_neighbors(flags, i))
        g += len(para)
    return out


# ----------------------------------------------------------------------------
# mini corpus

# Each layout yields exactly two candidates: slots "a" and "b".
LAYOUTS = [
    [["R", "a", "b", "X", "X"], ["X", "X", "X"]],
    [["X", "X", "X"], ["a", "R", "b"]],
    [["R", "R", "a", "b", "X"], ["X", "X"]],
    [["a", "b", "R"], ["X", "X", "X", "X"]],
    [["X", "X"], ["R", "a", "b", "X"], ["X", "X"]],
]

TITLES = [
    "Local structure of supported copper catalysts",
    "Oxidation state of iron in mineral films",
    "Titanium dioxide nanoparticles under annealing",
    "Nickel sites in layered hydroxides",
    "Cobalt speciation during electrochemical cycling",
    "Zinc coordination in porous frameworks",
    "Manganese oxides for water oxidation",
    "Vanadium centers on silica supports",
    "Chromium reduction in soils",
    "Silver clusters in zeolites",
    "Platinum particles on carbon",
    "Palladium hydride formation",
    "Cerium redox in ceria films",
    "Gold nanoparticle growth",
    "Copper sulfide phases",
    "Iron sulfate hydration",
    "Tungsten oxide bronzes",
    "Molybdenum disulfide edges",
    "Ruthenium complexes in solution",
    "Lead speciation in glasses",
]


def build_mini():
    rng = random.Random(20240611)
    d_keys = list(DESCRIPTIVE)
    n_keys = list(NON_DESCRIPTIVE)
    pool = [(k, 1) for k in d_keys] + [(k, 0) for k in n_keys]
    rng.shuffle(pool)
    ref_keys = list(REF)
    filler_keys = list(FILLER) + n_keys

    mini = OUT / "mini"
    articles, gold = [], []
    for a in range(20):
        layout = LAYOUTS[a % len(LAYOUTS)]
        cands = [pool[2 * a], pool[2 * a + 1]]
        fig = 1
        paragraphs = []
        for para in layout:
            sents = []
            for slot in para:
                if slot == "R":
                    key = ref_keys[(a * 3 + len(sents) + fig) % len(ref_keys)]
                    sents.append((key, tokens(REF[key], fig, fig + 1), None))
                    fig += 1
                elif slot in "ab":
                    key, label = cands["ab".index(slot)]
                    spec = DESCRIPTIVE.get(key) or NON_DESCRIPTIVE[key]
                    sents.append((key, tokens(spec), label))
                else:
                    key = filler_keys[rng.randrange(len(filler_keys))]
                    spec = FILLER.get(key) or NON_DESCRIPTIVE[key]
                    sents.append((key, tokens(spec), None))
            paragraphs.append(sents)

        uid = f"mini-{a + 1:02d}"
        texts = [[text_of(t) for _, t, _ in para] for para in paragraphs]
        found = candidates(texts)
        g = 0
        expected = set()
        for para in paragraphs:
            for key, toks, label in para:
                if label is not None:
                    expected.add(g)
                    gold.append({"uid": uid, "global_index": g, "label": label, "key": key})
                g += 1
        assert found == expected, (uid, found, expected)

        stem = mini / uid
        conllu = "".join(conllu_block(t) for para in paragraphs for _, t, _ in para)
        if a % 4 == 3:
            body = "".join(f"    <para>{escape(' '.join(p))}</para>\n" for p in texts)
            xml = (
                f'<?xml version="1.0" encoding="UTF-8"?>\n<article uid="{uid}" journal="fixture">\n'
                f"  <title>{escape(TITLES[a])}</title>\n  <body>\n{body}  </body>\n</article>\n"
            )
            stem.with_suffix(".xml").write_text(xml)
        else:
            doc = {
                "uid": uid,
                "title": TITLES[a],
                "abstract": "",
                "metadata": {"journal": "fixture"},
                "body": texts,
            }
            stem.with_suffix(".json").write_text(json.dumps(doc, indent=1) + "\n")
        stem.with_suffix(".conllu").write_text(conllu)
        articles.append(uid)

    assert len(gold) == 40
    with open(OUT / "mini_gold.jsonl", "w") as f:
        for g in gold:
            f.write(json.dumps({"uid": g["uid"], "global_index": g["global_index"], "label": g["label"]}) + "\n")
    return articles


# ----------------------------------------------------------------------------
# lexical resources

SYNSETS = {
    "present": [["present", "show", "display", "give"], ["present", "submit", "offer"], ["present", "gift"]],
    "indicate": [["indicate", "show", "suggest"], ["indicate", "signal", "betoken"]],
    "rise": [["rise", "increase", "climb"], ["rise", "ascend", "lift"], ["rise", "stand"]],
    "drop": [["drop", "decrease", "fall"], ["drop", "release", "shed"]],
    "appear": [["appear", "seem", "look"], ["appear", "emerge", "show"]],
    "mark": [["mark", "indicate", "show"], ["mark", "label", "tag"]],
    "change": [["change", "shift", "alter"], ["change", "exchange", "swap"]],
    "represent": [["represent", "show", "depict"], ["represent", "stand", "typify"]],
    "follow": [["follow", "succeed", "come"], ["follow", "obey"]],
    "summarize": [["summarize", "sum", "recap"]],
    "portray": [["portray", "depict", "show"]],
    "show": [["show", "display", "exhibit"], ["show", "demonstrate", "prove"]],
    "increase": [["increase", "rise", "grow"]],
    "decrease": [["decrease", "drop", "reduce", "fall"]],
}

CLUSTERS = {
    "show": ["show", "display", "exhibit", "depict", "illustrate", "present", "reveal", "demonstrate",
             "visualize", "represent", "mark", "appear", "indicate", "give"],
    "increase": ["increase", "rise", "grow", "climb", "enhance"],
    "decrease": ["decrease", "drop", "fall", "decline", "reduce", "diminish"],
    "shift": ["shift", "move", "change", "alter", "displace"],
    "suggest": ["suggest", "propose", "imply"],
}


def build_resources():
    (OUT / "synsets.json").write_text(json.dumps(SYNSETS, indent=1, sort_keys=True) + "\n")

    rng = np.random.default_rng(7)
    dim = 50
    vectors = {}
    for members in CLUSTERS.values():
        centre = rng.normal(size=dim)
        for w in members:
            vectors[w] = centre + 0.35 * rng.normal(size=dim)
    # indicate leans towards suggest as well
    vectors["indicate"] = 0.7 * vectors["indicate"] + 0.5 * np.mean([vectors[w] for w in CLUSTERS["suggest"]], axis=0)

    lexicon = (ROOT / "crates" / "core" / "data" / "ontology.txt").read_text()
    words = set(re.findall(r"^lex (\S+)", lexicon, re.MULTILINE))
    for synsets in SYNSETS.values():
        for s in synsets:
            words.update(s)
    for table in (REF, DESCRIPTIVE, NON_DESCRIPTIVE, FILLER):
        for spec in table.values():
            words.update(t[1].lower() for t in tokens(spec) if t[2] not in ("PUNCT", "NUM"))
    words.discard("portray")  # kept out of the vocabulary on purpose
    syllables = ["ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi", "pe", "so", "du", "fa"]
    while len(words | set(vectors)) < 1000:
        words.add("".join(rng.choice(syllables, size=3)))
    for w in sorted(words):
        if w not in vectors:
            vectors[w] = rng.normal(size=dim)
    names = sorted(vectors)
    assert len(names) == 1000, len(names)
    with open(OUT / "embeddings.txt", "w") as f:
        f.write(f"{len(names)} {dim}\n")
        for w in names:
            f.write(w + " " + " ".join(f"{x:.6f}" for x in vectors[w]) + "\n")


# ----------------------------------------------------------------------------
# bulk corpus (no parses): paragraph and reference structure only

SUBJECTS = ["The sample", "The catalyst", "The spectrum", "The edge", "This feature", "The film", "The signal",
            "The precursor", "The fit", "The model", "The intensity", "The coordination number", "The white line",
            "The first shell", "The pre-edge peak", "Each spectrum", "The reference foil", "The support"]
VERBS = ["shows", "changes", "remains stable", "increases", "decreases", "shifts", "was measured",
         "was prepared", "agrees with theory", "was annealed", "is shown", "broadens", "sharpens"]
TAILS = ["", " after annealing", " at room temperature", " under operando conditions", " in air",
         " with increasing temperature", " during the reaction", " relative to the reference",
         " for all samples", " within the error bars"]
REF_FORMS = ["Fig. {n}", "Figure {n}", "Figs. {n}-{m}", "Figure S{n}", "figures {n} and {m}", "Fig.{n}",
             "FIGURE {n}", "Fig. {n}a", "Figs. {n}, {m}"]
NEG_PHRASES = [" in this configuration", ", a figurative description", ", a key figure of merit",
               " as the figures of merit suggest", " with a reconfigured cell"]


def bulk_sentence(rng, with_ref):
    s = f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)}{rng.choice(TAILS)}"
    if rng.random() < 0.08:
        s += rng.choice(NEG_PHRASES)
    if with_ref:
        n = rng.randint(1, 9)
        ref = rng.choice(REF_FORMS).format(n=n, m=n + 1)
        if rng.random() < 0.5:
            s += f" ({ref})"
        else:
            s = f"As seen in {ref}, " + s[0].lower() + s[1:]
    if rng.random() < 0.05:
        s += " (e.g., Cu and Fe)"
    return s + "."


def build_bulk(n_articles=137, n_sentences=22352):
    rng = random.Random(137)
    bulk = OUT / "bulk"
    counts = [rng.randint(120, 205) for _ in range(n_articles)]
    scale = n_sentences / sum(counts)
    counts = [max(20, round(c * scale)) for c in counts]
    counts[-1] += n_sentences - sum(counts)
    manifest = {"articles": n_articles, "sentences": n_sentences, "files": {}}
    for a, total in enumerate(counts):
        paragraphs, left = [], total
        while left > 0:
            k = min(left, rng.randint(2, 12))
            paragraphs.append([bulk_sentence(rng, rng.random() < 0.09) for _ in range(k)])
            left -= k
        uid = f"bulk-{a + 1:03d}"
        body = "".join(f"    <para>{escape(' '.join(p))}</para>\n" for p in paragraphs)
        xml = (
            f'<?xml version="1.0" encoding="UTF-8"?>\n<article uid="{uid}">\n'
            f"  <title>Bulk article {a + 1}</title>\n  <body>\n{body}  </body>\n</article>\n"
        )
        name = f"{uid}.xml"
        (bulk / name).write_text(xml)
        flags = [[is_ref(s) for s in p] for p in paragraphs]
        manifest["files"][name] = {
            "uid": uid,
            "paragraphs": len(paragraphs),
            "sentences": total,
            "reference_sentences": sum(map(sum, flags)),
            "candidates": len(candidates(paragraphs)),
        }
    assert sum(f["sentences"] for f in manifest["files"].values()) == n_sentences
    (OUT / "bulk_manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


# ----------------------------------------------------------------------------
# labeled sentences for the bag-of-words baseline

POS_SUBJ = ["The spectrum", "The curve", "The red line", "The inset", "The left panel", "The dashed trace",
            "The upper panel", "Each plot", "The main peak", "The black symbols"]
POS_PRED = ["shows a sharp peak", "rises linearly", "exhibits a broad band", "drops rapidly above the edge",
            "displays two distinct features", "shifts slightly to the right", "has a flat plateau",
            "increases gradually", "oscillates around the baseline", "marks the edge position"]
NEG_SUBJ = ["The samples", "The precursor", "The films", "All measurements", "The catalyst", "The powders",
            "The solution", "The reference foils", "The cell", "The nanoparticles"]
NEG_PRED = ["were purchased from a supplier", "was dissolved in water", "were prepared by spin coating",
            "were performed at room temperature", "was synthesized by a sol-gel route", "were annealed in air",
            "was stirred for one hour", "were measured at the beamline", "was sealed with tape",
            "were stored under argon"]


def build_labeled():
    rng = random.Random(400)
    items = []
    for label, subj, pred in ((1, POS_SUBJ, POS_PRED), (0, NEG_SUBJ, NEG_PRED)):
        combos = [(s, p) for s in subj for p in pred]
        rng.shuffle(combos)
        for s, p in combos[:100]:
            items.append({"text": f"{s} {p}.", "label": label, "source": "synthetic"})
    rng.shuffle(items)
    with open(OUT / "labeled.jsonl", "w") as f:
        for it in items:
            f.write(json.dumps(it) + "\n")


def main():
    for d in ("mini", "bulk"):
        shutil.rmtree(OUT / d, ignore_errors=True)
        (OUT / d).mkdir(parents=True)
    build_mini()
    build_resources()
    build_bulk()
    build_labeled()


if __name__ == "__main__":
    main()
