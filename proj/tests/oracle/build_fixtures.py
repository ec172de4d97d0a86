#!/usr/bin/env python3
# Copyright 2026 The cliniqa Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Builds the static test fixtures, computing every character offset here
(in code points, via Python string indexing) so the C++ code under test is
never the source of its own expected values.

Regenerate (committed output; rerunning must be a no-op) with:

    python3 tests/oracle/build_fixtures.py tests/fixtures
"""

import json
import sys
from pathlib import Path


def note_text(lines, final_newline=True):
    return "\n".join(lines) + ("\n" if final_newline else "")


def line_answer(lines, k):
    """Full trimmed line k as an answer span into note_text(lines)."""
    start = sum(len(line) + 1 for line in lines[:k])
    raw = lines[k]
    trimmed = raw.strip()
    lead = len(raw) - len(raw.lstrip())
    return {"text": trimmed, "answer_start": start + lead}


def annotation(note_id, text, surface, type_, occurrence=0):
    idx = -1
    for _ in range(occurrence + 1):
        idx = text.index(surface, idx + 1)
    assert text[idx : idx + len(surface)] == surface
    return {
        "note_id": note_id,
        "surface": surface,
        "type": type_,
        "start": idx,
        "end": idx + len(surface),
    }


def check_dataset(ds):
    note_text_by_id = {n["note_id"]: n["text"] for n in ds["notes"]}
    for qa in ds["qa_pairs"]:
        text = note_text_by_id[qa["note_id"]]
        for a in qa["answers"]:
            s = a["answer_start"]
            assert text[s : s + len(a["text"])] == a["text"], qa["question_id"]


def dump_json(path, obj):
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


# ---------------------------------------------------------------------------
# corpus.json: 3 notes, 12 questions, gold answers = full trimmed lines.
# Nine questions overlap exactly one line (the trivially matchable subset).
# ---------------------------------------------------------------------------

def build_corpus(out_dir):
    c1 = [
        "CHIEF COMPLAINT:",
        "Crushing substernal chest pressure radiating leftward.",
        "MEDICATIONS:",
        "Metoprolol 25 mg PO daily",
        "Lisinopril 10 mg PO daily",
        "ALLERGIES:",
        "Penicillin causes hives.",
    ]
    c2 = [
        "HISTORY OF PRESENT ILLNESS:",
        "Progressive exertional dyspnea over three weeks.",
        "HOSPITAL COURSE:",
        "Furosemide 40 mg IV achieved brisk diuresis.",
        "An echocardiogram demonstrated reduced ejection fraction.",
        "DISCHARGE MEDICATIONS:",
        "Warfarin 5 mg PO at bedtime",
    ]
    c3 = [
        "PAST MEDICAL HISTORY:",
        "Seizure disorder managed with levetiracetam.",
        "LABORATORY DATA:",
        "Sodium 128 on admission improving to 135.",
        "IMPRESSION:",
        "Hyponatremia resolving with fluid restriction.",
    ]

    def qa(qid, question, note_id, lines, line_no, template_id, surface=None):
        entry = {
            "question_id": qid,
            "question": question,
            "note_id": note_id,
            "answers": [line_answer(lines, line_no)],
            "template_id": template_id,
        }
        if surface is not None:
            entry["entity_surface"] = surface
        return entry

    ds = {
        "notes": [
            {"note_id": "c1", "text": note_text(c1)},
            {"note_id": "c2", "text": note_text(c2)},
            {"note_id": "c3", "text": note_text(c3)},
        ],
        "qa_pairs": [
            qa("q_c1_1", "What dose of metoprolol does the patient take?",
               "c1", c1, 3, "tA", "metoprolol"),
            qa("q_c1_2", "What dose of lisinopril does the patient take?",
               "c1", c1, 4, "tA", "lisinopril"),
            qa("q_c1_3", "What medication allergy does the patient have?",
               "c1", c1, 6, "tD"),
            qa("q_c1_4", "Does the patient take metoprolol or lisinopril?",
               "c1", c1, 3, "tD", "metoprolol"),
            qa("q_c2_1", "What furosemide dose achieved brisk diuresis?",
               "c2", c2, 3, "tA", "furosemide"),
            qa("q_c2_2", "What did the echocardiogram demonstrate?",
               "c2", c2, 4, "tB", "echocardiogram"),
            qa("q_c2_3", "When does the patient take warfarin?",
               "c2", c2, 6, "tB", "warfarin"),
            qa("q_c2_4", "How long has the dyspnea progressed?",
               "c2", c2, 1, "tC", "dyspnea"),
            qa("q_c3_1", "Which anticonvulsant manages the seizure disorder?",
               "c3", c3, 1, "tC", "seizure disorder"),
            qa("q_c3_2", "What was the admission sodium?",
               "c3", c3, 3, "tB", "sodium"),
            qa("q_c3_3", "How is the hyponatremia being managed?",
               "c3", c3, 5, "tC", "hyponatremia"),
            qa("q_c3_4", "Was fluid restriction effective for the hyponatremia?",
               "c3", c3, 5, "tD", "hyponatremia"),
        ],
    }
    check_dataset(ds)
    assert len(ds["qa_pairs"]) == 12
    dump_json(out_dir / "corpus.json", ds)


# ---------------------------------------------------------------------------
# Generation fixtures: annotated notes + templates.
# ---------------------------------------------------------------------------

def build_generation(out_dir):
    n1 = [
        "ADMISSION DATE: 03/14/2151",
        "HISTORY OF PRESENT ILLNESS:",
        "The patient is a 61 year old man with diabetes mellitus.",
        "He was started on Flagyl for C. diff colitis.",
        "MEDICATIONS ON DISCHARGE:",
        "  lasix 160 BID ",
        "Flagyl 500 mg PO TID",
        "Aspirin 81 mg daily was continued for prophylaxis against cardiac "
        "events given his extensive history of coronary artery disease and "
        "prior myocardial infarction in 2143.",
        "FOLLOW UP",
        "Return to clinic in 2 weeks.",
    ]
    n2 = [
        "CHIEF COMPLAINT:",
        "Right upper quadrant pain.",
        "PAST MEDICAL HISTORY:",
        "Hypertension controlled with hctz.",
        "ASSESSMENT AND PLAN:",
        "The patient was admitted with acute cholecystitis.",
        "An ultrasound confirmed the diagnosis of acute cholecystitis.",
        "She was treated with IV antibiotics.",
    ]
    n3 = [
        "SOCIAL HISTORY:",
        "Patient enjoys café visits with family.",
        "MEDICATIONS:",
        "Metformin 500 mg PO BID",
        "PAST MEDICAL HISTORY:",
        "Depression noted in 2149.",
    ]
    t1, t2, t3 = note_text(n1), note_text(n2), note_text(n3)
    # The aspirin line must trip the 20-token answer filter.
    aspirin_line = next(line for line in n1 if line.startswith("Aspirin"))
    assert len(aspirin_line.split()) > 20, len(aspirin_line.split())

    notes = {
        "notes": [
            {"note_id": "n01", "text": t1},
            {"note_id": "n02", "text": t2},
            {"note_id": "n03", "text": t3},
        ],
        "qa_pairs": [],
    }
    templates = [
        {"template_id": "t1", "text": "Has this patient ever been on |medication|?"},
        {"template_id": "t2", "text": "How was the diagnosis of |problem| made?"},
        {"template_id": "t3", "text": "Why was the patient given |medication|?"},
        {"template_id": "t4", "text": "Does the patient have |problem|?"},
    ]
    annotations = [
        annotation("n01", t1, "Flagyl", "medication", occurrence=0),
        annotation("n01", t1, "Flagyl", "medication", occurrence=1),
        annotation("n01", t1, "lasix", "medication"),
        annotation("n01", t1, "Aspirin", "medication"),
        annotation("n01", t1, "diabetes mellitus", "problem"),
        annotation("n02", t2, "acute cholecystitis", "problem", occurrence=0),
        annotation("n02", t2, "acute cholecystitis", "problem", occurrence=1),
        annotation("n02", t2, "Hypertension", "problem"),
        annotation("n02", t2, "hctz", "medication"),
        annotation("n03", t3, "Metformin", "medication"),
        annotation("n03", t3, "Depression", "problem"),
    ]
    dump_json(out_dir / "gen_notes.json", notes)
    dump_json(out_dir / "gen_templates.json", templates)
    dump_json(out_dir / "gen_annotations.json", annotations)


# ---------------------------------------------------------------------------
# Knowledge-base fixtures for augmentation and linking.
# ---------------------------------------------------------------------------

def build_kb(out_dir):
    entities = [
        {"entity_id": "E1", "canonical": "Flagyl", "aliases": ["Metronidazole"]},
        {"entity_id": "E2", "canonical": "ganglion", "aliases": []},
        {"entity_id": "E3", "canonical": "ganglion cyst", "aliases": ["wrist ganglion"]},
        {"entity_id": "E4", "canonical": "hctz",
         "aliases": ["hydrochlorothiazide", "HCTZ"]},
        {"entity_id": "E5", "canonical": "HTN",
         "aliases": ["hypertension", "high blood pressure"]},
        {"entity_id": "E6", "canonical": "depression",
         "aliases": ["major depressive disorder"]},
        {"entity_id": "E7", "canonical": "mental illness", "aliases": []},
        {"entity_id": "E8", "canonical": "lasix", "aliases": ["furosemide", "Furosemide"]},
        {"entity_id": "E9", "canonical": "C. diff colitis",
         "aliases": ["Clostridium difficile colitis"]},
    ]
    triples = [
        ("E4", "treats", "E5"),
        ("E6", "isa", "E7"),
        ("E1", "treats", "E9"),
    ]
    lexicon = [
        ("flagyl", "E1"),
        ("ganglion", "E2"),
        ("ganglion cyst", "E3"),
        ("hctz", "E4"),
        ("htn", "E5"),
        ("hypertension", "E5"),
        ("depression", "E6"),
        ("mental illness", "E7"),
        ("lasix", "E8"),
        ("furosemide", "E8"),
    ]
    dump_json(out_dir / "kb_entities.json", entities)
    (out_dir / "kb_triples.tsv").write_text(
        "".join(f"{h}\t{r}\t{t}\n" for h, r, t in triples), encoding="utf-8")
    (out_dir / "lexicon.tsv").write_text(
        "".join(f"{s}\t{e}\n" for s, e in lexicon), encoding="utf-8")


# ---------------------------------------------------------------------------
# Synonym-utility fixtures: 50 questions whose answer lines mention only a
# knowledge-base synonym of the question's entity, behind a decoy line with
# high lexical overlap.
# ---------------------------------------------------------------------------

def build_synonym(out_dir, n_pairs=50):
    notes, qa_pairs, entities, triples, lexicon = [], [], [], [], []
    for i in range(n_pairs):
        brand, generic = f"brev{i:02d}ol", f"metra{i:02d}ine"
        brand_id, generic_id = f"e{i:02d}b", f"e{i:02d}g"
        entities.append({"entity_id": brand_id, "canonical": brand, "aliases": []})
        entities.append({"entity_id": generic_id, "canonical": generic, "aliases": []})
        triples.append((brand_id, "synonym_of", generic_id))
        triples.append((generic_id, "synonym_of", brand_id))
        lexicon.append((brand, brand_id))
        lexicon.append((generic, generic_id))

        lines = [
            "CLINICAL NOTE",
            "The patient has ever been on many medications over the years.",
            f"Started {generic} without complications.",
            "Continued home vitamins daily.",
        ]
        note_id = f"syn{i:02d}"
        notes.append({"note_id": note_id, "text": note_text(lines)})
        qa_pairs.append({
            "question_id": f"q_{note_id}",
            "question": f"Has this patient ever been on {brand.capitalize()}?",
            "note_id": note_id,
            "answers": [line_answer(lines, 2)],
            "template_id": "syn_t1",
            "entity_surface": brand.capitalize(),
        })

    ds = {"notes": notes, "qa_pairs": qa_pairs}
    check_dataset(ds)
    dump_json(out_dir / "syn_corpus.json", ds)
    dump_json(out_dir / "syn_entities.json", entities)
    (out_dir / "syn_triples.tsv").write_text(
        "".join(f"{h}\t{r}\t{t}\n" for h, r, t in triples), encoding="utf-8")
    (out_dir / "syn_lexicon.tsv").write_text(
        "".join(f"{s}\t{e}\n" for s, e in lexicon), encoding="utf-8")


# ---------------------------------------------------------------------------
# Segmentation fixtures: 20 notes mixing header styles, blank lines, a
# missing final newline, non-ASCII text, and one deliberately
# boundary-crossing answer (question_id "q_cross").
# ---------------------------------------------------------------------------

def build_segmentation(out_dir):
    notes, qa_pairs = [], []

    def add(note_id, lines, answer_lines, final_newline=True):
        notes.append({"note_id": note_id, "text": note_text(lines, final_newline)})
        for k, line_no in enumerate(answer_lines):
            qa_pairs.append({
                "question_id": f"q_{note_id}_{k}",
                "question": f"What is recorded in note {note_id} there?",
                "note_id": note_id,
                "answers": [line_answer(lines, line_no)],
                "template_id": "seg_t",
            })

    add("s00", [
        "the note below has no section headers at all.",
        "it reads as free running prose.",
        "nothing here looks like a heading.",
    ], [1])
    add("s01", [
        "Recorded by covering staff overnight.",
        "CHIEF COMPLAINT:",
        "Worsening shortness of breath.",
        "Two pillow orthopnea reported.",
        "ASSESSMENT AND PLAN:",
        "Diurese and recheck electrolytes.",
    ], [2, 5])
    add("s02", [
        "MEDICATIONS ON DISCHARGE",
        "Amlodipine 5 mg daily",
        "Atorvastatin 40 mg nightly",
    ], [1])
    add("s03", [
        "Discharge Medications",
        "Insulin glargine 20 units at night",
        "Aspirin 81 mg every morning",
    ], [2])
    add("s04", [
        "VITAL SIGNS:",
        "",
        "  Temperature 98.6 afebrile overnight  ",
        "",
        "PLAN:",
        "Discharge when ambulating.",
    ], [2])
    add("s05", [
        "IMPRESSION:",
        "Right lower lobe pneumonia improving.",
        "No pleural effusion identified.",
    ], [1], final_newline=False)
    add("s06", [
        "SOCIAL HISTORY:",
        "Drinks one café au lait every morning with family.",
        "Denies tobacco use.",
    ], [2])
    add("s07", [
        "OPERATIVE COURSE:",
        "The graft was patent.",
        "Bleeding controlled overnight.",
        "ASSESSMENT:",
        "Stable for discharge.",
    ], [1])
    s07_lines = [
        "OPERATIVE COURSE:",
        "The graft was patent.",
        "Bleeding controlled overnight.",
        "ASSESSMENT:",
        "Stable for discharge.",
    ]
    cross_start = sum(len(line) + 1 for line in s07_lines[:2])
    qa_pairs.append({
        "question_id": "q_cross",
        "question": "Which answer span straddles two sections?",
        "note_id": "s07",
        "answers": [{
            "text": s07_lines[2] + "\n" + s07_lines[3],
            "answer_start": cross_start,
        }],
        "template_id": "seg_t",
    })

    headers = [
        "PAST MEDICAL HISTORY:", "MEDICATIONS:", "LABORATORY DATA:",
        "HOSPITAL COURSE:", "SOCIAL HISTORY:", "FAMILY HISTORY:",
        "REVIEW OF SYSTEMS:", "PHYSICAL EXAMINATION:", "IMPRESSION:",
        "PLAN:", "DISPOSITION:", "VITAL SIGNS:",
    ]
    bodies = [
        "Chronic kidney disease stage three.",
        "Losartan 50 mg by mouth daily.",
        "Creatinine 1.4 trending down.",
        "Tolerated a regular diet well.",
        "Lives alone with home services.",
        "Father with early cardiac disease.",
        "No fevers chills or night sweats.",
        "Lungs clear to auscultation.",
        "Findings consistent with cellulitis.",
        "Complete a ten day antibiotic course.",
        "Discharged to home in stable condition.",
        "Heart rate 72 and regular.",
    ]
    for i in range(12):
        h1 = headers[i]
        h2 = headers[(i + 5) % 12]
        b1 = bodies[i]
        b2 = bodies[(i + 3) % 12]
        b3 = bodies[(i + 7) % 12]
        lines = [h1, b1, b2, h2, b3]
        if i % 3 == 0:
            lines = ["Dictated but not read."] + lines
        answer_line = lines.index(b2)
        add(f"s{8 + i:02d}", lines, [answer_line])

    ds = {"notes": notes, "qa_pairs": qa_pairs}
    check_dataset(ds)
    assert len(notes) == 20, len(notes)
    dump_json(out_dir / "seg_notes.json", ds)


def main():
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    out_dir = Path(sys.argv[1])
    out_dir.mkdir(parents=True, exist_ok=True)
    build_corpus(out_dir)
    build_generation(out_dir)
    build_kb(out_dir)
    build_synonym(out_dir)
    build_segmentation(out_dir)
    print(f"fixtures written to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
