#!/usr/bin/env python3
"""Regenerate the checked-in test fixture corpora (deterministic).

Usage: python scripts/make_fixtures.py
Writes tests/fixtures/medical_chat_500.jsonl and nested_groups.jsonl.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DISEASES = [
    ("cancer", 18), ("cancers", 4), ("cancerous", 3),
    ("infection", 8), ("infections", 5), ("infectious", 3), ("disinfection", 3),
    ("vaccination", 5), ("vaccinations", 3), ("vaccine", 6),
    ("treatment", 8), ("treatments", 4), ("mistreatment", 2),
    ("diabetes", 6), ("diabetic", 3),
    ("headache", 5), ("headaches", 3), ("migraine", 4), ("migraines", 2),
    ("hiv", 4), ("syphilis", 3), ("herpes", 3), ("chlamydia", 3),
    ("flu", 5), ("covid-19", 4), ("asthma", 4), ("arthritis", 3), ("anemia", 2),
]
SYMPTOMS = [
    ("fever", 6), ("cough", 5), ("nausea", 4), ("fatigue", 4), ("dizziness", 3),
    ("pain", 8), ("rash", 3), ("swelling", 3), ("bleeding", 3), ("insomnia", 2),
]
BODY = [
    ("heart", 5), ("lung", 3), ("lungs", 3), ("liver", 4), ("kidney", 3),
    ("kidneys", 2), ("skin", 5), ("arm", 3), ("leg", 3), ("stomach", 4),
    ("throat", 4), ("chest", 3),
]
MEDS = [
    ("aspirin", 5), ("ibuprofen", 4), ("insulin", 4), ("antibiotics", 5),
    ("paracetamol", 3), ("vitamin", 3),
]
PEOPLE = [
    ("doctor", 10), ("doctors", 4), ("nurse", 4), ("patient", 6),
    ("patients", 4), ("pharmacist", 2), ("specialist", 3),
]
NUMBERS = [("2", 6), ("3", 5), ("10", 4), ("24", 3), ("100", 2), ("500", 2)]

TEMPLATES = [
    "i am not a doctor, but {med} usually helps with {sym}",
    "the {person} said {disease} can cause {sym} and {sym2}",
    "my {body} hurts and i worry it could be {disease}",
    "take {num} tablets of {med} every {num2} hours for the {sym}",
    "screening for {disease} is recommended after age {num}",
    "{disease} and {disease2} share symptoms like {sym}",
    "please see a {person} about persistent {sym} in your {body}",
    "is {disease} contagious? {disease} spreads before any {sym} shows",
    "the clinic offers {disease} support and {med} for {sym}",
    "a {person} can check your {body} and rule out {disease}",
    "chronic {sym} in the {body} sometimes points to {disease}",
    "ask the {person} whether {med} interacts with {med2}",
    "my {person} recommends rest, fluids, and {med} for the {sym}",
    "after {num} days of {sym}, the {person} tested me for {disease}",
    "hospital hygiene like disinfection lowers the risk of {disease}",
]


def weighted(rng: random.Random, pool: list[tuple[str, int]]) -> str:
    words = [w for w, _ in pool]
    weights = [n for _, n in pool]
    return rng.choices(words, weights=weights, k=1)[0]


def gen_medical(rng: random.Random, n: int) -> list[str]:
    texts = []
    for _ in range(n):
        template = rng.choice(TEMPLATES)
        text = template.format(
            med=weighted(rng, MEDS),
            med2=weighted(rng, MEDS),
            sym=weighted(rng, SYMPTOMS),
            sym2=weighted(rng, SYMPTOMS),
            body=weighted(rng, BODY),
            disease=weighted(rng, DISEASES),
            disease2=weighted(rng, DISEASES),
            person=weighted(rng, PEOPLE),
            num=weighted(rng, NUMBERS),
            num2=weighted(rng, NUMBERS),
        )
        texts.append(text)
    return texts


NESTED_TEMPLATES = [
    "the infection ward reported new infections of an infectious strain",
    "disinfection of the room stops the infection from spreading",
    "vaccination records show vaccinations with the new vaccine",
    "the vaccine booster follows the vaccination schedule",
    "treatment plans and treatments were reviewed for mistreatment claims",
    "early treatment prevents a mild infection from getting worse",
    "nurses log each disinfection and every vaccination in the registry",
    "an infectious patient needs isolation and prompt treatment",
    "infections dropped after the vaccine rollout and strict disinfection",
    "the audit found mistreatment in two treatment wards",
]


def gen_nested(rng: random.Random, n: int) -> list[str]:
    return [rng.choice(NESTED_TEMPLATES) for _ in range(n)]


def write_jsonl(path: Path, texts: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for text in texts:
            fh.write(json.dumps({"text": text}, ensure_ascii=False))
            fh.write("\n")
    print(f"wrote {len(texts)} examples to {path}")


if __name__ == "__main__":
    write_jsonl(FIXTURES / "medical_chat_500.jsonl", gen_medical(random.Random(745031), 500))
    write_jsonl(FIXTURES / "nested_groups.jsonl", gen_nested(random.Random(918273), 40))
